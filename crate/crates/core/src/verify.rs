//! Finite checks of the classification results, grouped into suites.
//!
//! Each check returns one [`CriterionReport`]; the time-bound check returns
//! one report per part.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{initial_separation, path_time_bounds, placement_for_bound, y_set_diameter};
use crate::error::{Error, Result};
use crate::game::{initial_placements, play, PlayOutcome};
use crate::graph::{
    attach_paths, bridges, canonical_form, connected_graphs, connected_spanning_subgraphs,
    contract_bridges, generate, is_hamiltonian, trees, vertex_sum, CanonicalForm, FamilySpec,
    Graph,
};
use crate::solver::{
    classify, forces_within, refute_adversary_strategy, refute_adversary_strategy_with, solve,
    tree_reduction_equivalence_check, AttractorTable, OptimalAdversary, OptimalAgents,
    PlacementRule, SolverConfig, Target, Winner, DEFAULT_MAX_STATES,
};
use crate::strategies::{
    cut_vertex_lift, cycle_adversary, greedy_to_source_agents, grid_alternating_adversary,
    restrict_to_subgraph, sts_adversary, AdversaryStrategy, Tiebreak,
};
use crate::symmetry::{has_k_sts, validate_witness};

/// Seed for every randomized check.
pub const VERIFY_SEED: u64 = 0x5eed_2024;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriterionReport {
    pub id: String,
    pub title: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{mark}] {:<4} {}: {}", self.id, self.title, self.detail)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Trees,
    Cycles,
    Cliques,
    Theta,
    Constructions,
    Grid,
    Symmetry,
    Times,
    Reduction,
    All,
}

impl Suite {
    pub fn criteria(self) -> Vec<u8> {
        match self {
            Suite::Trees => vec![1],
            Suite::Cycles => vec![2],
            Suite::Cliques => vec![3],
            Suite::Theta => vec![4],
            Suite::Constructions => vec![5, 6, 7, 8],
            Suite::Grid => vec![9],
            Suite::Symmetry => vec![10],
            Suite::Times => vec![11],
            Suite::Reduction => vec![12],
            Suite::All => (1..=12).collect(),
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "trees" => Suite::Trees,
            "cycles" => Suite::Cycles,
            "cliques" => Suite::Cliques,
            "theta" => Suite::Theta,
            "constructions" => Suite::Constructions,
            "grid" => Suite::Grid,
            "symmetry" => Suite::Symmetry,
            "times" => Suite::Times,
            "reduction" => Suite::Reduction,
            "all" => Suite::All,
            other => return Err(Error::Precondition(format!("unknown suite '{other}'"))),
        })
    }
}

pub fn run_suite(suite: Suite) -> Vec<CriterionReport> {
    suite
        .criteria()
        .into_iter()
        .flat_map(run_criterion)
        .collect()
}

pub fn run_criterion(id: u8) -> Vec<CriterionReport> {
    let started = Instant::now();
    let mut reports = match id {
        1 => vec![trees_agents()],
        2 => vec![cycles()],
        3 => vec![cliques()],
        4 => vec![theta()],
        5 => vec![monotonicity()],
        6 => vec![hamiltonian()],
        7 => vec![cut_vertex()],
        8 => vec![contraction()],
        9 => vec![grid()],
        10 => vec![symmetry()],
        11 => times(),
        12 => vec![reduction()],
        _ => vec![report(
            id.to_string(),
            "unknown",
            Err(Error::Precondition("no such criterion".into())),
        )],
    };
    let secs = started.elapsed().as_secs_f64();
    if let Some(last) = reports.last_mut() {
        last.detail.push_str(&format!(" [{secs:.1}s]"));
    }
    reports
}

fn report(id: impl Into<String>, title: &str, outcome: Result<(bool, String)>) -> CriterionReport {
    let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    CriterionReport {
        id: id.into(),
        title: title.into(),
        passed,
        detail,
    }
}

fn fam(spec: &str) -> Result<Graph> {
    generate(&spec.parse::<FamilySpec>()?)
}

fn winner(g: &Graph, k: usize) -> Result<Winner> {
    Ok(classify(g, k, PlacementRule::AdversaryPlaces)?.winner)
}

/// Winners memoized by isomorphism class.
#[derive(Default)]
struct WinnerCache(Mutex<HashMap<(CanonicalForm, usize), Winner>>);

impl WinnerCache {
    fn get(&self, g: &Graph, k: usize) -> Result<Winner> {
        let key = (canonical_form(g), k);
        if let Some(&w) = self.0.lock().expect("cache lock").get(&key) {
            return Ok(w);
        }
        let w = winner(g, k)?;
        self.0.lock().expect("cache lock").insert(key, w);
        Ok(w)
    }
}

fn expect_winners(cases: &[(&str, usize, Winner)]) -> Result<(bool, String)> {
    let mut bad = Vec::new();
    for &(spec, k, want) in cases {
        let got = winner(&fam(spec)?, k)?;
        if got != want {
            bad.push(format!("{spec} k={k}: {got:?}"));
        }
    }
    Ok((
        bad.is_empty(),
        if bad.is_empty() {
            format!("{} cases", cases.len())
        } else {
            bad.join("; ")
        },
    ))
}

fn trees_agents() -> CriterionReport {
    let run = || -> Result<(bool, String)> {
        let cases: Vec<(Graph, usize)> = (2..=7)
            .flat_map(|n| {
                trees(n)
                    .into_iter()
                    .flat_map(move |t| (2..=4.min(n)).map(move |k| (t.clone(), k)))
            })
            .collect();
        let bad: Vec<String> = cases
            .par_iter()
            .map(|(t, k)| {
                winner(t, *k)
                    .map(|w| (w != Winner::Agents).then(|| format!("{:?} k={k}", t.edges())))
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        Ok((
            bad.is_empty(),
            format!(
                "{} tree/k pairs, {} not Agents {:?}",
                cases.len(),
                bad.len(),
                bad
            ),
        ))
    };
    report("1", "trees are Agents wins", run())
}

fn cycles() -> CriterionReport {
    let run = || -> Result<(bool, String)> {
        let mut cases = Vec::new();
        for m in 5..=8 {
            cases.push((format!("cycle:{m}"), 2, Winner::Adversary));
            cases.push((format!("cycle:{m}"), 3, Winner::Agents));
        }
        let refs: Vec<(&str, usize, Winner)> =
            cases.iter().map(|(s, k, w)| (s.as_str(), *k, *w)).collect();
        let (ok, detail) = expect_winners(&refs)?;
        let c4 = fam("cycle:4")?;
        let w4 = winner(&c4, 2)?;
        let refuted =
            refute_adversary_strategy(&c4, 2, &cycle_adversary(Tiebreak::LowestNeighbor))?
                .is_some();
        let agree = (w4 == Winner::Agents) == refuted;
        Ok((
            ok && agree,
            format!("{detail}; C_4 k=2 solver {w4:?}, cycle strategy refuted: {refuted}"),
        ))
    };
    report("2", "cycles: two agents lose, three win", run())
}

fn cliques() -> CriterionReport {
    use Winner::*;
    let run = || {
        expect_winners(&[
            ("clique:5", 2, Adversary),
            ("clique:5", 3, Adversary),
            ("clique:5", 4, Agents),
            ("clique:6", 2, Adversary),
            ("clique:6", 3, Adversary),
        ])
    };
    report("3", "cliques need k >= n-1", run())
}

fn theta() -> CriterionReport {
    use Winner::*;
    let run = || -> Result<(bool, String)> {
        let (ok, detail) = expect_winners(&[
            ("theta:3,3", 2, Adversary),
            ("theta:3,3", 3, Agents),
            ("theta:3,3,3", 2, Adversary),
            ("theta:3,3,3", 3, Adversary),
            ("theta:3,3,3", 4, Agents),
        ])?;
        let mut notes = Vec::new();
        for spec in ["theta:2,2", "theta:1,2"] {
            let g = fam(spec)?;
            notes.push(format!("{spec} k=2 {:?}", winner(&g, 2)?));
        }
        Ok((ok, format!("{detail}; boundary: {}", notes.join(", "))))
    };
    report("4", "theta graphs", run())
}

fn monotonicity() -> CriterionReport {
    let run = || -> Result<(bool, String)> {
        let cache = WinnerCache::default();
        let mut pairs = 0usize;
        let mut bad = Vec::new();
        for n in 2..=5 {
            for h in connected_graphs(n) {
                for k in [2, 3].into_iter().filter(|&k| k <= n) {
                    let wh = cache.get(&h, k)?;
                    for mask in connected_spanning_subgraphs(&h)? {
                        let g = h.edge_subgraph(mask);
                        pairs += 1;
                        if cache.get(&g, k)? == Winner::Adversary && wh != Winner::Adversary {
                            bad.push(format!("{:?} < {:?} k={k}", g.edges(), h.edges()));
                        }
                    }
                }
            }
        }
        Ok((
            bad.is_empty(),
            format!("{pairs} pairs, {} violations {:?}", bad.len(), bad),
        ))
    };
    report("5", "Adversary wins pass to supergraphs", run())
}

/// A Hamiltonian graph on 5 to 7 vertices: a shuffled cycle plus random
/// chords. Returns the graph and its cycle.
pub fn random_hamiltonian(rng: &mut ChaCha8Rng) -> Result<(Graph, Graph)> {
    let n = rng.gen_range(5..=7);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let cycle: Vec<(usize, usize)> = (0..n).map(|i| (order[i], order[(i + 1) % n])).collect();
    let mut edges = cycle.clone();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(0.3) {
                edges.push((u, v));
            }
        }
    }
    Ok((Graph::new(n, edges)?, Graph::new(n, cycle)?))
}

fn hamiltonian() -> CriterionReport {
    let run = || -> Result<(bool, String)> {
        let mut rng = ChaCha8Rng::seed_from_u64(VERIFY_SEED);
        let mut bad = Vec::new();
        for i in 0..20 {
            let (g, cycle) = random_hamiltonian(&mut rng)?;
            let adv = restrict_to_subgraph(
                Box::new(cycle_adversary(Tiebreak::LowestNeighbor)),
                &cycle,
                &g,
            )?;
            let ok = is_hamiltonian(&g)?
                && winner(&g, 2)? == Winner::Adversary
                && refute_adversary_strategy(&g, 2, &adv)?.is_none();
            if !ok {
                bad.push(format!("#{i} {:?}", g.edges()));
            }
        }
        Ok((
            bad.is_empty(),
            format!("20 graphs, {} failures {:?}", bad.len(), bad),
        ))
    };
    report("6", "Hamiltonian graphs are Adversary wins for k=2", run())
}

fn optimal_block_adversary(block: &Graph, k: usize) -> Result<Box<dyn AdversaryStrategy>> {
    let table = solve(
        block,
        k,
        1,
        Target::AllKnowledgeable,
        &SolverConfig::default(),
    )?;
    Ok(Box::new(OptimalAdversary::new(Arc::new(table))))
}

fn cut_vertex() -> CriterionReport {
    let run = || -> Result<(bool, String)> {
        let blocks = [("cycle:5", 2), ("clique:5", 3), ("theta:3,3,3", 3)];
        let mut bad = Vec::new();
        let mut count = 0;
        for (bspec, k) in blocks {
            let b = fam(bspec)?;
            for rspec in ["path:3", "cycle:3", "clique:3"] {
                let h = vertex_sum(&b, 0, &fam(rspec)?, 0)?;
                let inner: Box<dyn AdversaryStrategy> = if bspec.starts_with("cycle") {
                    Box::new(cycle_adversary(Tiebreak::LowestNeighbor))
                } else {
                    optimal_block_adversary(&b, k)?
                };
                let members: Vec<usize> = (0..b.vertex_count()).collect();
                let lift = cut_vertex_lift(inner, &h, &members, 0)?;
                count += 1;
                let w = winner(&h, k)?;
                let refuted = refute_adversary_strategy(&h, k, &lift)?.is_some();
                if w != Winner::Adversary || refuted {
                    bad.push(format!(
                        "{bspec}+{rspec} k={k}: {w:?}, lift refuted {refuted}"
                    ));
                }
            }
        }
        Ok((bad.is_empty(), format!("{count} sums, failures {:?}", bad)))
    };
    report("7", "cut-vertex sums keep Adversary wins", run())
}

/// Path-attachment instances: base graph and pendant path lengths.
pub const ATTACH_CASES: [(&str, &[usize]); 10] = [
    ("cycle:5", &[1]),
    ("cycle:5", &[2, 0, 1]),
    ("cycle:4", &[1, 1]),
    ("clique:4", &[2]),
    ("clique:4", &[1, 0, 1]),
    ("path:3", &[1, 0, 2]),
    ("cycle:6", &[1]),
    ("theta:2,2,2", &[1]),
    ("cycle:3", &[1, 1, 1]),
    ("clique:5", &[1]),
];

fn contraction() -> CriterionReport {
    let run = || -> Result<(bool, String)> {
        let cache = WinnerCache::default();
        let mut checked = 0usize;
        let mut skipped = 0usize;
        let mut bad = Vec::new();
        for n in 2..=6 {
            for g in connected_graphs(n) {
                let bs = bridges(&g)?;
                if bs.is_empty() {
                    continue;
                }
                let (h, _) = contract_bridges(&g, &bs)?;
                for k in [2, 3].into_iter().filter(|&k| k <= n) {
                    if k > h.vertex_count() {
                        skipped += 1;
                        continue;
                    }
                    checked += 1;
                    if cache.get(&g, k)? != cache.get(&h, k)? {
                        bad.push(format!("{:?} k={k}", g.edges()));
                    }
                }
            }
        }
        for (spec, lengths) in ATTACH_CASES {
            let g = fam(spec)?;
            let a = attach_paths(&g, lengths);
            for k in [2, 3] {
                checked += 1;
                if cache.get(&g, k)? != cache.get(&a, k)? {
                    bad.push(format!("{spec} + paths {lengths:?} k={k}"));
                }
            }
        }
        Ok((
            bad.is_empty(),
            format!("{checked} comparisons ({skipped} skipped: k above contracted size), violations {bad:?}"),
        ))
    };
    report("8", "bridge contraction preserves the winner", run())
}

fn grid() -> CriterionReport {
    let run = || -> Result<(bool, String)> {
        let mut notes = Vec::new();
        let mut ok = true;
        for (rows, cols) in [(3, 3), (3, 4)] {
            let g = generate(&FamilySpec::Grid { rows, cols })?;
            let (s0, mut adv) = grid_alternating_adversary(rows, cols)?;
            let res = play(&g, &s0, &mut adv, &mut greedy_to_source_agents(), 100)?;
            let frozen = res.trace.iter().all(|r| r.knowledgeable_count == 1);
            let cycled = matches!(res.outcome, PlayOutcome::CycleDetected { period: 2, .. });
            let size_ok = (rows, cols) != (3, 3) || s0.agent_count() == 6;
            ok &= frozen && cycled && size_ok;
            notes.push(format!(
                "{rows}x{cols}: {} agents, {:?}, frozen {frozen}",
                s0.agent_count(),
                res.outcome
            ));
        }
        Ok((ok, notes.join("; ")))
    };
    report("9", "grid alternation stalls greedy agents", run())
}

fn symmetry() -> CriterionReport {
    let run = || -> Result<(bool, String)> {
        let k5 = fam("clique:5")?;
        let Some(w) = has_k_sts(&k5, 2)? else {
            return Ok((false, "no 2-STS witness for K_5".into()));
        };
        validate_witness(&k5, &w)?;
        let adv = sts_adversary(w);
        let adv_places = refute_adversary_strategy(&k5, 2, &adv)?.is_none();
        let agents_place = refute_adversary_strategy_with(
            &k5,
            2,
            &adv,
            PlacementRule::AgentsPlace,
            DEFAULT_MAX_STATES,
        )?
        .is_none();
        let mut paths_ok = true;
        for n in 2..=6 {
            paths_ok &= has_k_sts(&fam(&format!("path:{n}"))?, 2)?.is_none();
        }
        let graphs: Vec<Graph> = (2..=6).flat_map(connected_graphs).collect();
        let results: Vec<(bool, bool)> = graphs
            .par_iter()
            .map(|g| -> Result<(bool, bool)> {
                match has_k_sts(g, 2)? {
                    None => Ok((false, true)),
                    Some(_) => Ok((true, winner(g, 2)? == Winner::Adversary)),
                }
            })
            .collect::<Result<_>>()?;
        let found = results.iter().filter(|r| r.0).count();
        let violations = results.iter().filter(|r| !r.1).count();
        Ok((
            adv_places && agents_place && paths_ok && violations == 0,
            format!(
                "K_5 witness valid; unrefuted (adversary places {adv_places}, agents place {agents_place}); \
                 paths none {paths_ok}; sweep {} graphs, {found} with witness, {violations} violations",
                graphs.len()
            ),
        ))
    };
    report("10", "spanning-tree symmetry gives Adversary wins", run())
}

fn times() -> Vec<CriterionReport> {
    vec![
        report("11a", "path times match closed forms", path_times()),
        report("11b", "two agents on trees take ceil(d/2)", tree_times()),
        report("11c", "set-diameter lower bound", set_diameter_bound()),
        report(
            "11d",
            "separation drops at most 2 per round",
            separation_traces(),
        ),
    ]
}

fn path_times() -> Result<(bool, String)> {
    let mut bad = Vec::new();
    let mut count = 0;
    for n in 2..=8 {
        let p = fam(&format!("path:{n}"))?;
        for x in 1..=3 {
            for y in 1..=2 {
                if x + y > n {
                    continue;
                }
                count += 1;
                let got = crate::solver::classify_config(&p, x, y)?;
                let want = path_time_bounds(n, x, y)?;
                if got.first_spread_time != Some(want.first_spread)
                    || got.win_time != Some(want.all_knowledgeable)
                {
                    bad.push(format!(
                        "P_{n} x={x} y={y}: solver ({:?},{:?}) formula ({},{})",
                        got.first_spread_time,
                        got.win_time,
                        want.first_spread,
                        want.all_knowledgeable
                    ));
                }
            }
        }
    }
    Ok((
        bad.is_empty(),
        format!(
            "{count} cases, {} mismatches: {}",
            bad.len(),
            bad.join("; ")
        ),
    ))
}

fn tree_times() -> Result<(bool, String)> {
    let ts: Vec<Graph> = (2..=8).flat_map(trees).collect();
    let bad: Vec<String> = ts
        .par_iter()
        .map(|t| -> Result<Option<String>> {
            let want = t.diameter()?.div_ceil(2);
            let got = classify(t, 2, PlacementRule::AdversaryPlaces)?.optimal_time;
            Ok((got != Some(want)).then(|| format!("{:?}: {got:?} vs {want}", t.edges())))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok((
        bad.is_empty(),
        format!("{} trees, mismatches {bad:?}", ts.len()),
    ))
}

fn set_diameter_bound() -> Result<(bool, String)> {
    let mut cases = Vec::new();
    for n in 2..=7 {
        for gi in 0..connected_graphs(n).len() {
            for y in 1..n {
                for x in 1..=n - y {
                    cases.push((n, gi, x, y));
                }
            }
        }
    }
    let bad: Vec<String> = cases
        .par_iter()
        .map(|&(n, gi, x, y)| -> Result<Option<String>> {
            let g = &connected_graphs(n)[gi];
            let bound = y_set_diameter(g, y)?.div_ceil(2);
            let p = placement_for_bound(g, x, y)?;
            // a win in fewer than `bound` rounds would break the bound
            let fast = forces_within(
                g,
                &p,
                Target::AllKnowledgeable,
                bound - 1,
                &SolverConfig::default(),
            )?;
            Ok(fast.then(|| format!("{:?} x={x} y={y}", g.edges())))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok((
        bad.is_empty(),
        format!("{} (graph, x, y) cases, violations {bad:?}", cases.len()),
    ))
}

fn separation_traces() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(VERIFY_SEED ^ 0xd);
    let pool: Vec<Graph> = (4..=6).flat_map(connected_graphs).collect();
    let mut tables: HashMap<(usize, usize), Arc<AttractorTable>> = HashMap::new();
    let mut traces = 0;
    let mut rounds = 0;
    let mut bad = Vec::new();
    while traces < 1000 {
        let gi = rng.gen_range(0..pool.len());
        let k = rng.gen_range(2..=3);
        let g = &pool[gi];
        let table = match tables.get(&(gi, k)) {
            Some(t) => t.clone(),
            None => {
                let t = Arc::new(solve(
                    g,
                    k,
                    1,
                    Target::AllKnowledgeable,
                    &SolverConfig::default(),
                )?);
                tables.insert((gi, k), t.clone());
                t
            }
        };
        let placements = initial_placements(g, k)?;
        let s0 = placements.choose(&mut rng).expect("placements").clone();
        let Some(rank) = table.rank(&s0) else {
            continue;
        };
        let mut adv = OptimalAdversary::new(table.clone());
        let mut ag = OptimalAgents::new(table.clone());
        let res = play(g, &s0, &mut adv, &mut ag, rank + 1)?;
        traces += 1;
        if res.outcome != (PlayOutcome::AgentsWinAt { round: rank }) {
            bad.push(format!(
                "{:?} from {s0}: {:?}, rank {rank}",
                g.edges(),
                res.outcome
            ));
        }
        let mut prev = if s0.is_won() {
            None
        } else {
            Some(initial_separation(g, &s0)?)
        };
        for rec in &res.trace {
            let after = &rec.positions_after;
            rounds += 1;
            let now = if after.is_won() {
                None
            } else {
                Some(initial_separation(g, after)?)
            };
            if let (Some(a), Some(b)) = (prev, now) {
                if a > b + 2 {
                    bad.push(format!("{:?}: separation {a} -> {b}", g.edges()));
                }
            }
            prev = now;
        }
    }
    Ok((
        bad.is_empty(),
        format!("{traces} traces, {rounds} rounds, violations {bad:?}"),
    ))
}

fn reduction() -> CriterionReport {
    let run = || -> Result<(bool, String)> {
        let graphs: Vec<Graph> = (2..=5)
            .flat_map(connected_graphs)
            .filter(|g| g.edge_count() <= 8)
            .collect();
        let bad: Vec<String> = graphs
            .par_iter()
            .map(|g| {
                tree_reduction_equivalence_check(g, 2)
                    .map(|ok| (!ok).then(|| format!("{:?}", g.edges())))
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        Ok((
            bad.is_empty(),
            format!("{} graphs, mismatches {bad:?}", graphs.len()),
        ))
    };
    report("12", "tree and subgraph adversaries agree", run())
}
