//! Acceptance harness: one PASS/FAIL line per criterion. Expected values are
//! the published results; structural quantities are recomputed here by brute
//! force rather than taken from the library.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use broadcast_game::bounds::placement_for_bound;
use broadcast_game::game::{initial_placements, play, GameState, PlayOutcome};
use broadcast_game::graph::{
    attach_paths, canonical_form, connected_graphs, connected_spanning_subgraphs, contract_bridges,
    generate, trees, vertex_sum, CanonicalForm, FamilySpec, Graph,
};
use broadcast_game::solver::{
    classify, classify_config, forces_within, refute_adversary_strategy,
    refute_adversary_strategy_with, solve, tree_reduction_equivalence_check, AttractorTable,
    OptimalAdversary, OptimalAgents, PlacementRule, SolverConfig, Target, Winner,
    DEFAULT_MAX_STATES,
};
use broadcast_game::strategies::{
    cut_vertex_lift, cycle_adversary, greedy_to_source_agents, grid_alternating_adversary,
    restrict_to_subgraph, sts_adversary, AdversaryStrategy, Tiebreak,
};
use broadcast_game::symmetry::{has_k_sts, validate_witness};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use Winner::{Adversary, Agents};

const TREES_RUNTIME_LIMIT: Duration = Duration::from_secs(30);
const CLIQUES_RUNTIME_LIMIT: Duration = Duration::from_secs(300);
/// Round counts are integers; every time comparison is exact.
const TIME_TOLERANCE_ROUNDS: usize = 0;
const MAX_SEPARATION_DROP: usize = 2;
const HAMILTONIAN_SAMPLES: usize = 20;
const SEPARATION_TRACES: usize = 1000;
const SEED: u64 = 0x5eed_2024;

/// Unlabeled trees and connected graphs on n = 1..=8 vertices.
const TREE_COUNTS: [usize; 8] = [1, 1, 1, 2, 3, 6, 11, 23];
const CONNECTED_COUNTS: [usize; 7] = [1, 1, 2, 6, 21, 112, 853];

type Outcome = Result<(bool, String), String>;
type Criterion = (&'static str, &'static str, fn() -> Outcome);

// ---- brute-force oracles ----

fn adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    adj
}

fn bfs(adj: &[Vec<usize>], src: usize) -> Vec<Option<usize>> {
    let mut d = vec![None; adj.len()];
    d[src] = Some(0);
    let mut queue = std::collections::VecDeque::from([src]);
    while let Some(u) = queue.pop_front() {
        for &w in &adj[u] {
            if d[w].is_none() {
                d[w] = Some(d[u].unwrap() + 1);
                queue.push_back(w);
            }
        }
    }
    d
}

fn connected(n: usize, edges: &[(usize, usize)]) -> bool {
    n == 0 || bfs(&adjacency(n, edges), 0).iter().all(Option::is_some)
}

fn dist_matrix(g: &Graph) -> Vec<Vec<usize>> {
    let adj = adjacency(g.vertex_count(), g.edges());
    (0..g.vertex_count())
        .map(|v| bfs(&adj, v).into_iter().map(Option::unwrap).collect())
        .collect()
}

fn diameter(g: &Graph) -> usize {
    dist_matrix(g).into_iter().flatten().max().unwrap_or(0)
}

fn is_tree(g: &Graph) -> bool {
    g.edge_count() + 1 == g.vertex_count() && connected(g.vertex_count(), g.edges())
}

fn bridges(g: &Graph) -> Vec<(usize, usize)> {
    g.edges()
        .iter()
        .filter(|e| {
            let rest: Vec<_> = g.edges().iter().copied().filter(|f| f != *e).collect();
            !connected(g.vertex_count(), &rest)
        })
        .copied()
        .collect()
}

/// Connected spanning edge subsets, as edge lists.
fn spanning_subgraphs(g: &Graph) -> Vec<Vec<(usize, usize)>> {
    let m = g.edge_count();
    (0u32..1 << m)
        .map(|mask| {
            (0..m)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| g.edges()[i])
                .collect::<Vec<_>>()
        })
        .filter(|es| connected(g.vertex_count(), es))
        .collect()
}

fn hamiltonian(g: &Graph) -> bool {
    fn extend(g: &Graph, path: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let n = g.vertex_count();
        let last = *path.last().unwrap();
        if path.len() == n {
            return g.has_edge(last, path[0]);
        }
        for v in 0..n {
            if !used[v] && g.has_edge(last, v) {
                used[v] = true;
                path.push(v);
                if extend(g, path, used) {
                    return true;
                }
                path.pop();
                used[v] = false;
            }
        }
        false
    }
    let mut used = vec![false; g.vertex_count()];
    used[0] = true;
    g.vertex_count() >= 3 && extend(g, &mut vec![0], &mut used)
}

/// Max over vertices v and y-sets Y not containing v of dist(v, Y).
fn y_set_diameter(g: &Graph, y: usize) -> usize {
    let n = g.vertex_count();
    let d = dist_matrix(g);
    let mut best = 0;
    for mask in 0u32..1 << n {
        if mask.count_ones() as usize != y {
            continue;
        }
        for v in (0..n).filter(|v| mask >> v & 1 == 0) {
            let near = (0..n)
                .filter(|u| mask >> u & 1 == 1)
                .map(|u| d[v][u])
                .min()
                .unwrap();
            best = best.max(near);
        }
    }
    best
}

fn separation(d: &[Vec<usize>], s: &GameState) -> usize {
    s.ignorant()
        .iter()
        .map(|&i| s.knowledgeable().iter().map(|&k| d[i][k]).min().unwrap())
        .max()
        .unwrap()
}

// ---- helpers ----

fn fam(spec: &str) -> Graph {
    generate(&spec.parse::<FamilySpec>().unwrap()).unwrap()
}

fn winner(g: &Graph, k: usize) -> Result<Winner, String> {
    classify(g, k, PlacementRule::AdversaryPlaces)
        .map(|c| c.winner)
        .map_err(|e| e.to_string())
}

#[derive(Default)]
struct Cache(HashMap<(CanonicalForm, usize), Winner>);

impl Cache {
    fn get(&mut self, g: &Graph, k: usize) -> Result<Winner, String> {
        let key = (canonical_form(g), k);
        if let Some(&w) = self.0.get(&key) {
            return Ok(w);
        }
        let w = winner(g, k)?;
        self.0.insert(key, w);
        Ok(w)
    }
}

fn expect(cases: &[(&str, usize, Winner)]) -> Result<Vec<String>, String> {
    let mut bad = Vec::new();
    for &(spec, k, want) in cases {
        let got = winner(&fam(spec), k)?;
        if got != want {
            bad.push(format!("{spec} k={k}: got {got:?}, expected {want:?}"));
        }
    }
    Ok(bad)
}

fn summary(total: usize, bad: &[String]) -> (bool, String) {
    (
        bad.is_empty(),
        format!("{total} cases, {} failures {bad:?}", bad.len()),
    )
}

fn within(got: Option<usize>, want: usize) -> bool {
    got.is_some_and(|t| t.abs_diff(want) < TIME_TOLERANCE_ROUNDS + 1)
}

fn e<T: std::fmt::Display>(x: T) -> String {
    x.to_string()
}

fn check_counts() -> Result<(), String> {
    for n in 1..=8 {
        let ts = trees(n);
        if ts.len() != TREE_COUNTS[n - 1] || !ts.iter().all(is_tree) {
            return Err(format!("tree enumeration wrong for n={n}: {}", ts.len()));
        }
    }
    for n in 1..=7 {
        let gs = connected_graphs(n);
        if gs.len() != CONNECTED_COUNTS[n - 1] || !gs.iter().all(|g| connected(n, g.edges())) {
            return Err(format!(
                "connected graph enumeration wrong for n={n}: {}",
                gs.len()
            ));
        }
    }
    Ok(())
}

// ---- criteria ----

fn c1() -> Outcome {
    check_counts()?;
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut total = 0;
    for n in 2..=7 {
        for t in trees(n) {
            for k in (2..=4).filter(|&k| k <= n) {
                total += 1;
                if winner(&t, k)? != Agents {
                    bad.push(format!("{:?} k={k}", t.edges()));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let (ok, detail) = summary(total, &bad);
    Ok((
        ok && elapsed < TREES_RUNTIME_LIMIT,
        format!("{detail}, {elapsed:.1?} (limit {TREES_RUNTIME_LIMIT:?})"),
    ))
}

fn c2() -> Outcome {
    let mut cases = Vec::new();
    for m in 5..=8 {
        cases.push((format!("cycle:{m}"), 2, Adversary));
        cases.push((format!("cycle:{m}"), 3, Agents));
    }
    let refs: Vec<_> = cases.iter().map(|(s, k, w)| (s.as_str(), *k, *w)).collect();
    let bad = expect(&refs)?;
    let c4 = fam("cycle:4");
    let w4 = winner(&c4, 2)?;
    let refuted = refute_adversary_strategy(&c4, 2, &cycle_adversary(Tiebreak::LowestNeighbor))
        .map_err(e)?
        .is_some();
    let agree = (w4 == Agents) == refuted;
    let (ok, detail) = summary(refs.len(), &bad);
    Ok((
        ok && agree,
        format!("{detail}; C_4 k=2 solver {w4:?}, cycle strategy refuted {refuted}, agree {agree}"),
    ))
}

fn c3() -> Outcome {
    let start = Instant::now();
    let cases = [
        ("clique:5", 2, Adversary),
        ("clique:5", 3, Adversary),
        ("clique:5", 4, Agents),
        ("clique:6", 2, Adversary),
        ("clique:6", 3, Adversary),
    ];
    let bad = expect(&cases)?;
    let elapsed = start.elapsed();
    let (ok, detail) = summary(cases.len(), &bad);
    Ok((
        ok && elapsed < CLIQUES_RUNTIME_LIMIT,
        format!("{detail}, {elapsed:.1?} (limit {CLIQUES_RUNTIME_LIMIT:?})"),
    ))
}

fn c4() -> Outcome {
    let cases = [
        ("theta:3,3", 2, Adversary),
        ("theta:3,3", 3, Agents),
        ("theta:3,3,3", 2, Adversary),
        ("theta:3,3,3", 3, Adversary),
        ("theta:3,3,3", 4, Agents),
    ];
    let bad = expect(&cases)?;
    let (ok, detail) = summary(cases.len(), &bad);
    let boundary = format!(
        "theta:2,2 k=2 {:?}, theta:1,2 k=2 {:?}",
        winner(&fam("theta:2,2"), 2)?,
        winner(&fam("theta:1,2"), 2)?
    );
    Ok((ok, format!("{detail}; recorded: {boundary}")))
}

fn c5() -> Outcome {
    let mut cache = Cache::default();
    let mut pairs = 0;
    let mut bad = Vec::new();
    for n in 2..=5 {
        for h in connected_graphs(n) {
            let subs = spanning_subgraphs(&h);
            let lib = connected_spanning_subgraphs(&h).map_err(e)?;
            if lib.len() != subs.len() {
                return Err(format!(
                    "spanning subgraph count differs on {:?}",
                    h.edges()
                ));
            }
            for k in [2, 3].into_iter().filter(|&k| k <= n) {
                let wh = cache.get(&h, k)?;
                for edges in &subs {
                    pairs += 1;
                    let g = Graph::new(n, edges.iter().copied()).map_err(e)?;
                    if cache.get(&g, k)? == Adversary && wh != Adversary {
                        bad.push(format!("{edges:?} in {:?} k={k}", h.edges()));
                    }
                }
            }
        }
    }
    Ok(summary(pairs, &bad))
}

fn c6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut bad = Vec::new();
    for i in 0..HAMILTONIAN_SAMPLES {
        let n = rng.gen_range(5..=7);
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        let cycle_edges: Vec<_> = (0..n).map(|j| (order[j], order[(j + 1) % n])).collect();
        let mut edges = cycle_edges.clone();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(0.3) {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::new(n, edges).map_err(e)?;
        let cycle = Graph::new(n, cycle_edges).map_err(e)?;
        let adv = restrict_to_subgraph(
            Box::new(cycle_adversary(Tiebreak::LowestNeighbor)),
            &cycle,
            &g,
        )
        .map_err(e)?;
        let ham = hamiltonian(&g);
        let w = winner(&g, 2)?;
        let refuted = refute_adversary_strategy(&g, 2, &adv).map_err(e)?.is_some();
        if !ham || w != Adversary || refuted {
            bad.push(format!(
                "#{i} {:?}: hamiltonian {ham}, {w:?}, refuted {refuted}",
                g.edges()
            ));
        }
    }
    Ok(summary(HAMILTONIAN_SAMPLES, &bad))
}

fn c7() -> Outcome {
    let mut bad = Vec::new();
    let mut total = 0;
    for (bspec, k) in [("cycle:5", 2), ("clique:5", 3), ("theta:3,3,3", 3)] {
        let b = fam(bspec);
        for rspec in ["path:3", "cycle:3", "clique:3"] {
            total += 1;
            let h = vertex_sum(&b, 0, &fam(rspec), 0).map_err(e)?;
            let inner: Box<dyn AdversaryStrategy> = if bspec.starts_with("cycle") {
                Box::new(cycle_adversary(Tiebreak::LowestNeighbor))
            } else {
                let t = solve(&b, k, 1, Target::AllKnowledgeable, &SolverConfig::default())
                    .map_err(e)?;
                Box::new(OptimalAdversary::new(Arc::new(t)))
            };
            let members: Vec<usize> = (0..b.vertex_count()).collect();
            let lift = cut_vertex_lift(inner, &h, &members, 0).map_err(e)?;
            let w = winner(&h, k)?;
            let refuted = refute_adversary_strategy(&h, k, &lift)
                .map_err(e)?
                .is_some();
            if w != Adversary || refuted {
                bad.push(format!("{bspec}+{rspec} k={k}: {w:?}, refuted {refuted}"));
            }
        }
    }
    Ok(summary(total, &bad))
}

fn c8() -> Outcome {
    let mut cache = Cache::default();
    let mut total = 0;
    let mut skipped = 0;
    let mut bad = Vec::new();
    for n in 2..=6 {
        for g in connected_graphs(n) {
            let bs = bridges(&g);
            if bs.is_empty() {
                continue;
            }
            let (h, _) = contract_bridges(&g, &bs).map_err(e)?;
            if h.vertex_count() != n - bs.len() || !bridges(&h).is_empty() {
                return Err(format!("contraction of {:?} has wrong shape", g.edges()));
            }
            for k in [2, 3].into_iter().filter(|&k| k <= n) {
                // fewer vertices than agents: no standard placement on h
                if k > h.vertex_count() {
                    skipped += 1;
                    continue;
                }
                total += 1;
                if cache.get(&g, k)? != cache.get(&h, k)? {
                    bad.push(format!("{:?} k={k}", g.edges()));
                }
            }
        }
    }
    let attach: [(&str, &[usize]); 10] = [
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
    for (spec, lengths) in attach {
        let g = fam(spec);
        let a = attach_paths(&g, lengths);
        if a.vertex_count() != g.vertex_count() + lengths.iter().sum::<usize>() {
            return Err(format!("attach_paths on {spec} has wrong size"));
        }
        for k in [2, 3] {
            total += 1;
            if cache.get(&g, k)? != cache.get(&a, k)? {
                bad.push(format!("{spec} + {lengths:?} k={k}"));
            }
        }
    }
    let (ok, detail) = summary(total, &bad);
    Ok((
        ok,
        format!("{detail}, {skipped} skipped with k above contracted size"),
    ))
}

fn c9() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for (rows, cols) in [(3, 3), (3, 4)] {
        let g = generate(&FamilySpec::Grid { rows, cols }).map_err(e)?;
        let (s0, mut adv) = grid_alternating_adversary(rows, cols).map_err(e)?;
        let res = play(&g, &s0, &mut adv, &mut greedy_to_source_agents(), 100).map_err(e)?;
        let frozen = res
            .trace
            .iter()
            .all(|r| r.positions_after.knowledgeable().len() == 1);
        let period2 = matches!(res.outcome, PlayOutcome::CycleDetected { period: 2, .. });
        let size = (rows, cols) != (3, 3) || s0.agent_count() == 6;
        ok &= frozen && period2 && size;
        notes.push(format!(
            "{rows}x{cols}: {} agents, {:?}, frozen {frozen}",
            s0.agent_count(),
            res.outcome
        ));
    }
    Ok((ok, notes.join("; ")))
}

fn c10() -> Outcome {
    let k5 = fam("clique:5");
    let Some(w) = has_k_sts(&k5, 2).map_err(e)? else {
        return Ok((false, "no witness for K_5".into()));
    };
    validate_witness(&k5, &w).map_err(e)?;
    // every 2-set has a tree, and every tree is spanning
    let witness_shape = w.entries.len() == 10
        && w.entries.iter().all(|en| {
            let es: Vec<_> = en.tree.clone();
            es.len() == 4 && connected(5, &es)
        });
    let adv = sts_adversary(w);
    let adv_places = refute_adversary_strategy(&k5, 2, &adv)
        .map_err(e)?
        .is_none();
    let agents_place = refute_adversary_strategy_with(
        &k5,
        2,
        &adv,
        PlacementRule::AgentsPlace,
        DEFAULT_MAX_STATES,
    )
    .map_err(e)?
    .is_none();
    let mut paths_none = true;
    for n in 2..=6 {
        paths_none &= has_k_sts(&fam(&format!("path:{n}")), 2)
            .map_err(e)?
            .is_none();
    }
    let mut found = 0;
    let mut bad = Vec::new();
    let mut graphs = 0;
    for n in 2..=6 {
        for g in connected_graphs(n) {
            graphs += 1;
            if has_k_sts(&g, 2).map_err(e)?.is_some() {
                found += 1;
                if winner(&g, 2)? != Adversary {
                    bad.push(format!("{:?}", g.edges()));
                }
            }
        }
    }
    Ok((
        witness_shape && adv_places && agents_place && paths_none && bad.is_empty(),
        format!(
            "K_5 witness shape {witness_shape}, unrefuted (adversary places {adv_places}, agents place {agents_place}); \
             paths have none {paths_none}; sweep {graphs} graphs, {found} witnesses, violations {bad:?}"
        ),
    ))
}

fn c11a() -> Outcome {
    let mut bad = Vec::new();
    let mut total = 0;
    for n in 2..=8 {
        let p = fam(&format!("path:{n}"));
        for x in 1..=3usize {
            for y in 1..=2usize {
                if x + y > n {
                    continue;
                }
                total += 1;
                let first: usize = (n - x - y).div_ceil(2);
                let all: usize = (n - y).div_ceil(2);
                let got = classify_config(&p, x, y).map_err(e)?;
                if !within(got.first_spread_time, first) || !within(got.win_time, all) {
                    bad.push(format!(
                        "P_{n} x={x} y={y}: ({:?},{:?}) vs ({first},{all})",
                        got.first_spread_time, got.win_time
                    ));
                }
            }
        }
    }
    Ok(summary(total, &bad))
}

fn c11b() -> Outcome {
    let mut bad = Vec::new();
    let mut total = 0;
    for n in 2..=8 {
        for t in trees(n) {
            total += 1;
            let want = diameter(&t).div_ceil(2);
            let got = classify(&t, 2, PlacementRule::AdversaryPlaces)
                .map_err(e)?
                .optimal_time;
            if !within(got, want) {
                bad.push(format!("{:?}: {got:?} vs {want}", t.edges()));
            }
        }
    }
    Ok(summary(total, &bad))
}

fn c11c() -> Outcome {
    let mut bad = Vec::new();
    let mut total = 0;
    for n in 2..=7 {
        for g in connected_graphs(n) {
            let d = dist_matrix(&g);
            for y in 1..n {
                let ysd = y_set_diameter(&g, y);
                let bound = ysd.div_ceil(2);
                for x in 1..=n - y {
                    total += 1;
                    let p = placement_for_bound(&g, x, y).map_err(e)?;
                    if p.knowledgeable().len() != y
                        || p.ignorant().len() != x
                        || separation(&d, &p) != ysd
                    {
                        bad.push(format!(
                            "{:?} x={x} y={y}: placement {p} misses {ysd}",
                            g.edges()
                        ));
                        continue;
                    }
                    let fast = forces_within(
                        &g,
                        &p,
                        Target::AllKnowledgeable,
                        bound - 1,
                        &SolverConfig::default(),
                    )
                    .map_err(e)?;
                    if fast {
                        bad.push(format!("{:?} x={x} y={y}: win in < {bound}", g.edges()));
                    }
                }
            }
        }
    }
    Ok(summary(total, &bad))
}

fn c11d() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0xd);
    let pool: Vec<Graph> = (4..=6).flat_map(connected_graphs).collect();
    let mut tables: HashMap<(usize, usize), Arc<AttractorTable>> = HashMap::new();
    let (mut traces, mut rounds) = (0, 0);
    let mut bad = Vec::new();
    while traces < SEPARATION_TRACES {
        let gi = rng.gen_range(0..pool.len());
        let k = rng.gen_range(2..=3);
        let g = &pool[gi];
        let table = match tables.entry((gi, k)) {
            Entry::Occupied(t) => t.get().clone(),
            Entry::Vacant(slot) => {
                let t = solve(g, k, 1, Target::AllKnowledgeable, &SolverConfig::default())
                    .map_err(e)?;
                slot.insert(Arc::new(t)).clone()
            }
        };
        let s0 = initial_placements(g, k)
            .map_err(e)?
            .choose(&mut rng)
            .unwrap()
            .clone();
        let Some(rank) = table.rank(&s0) else {
            continue;
        };
        let d = dist_matrix(g);
        let res = play(
            g,
            &s0,
            &mut OptimalAdversary::new(table.clone()),
            &mut OptimalAgents::new(table),
            rank + 1,
        )
        .map_err(e)?;
        traces += 1;
        let mut prev = (!s0.is_won()).then(|| separation(&d, &s0));
        for rec in &res.trace {
            rounds += 1;
            let now = (!rec.positions_after.is_won()).then(|| separation(&d, &rec.positions_after));
            if let (Some(a), Some(b)) = (prev, now) {
                if a > b + MAX_SEPARATION_DROP {
                    bad.push(format!("{:?}: {a} -> {b}", g.edges()));
                }
            }
            prev = now;
        }
    }
    let (ok, detail) = summary(traces, &bad);
    Ok((ok, format!("{detail}, {rounds} rounds")))
}

fn c12() -> Outcome {
    let mut bad = Vec::new();
    let mut total = 0;
    for n in 2..=5 {
        for g in connected_graphs(n)
            .into_iter()
            .filter(|g| g.edge_count() <= 8)
        {
            total += 1;
            if !tree_reduction_equivalence_check(&g, 2).map_err(e)? {
                bad.push(format!("{:?}", g.edges()));
            }
        }
    }
    Ok(summary(total, &bad))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 15] = [
        ("1", "trees are Agents wins for k in 2..=4", c1),
        (
            "2",
            "cycles: two agents lose, three win; C_4 consistent",
            c2,
        ),
        ("3", "cliques: Adversary below n-1 agents", c3),
        ("4", "generalized theta graphs", c4),
        ("5", "Adversary wins pass to spanning supergraphs", c5),
        ("6", "random Hamiltonian graphs, k=2", c6),
        ("7", "cut-vertex sums keep Adversary wins", c7),
        ("8", "bridge contraction and path attachment", c8),
        ("9", "grid alternation freezes greedy agents", c9),
        ("10", "spanning-tree symmetry", c10),
        ("11a", "path times match closed forms", c11a),
        ("11b", "two agents on trees take ceil(d/2)", c11b),
        ("11c", "set-diameter lower bound", c11c),
        ("11d", "separation drops at most 2 per round", c11d),
        ("12", "tree and subgraph adversaries agree", c12),
    ];
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let mut failed = 0;
    let mut ran = 0;
    for (id, title, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| f == id) {
            continue;
        }
        ran += 1;
        let start = Instant::now();
        let (ok, detail) = run().unwrap_or_else(|err| (false, format!("error: {err}")));
        failed += usize::from(!ok);
        println!(
            "[{}] {id} {title}: {detail} ({:.1?})",
            if ok { "PASS" } else { "FAIL" },
            start.elapsed()
        );
    }
    println!("acceptance: {} passed, {failed} failed", ran - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
