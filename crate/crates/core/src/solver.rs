//! Exact solution of the game by a backward fixed point over canonical
//! states, plus harnesses that search one-player games against a fixed
//! strategy.
//!
//! A state has rank 0 when the target is reached, and rank `r + 1` when it
//! has no smaller rank and for every adversary choice some agents' move
//! reaches a state of rank at most `r`. States that never get a rank are
//! adversary wins.
//!
//! The adversary is quantified over spanning trees: every connected spanning
//! subgraph contains one, and removing edges only removes agent options. In
//! the default model each tree is further cut down to its edges touching
//! occupied vertices (the only edges the agents can use), keeping just the
//! inclusion-minimal such projections per set of occupied vertices.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use itertools::Itertools;
use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{
    apply_moves, config_placements, initial_placements, move_options, move_vectors, resolve,
    GameState, MoveVector, SpanningChoice,
};
use crate::graph::{
    connected_spanning_subgraphs, spanning_trees_capped, Edge, EdgeSet, Graph, Vertex,
};
use crate::strategies::{AdversaryStrategy, AgentsStrategy};

pub const DEFAULT_MAX_STATES: usize = 2_000_000;
pub const DEFAULT_MAX_TREES: usize = 50_000;
/// Packed state keys hold at most this many agents.
pub const MAX_AGENTS: usize = 15;
/// Packed state keys and occupancy masks limit the vertex count.
pub const MAX_SOLVER_VERTICES: usize = 64;
/// Edge cap for the explicit-subgraph adversary model.
pub const SUBGRAPH_MODEL_MAX_EDGES: usize = 12;

// projections above this count are only deduplicated, not minimized
const MINIMIZE_LIMIT: usize = 20_000;
const UNRANKED: u32 = u32::MAX;

/// What the agents are trying to reach.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Target {
    /// No ignorant agents left.
    AllKnowledgeable,
    /// More than `baseline` knowledgeable agents, or nobody left to teach.
    KnowledgeSpreads { baseline: usize },
}

impl Target {
    fn reached_counts(self, knowledgeable: usize, ignorant: usize) -> bool {
        match self {
            Target::AllKnowledgeable => ignorant == 0,
            Target::KnowledgeSpreads { baseline } => knowledgeable > baseline || ignorant == 0,
        }
    }

    pub fn reached(self, s: &GameState) -> bool {
        self.reached_counts(s.knowledgeable().len(), s.ignorant().len())
    }
}

/// Which adversary choices the fixed point quantifies over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AdversaryModel {
    /// Minimal projections of spanning trees onto occupied neighbourhoods.
    Reduced,
    /// Every spanning tree.
    Trees,
    /// Every connected spanning subgraph.
    Subgraphs,
}

#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub max_states: usize,
    pub max_trees: usize,
    pub model: AdversaryModel,
    /// Stop after this many fixed-point rounds. States that would rank
    /// higher are then reported as unranked.
    pub max_rank: Option<usize>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_states: DEFAULT_MAX_STATES,
            max_trees: DEFAULT_MAX_TREES,
            model: AdversaryModel::Reduced,
            max_rank: None,
        }
    }
}

fn pack(k: &[u8], i: &[u8]) -> u128 {
    let mut key = (k.len() as u128) << 120;
    for (slot, &v) in k.iter().chain(i).enumerate() {
        key |= (v as u128) << (8 * slot);
    }
    key
}

fn pack_state(s: &GameState) -> u128 {
    let k: Vec<u8> = s.knowledgeable().iter().map(|&v| v as u8).collect();
    let i: Vec<u8> = s.ignorant().iter().map(|&v| v as u8).collect();
    pack(&k, &i)
}

fn unpack(key: u128, agents: usize) -> GameState {
    let k = (key >> 120) as usize;
    let slot = |j: usize| ((key >> (8 * j)) & 0xff) as Vertex;
    GameState::new((0..k).map(slot).collect(), (k..agents).map(slot).collect())
}

/// Adversary choices available at one occupancy: representative full
/// choices and the agent options each one leaves.
struct ChoiceSet {
    reps: Vec<EdgeSet>,
    options: Vec<Vec<Vec<Vertex>>>,
}

fn binomial(n: usize, r: usize) -> usize {
    (0..r).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

fn multisets(n: usize, r: usize) -> usize {
    if n == 0 {
        return usize::from(r == 0);
    }
    binomial(n + r - 1, r)
}

/// Ranks for every non-target state with `agents` agents and at least
/// `min_knowledgeable` knowledgeable ones.
pub struct AttractorTable {
    graph: Graph,
    agents: usize,
    min_knowledgeable: usize,
    target: Target,
    model: AdversaryModel,
    keys: Vec<u128>,
    index: FxHashMap<u128, u32>,
    rank: Vec<u32>,
    iterations: usize,
    choice_sets: Vec<ChoiceSet>,
    occupancy_set: FxHashMap<u64, usize>,
    incident: Vec<EdgeSet>,
    base_choices: Vec<EdgeSet>,
}

impl std::fmt::Debug for AttractorTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AttractorTable")
            .field("agents", &self.agents)
            .field("target", &self.target)
            .field("states", &self.keys.len())
            .field("iterations", &self.iterations)
            .finish()
    }
}

/// The standard game table: one knowledgeable agent, target everyone knows.
pub fn agents_attractor(g: &Graph, k: usize) -> Result<AttractorTable> {
    solve(g, k, 1, Target::AllKnowledgeable, &SolverConfig::default())
}

/// Builds the table for `agents` agents, at least `min_knowledgeable` of
/// them knowledgeable.
pub fn solve(
    g: &Graph,
    agents: usize,
    min_knowledgeable: usize,
    target: Target,
    config: &SolverConfig,
) -> Result<AttractorTable> {
    let n = g.vertex_count();
    g.require_connected()?;
    g.check_maskable()?;
    if n > MAX_SOLVER_VERTICES {
        return Err(Error::TooLarge {
            what: "vertex count for the solver",
            limit: MAX_SOLVER_VERTICES,
        });
    }
    if agents == 0 || agents > MAX_AGENTS || min_knowledgeable == 0 || min_knowledgeable > agents {
        return Err(Error::AgentCount {
            agents,
            vertex_count: n,
        });
    }
    let base_choices = match config.model {
        AdversaryModel::Subgraphs => {
            if g.edge_count() > SUBGRAPH_MODEL_MAX_EDGES {
                return Err(Error::TooLarge {
                    what: "edge count for the subgraph model",
                    limit: SUBGRAPH_MODEL_MAX_EDGES,
                });
            }
            connected_spanning_subgraphs(g)?
        }
        _ => spanning_trees_capped(g, config.max_trees)?,
    };

    // universe: non-target states
    let hi = match target {
        Target::AllKnowledgeable => agents - 1,
        Target::KnowledgeSpreads { baseline } => baseline.min(agents - 1),
    };
    let lo = min_knowledgeable;
    let count: usize = (lo..=hi)
        .map(|y| multisets(n, y).saturating_mul(multisets(n, agents - y)))
        .fold(0usize, usize::saturating_add);
    if count > config.max_states {
        return Err(Error::BudgetExceeded {
            what: "game states",
            limit: config.max_states,
        });
    }
    let mut keys = Vec::with_capacity(count);
    for y in lo..=hi {
        for k in (0..n as u8).combinations_with_replacement(y) {
            for i in (0..n as u8).combinations_with_replacement(agents - y) {
                if !target.reached_counts(y, agents - y) {
                    keys.push(pack(&k, &i));
                }
            }
        }
    }
    let index: FxHashMap<u128, u32> = keys
        .iter()
        .enumerate()
        .map(|(i, &k)| (k, i as u32))
        .collect();

    let incident: Vec<EdgeSet> = (0..n)
        .map(|v| {
            let mut m = EdgeSet::EMPTY;
            for &w in g.neighbors(v) {
                m.insert(g.edge_index(v, w).expect("neighbour edge"));
            }
            m
        })
        .collect();

    let mut table = AttractorTable {
        graph: g.clone(),
        agents,
        min_knowledgeable,
        target,
        model: config.model,
        keys,
        index,
        rank: Vec::new(),
        iterations: 0,
        choice_sets: Vec::new(),
        occupancy_set: FxHashMap::default(),
        incident,
        base_choices,
    };

    // choice sets per occupancy
    let state_occ: Vec<u64> = table.keys.iter().map(|&k| table.occupancy(k)).collect();
    let mut distinct: Vec<u64> = state_occ.clone();
    distinct.sort_unstable();
    distinct.dedup();
    if table.model != AdversaryModel::Reduced {
        distinct = vec![0];
    }
    let sets: Vec<ChoiceSet> = distinct
        .par_iter()
        .map(|&occ| table.build_choice_set(occ))
        .collect();
    table.occupancy_set = distinct.iter().enumerate().map(|(i, &o)| (o, i)).collect();
    table.choice_sets = sets;
    let set_of: Vec<u32> = state_occ
        .iter()
        .map(|&o| table.set_index(o) as u32)
        .collect();

    // fixed point
    let total = table.keys.len();
    let mut rank = vec![UNRANKED; total];
    let mut hint = vec![0u32; total];
    let mut pending: Vec<u32> = (0..total as u32).collect();
    let mut iteration = 0u32;
    let mut ranked_rounds = 0;
    while config.max_rank.is_none_or(|m| (iteration as usize) < m) {
        iteration += 1;
        let t = &table;
        let r = &rank;
        let results: Vec<(u32, Option<u32>)> = pending
            .par_iter()
            .map(|&s| {
                let set = &t.choice_sets[set_of[s as usize] as usize];
                (
                    s,
                    t.failing_choice(t.keys[s as usize], set, hint[s as usize], iteration, r),
                )
            })
            .collect();
        let mut progressed = false;
        for &(s, fail) in &results {
            match fail {
                None => {
                    rank[s as usize] = iteration;
                    progressed = true;
                }
                Some(c) => hint[s as usize] = c,
            }
        }
        if !progressed {
            break;
        }
        ranked_rounds = iteration as usize;
        pending.retain(|&s| rank[s as usize] == UNRANKED);
    }
    table.rank = rank;
    table.iterations = ranked_rounds;
    Ok(table)
}

/// Adversary choices for one occupancy (a bitmask of occupied vertices).
fn choice_set(
    g: &Graph,
    model: AdversaryModel,
    base_choices: &[EdgeSet],
    incident: &[EdgeSet],
    occ: u64,
) -> ChoiceSet {
    if model != AdversaryModel::Reduced {
        return ChoiceSet {
            reps: base_choices.to_vec(),
            options: base_choices.iter().map(|&m| move_options(g, m)).collect(),
        };
    }
    let touched = (0..g.vertex_count())
        .filter(|&v| occ >> v & 1 == 1)
        .fold(EdgeSet::EMPTY, |m, v| EdgeSet(m.0 | incident[v].0));
    // first tree for each distinct projection
    let mut seen: FxHashMap<u64, EdgeSet> = FxHashMap::default();
    let mut projections: Vec<EdgeSet> = Vec::new();
    for &t in base_choices {
        let p = EdgeSet(t.0 & touched.0);
        if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(p.0) {
            e.insert(t);
            projections.push(p);
        }
    }
    let kept: Vec<EdgeSet> = if projections.len() <= MINIMIZE_LIMIT {
        let mut by_size = projections.clone();
        by_size.sort_by_key(|p| (p.len(), p.0));
        let mut minimal: Vec<EdgeSet> = Vec::new();
        for p in by_size {
            if !minimal.iter().any(|&q| q != p && q.is_subset(p)) {
                minimal.push(p);
            }
        }
        // keep enumeration order among the survivors
        projections.retain(|p| minimal.contains(p));
        projections
    } else {
        projections
    };
    ChoiceSet {
        reps: kept.iter().map(|p| seen[&p.0]).collect(),
        options: kept.iter().map(|&p| move_options(g, p)).collect(),
    }
}

/// Whether `good(knowledgeable, ignorant, packed)` holds for some successor
/// of the packed state `key` under the given move options.
fn any_successor(
    key: u128,
    agents: usize,
    options: &[Vec<Vertex>],
    mut good: impl FnMut(usize, usize, u128) -> bool,
) -> bool {
    let k_len = (key >> 120) as usize;
    let pos: Vec<usize> = (0..agents)
        .map(|j| ((key >> (8 * j)) & 0xff) as usize)
        .collect();
    let opts: Vec<&[Vertex]> = pos.iter().map(|&v| options[v].as_slice()).collect();
    // agents sharing a vertex and a status are interchangeable: their
    // digits are kept non-decreasing so each multiset of moves is seen once
    let same: Vec<bool> = (0..agents)
        .map(|j| j > 0 && pos[j] == pos[j - 1] && (j < k_len) == (j - 1 < k_len))
        .collect();
    let mut digit = vec![0usize; agents];
    let mut kd = [0u8; MAX_AGENTS];
    let mut id = [0u8; MAX_AGENTS];
    loop {
        let kn = k_len;
        for j in 0..kn {
            kd[j] = opts[j][digit[j]] as u8;
        }
        let mut kc = kn;
        let mut ic = 0;
        for j in kn..agents {
            let d = opts[j][digit[j]] as u8;
            if kd[..kn].contains(&d) {
                kd[kc] = d;
                kc += 1;
            } else {
                id[ic] = d;
                ic += 1;
            }
        }
        kd[..kc].sort_unstable();
        id[..ic].sort_unstable();
        if good(kc, ic, pack(&kd[..kc], &id[..ic])) {
            return true;
        }
        // odometer, last slot fastest
        let mut j = agents;
        loop {
            if j == 0 {
                return false;
            }
            j -= 1;
            digit[j] += 1;
            if digit[j] < opts[j].len() {
                break;
            }
        }
        for t in j + 1..agents {
            digit[t] = if same[t] { digit[t - 1] } else { 0 };
        }
    }
}

impl AttractorTable {
    fn occupancy(&self, key: u128) -> u64 {
        (0..self.agents).fold(0u64, |m, j| m | 1u64 << ((key >> (8 * j)) & 0xff))
    }

    fn set_index(&self, occ: u64) -> usize {
        let key = if self.model == AdversaryModel::Reduced {
            occ
        } else {
            0
        };
        self.occupancy_set[&key]
    }

    fn build_choice_set(&self, occ: u64) -> ChoiceSet {
        choice_set(
            &self.graph,
            self.model,
            &self.base_choices,
            &self.incident,
            occ,
        )
    }

    /// Index of a choice under which no agents' move reaches a state ranked
    /// before `iteration`, or `None` if every choice admits one.
    fn failing_choice(
        &self,
        key: u128,
        set: &ChoiceSet,
        hint: u32,
        iteration: u32,
        rank: &[u32],
    ) -> Option<u32> {
        let count = set.options.len() as u32;
        (0..count)
            .map(|j| (hint + j) % count)
            .find(|&c| !self.has_good_move(key, &set.options[c as usize], iteration, rank))
    }

    fn has_good_move(
        &self,
        key: u128,
        options: &[Vec<Vertex>],
        iteration: u32,
        rank: &[u32],
    ) -> bool {
        any_successor(key, self.agents, options, |kc, ic, next| {
            self.target.reached_counts(kc, ic)
                || self
                    .index
                    .get(&next)
                    .is_some_and(|&s| rank[s as usize] < iteration)
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn agents(&self) -> usize {
        self.agents
    }

    pub fn target(&self) -> Target {
        self.target
    }

    pub fn state_count(&self) -> usize {
        self.keys.len()
    }

    /// Number of fixed-point rounds that ranked new states.
    pub fn iterations(&self) -> usize {
        self.iterations
    }

    fn covers(&self, s: &GameState) -> bool {
        s.agent_count() == self.agents
            && s.knowledgeable().len() >= self.min_knowledgeable
            && s.slots().iter().all(|&v| v < self.graph.vertex_count())
    }

    /// Optimal rounds to the target, or `None` if the adversary can prevent
    /// it forever (or the state lies outside the table).
    pub fn rank(&self, s: &GameState) -> Option<usize> {
        if !self.covers(s) {
            return None;
        }
        if self.target.reached(s) {
            return Some(0);
        }
        let i = *self.index.get(&pack_state(s))?;
        let r = self.rank[i as usize];
        (r != UNRANKED).then_some(r as usize)
    }

    pub fn contains(&self, s: &GameState) -> bool {
        self.rank(s).is_some()
    }

    pub fn max_rank(&self) -> usize {
        self.rank
            .iter()
            .filter(|&&r| r != UNRANKED)
            .max()
            .copied()
            .unwrap_or(0) as usize
    }

    /// Every non-target state with its rank.
    pub fn states(&self) -> impl Iterator<Item = (GameState, Option<usize>)> + '_ {
        self.keys.iter().zip(&self.rank).map(|(&k, &r)| {
            (
                unpack(k, self.agents),
                (r != UNRANKED).then_some(r as usize),
            )
        })
    }

    /// Ranks in universe order, for comparing tables over the same universe.
    pub fn rank_vector(&self) -> Vec<Option<usize>> {
        self.rank
            .iter()
            .map(|&r| (r != UNRANKED).then_some(r as usize))
            .collect()
    }

    fn value_after(
        &self,
        s: &GameState,
        options: &[Vec<Vertex>],
    ) -> (Option<usize>, Option<MoveVector>) {
        let k = s.knowledgeable().len();
        let mut best: (Option<usize>, Option<MoveVector>) = (None, None);
        for mv in move_vectors(s, options) {
            let next = resolve(&mv.0[..k], &mv.0[k..]);
            if let Some(r) = self.rank(&next) {
                if best.0.is_none_or(|b| r < b) {
                    best = (Some(r), Some(mv));
                    if r == 0 {
                        break;
                    }
                }
            }
        }
        best
    }

    /// A move into the lowest-ranked successor, or `None` if no move leads
    /// into the attractor.
    pub fn best_move(&self, s: &GameState, choice: &SpanningChoice) -> Option<MoveVector> {
        self.value_after(s, &move_options(&self.graph, choice.mask()))
            .1
    }

    /// A choice that delays the agents longest: one with no move into the
    /// attractor if possible, otherwise one maximizing the best successor
    /// rank.
    pub fn worst_choice(&self, s: &GameState) -> SpanningChoice {
        let occ = s.slots().iter().fold(0u64, |m, &v| m | 1u64 << v);
        let owned;
        let set = match self
            .occupancy_set
            .get(&if self.model == AdversaryModel::Reduced {
                occ
            } else {
                0
            }) {
            Some(&i) => &self.choice_sets[i],
            None => {
                owned = self.build_choice_set(occ);
                &owned
            }
        };
        let mut best: Option<(Option<usize>, usize)> = None;
        for (c, opts) in set.options.iter().enumerate() {
            let v = self.value_after(s, opts).0;
            // None (escape) beats every finite value
            let better = match best {
                None => true,
                Some((b, _)) => match (v, b) {
                    (None, Some(_)) => true,
                    (Some(x), Some(y)) => x > y,
                    _ => false,
                },
            };
            if better {
                best = Some((v, c));
            }
        }
        SpanningChoice::trusted(set.reps[best.map_or(0, |b| b.1)])
    }
}

/// Whether the agents can force `target` from `s` within `rounds` rounds.
///
/// Searches forward from `s` alone instead of building a table, which is
/// much cheaper when only a few rounds matter.
pub fn forces_within(
    g: &Graph,
    s: &GameState,
    target: Target,
    rounds: usize,
    config: &SolverConfig,
) -> Result<bool> {
    g.require_connected()?;
    g.check_maskable()?;
    s.check_vertices(g)?;
    if g.vertex_count() > MAX_SOLVER_VERTICES || s.agent_count() > MAX_AGENTS {
        return Err(Error::TooLarge {
            what: "instance for the solver",
            limit: MAX_AGENTS,
        });
    }
    let base = match config.model {
        AdversaryModel::Subgraphs => connected_spanning_subgraphs(g)?,
        _ => spanning_trees_capped(g, config.max_trees)?,
    };
    let incident: Vec<EdgeSet> = (0..g.vertex_count())
        .map(|v| {
            g.neighbors(v).iter().fold(EdgeSet::EMPTY, |mut m, &w| {
                m.insert(g.edge_index(v, w).expect("neighbour edge"));
                m
            })
        })
        .collect();
    let mut search = Forward {
        g,
        target,
        agents: s.agent_count(),
        model: config.model,
        base,
        incident,
        sets: FxHashMap::default(),
        memo: FxHashMap::default(),
        budget: config.max_states,
    };
    let verdict = search.wins(
        pack_state(s),
        s.knowledgeable().len(),
        s.ignorant().len(),
        rounds,
    );
    if search.budget == 0 {
        return Err(Error::BudgetExceeded {
            what: "search nodes",
            limit: config.max_states,
        });
    }
    Ok(verdict)
}

struct Forward<'a> {
    g: &'a Graph,
    target: Target,
    agents: usize,
    model: AdversaryModel,
    base: Vec<EdgeSet>,
    incident: Vec<EdgeSet>,
    sets: FxHashMap<u64, Arc<ChoiceSet>>,
    memo: FxHashMap<(u128, usize), bool>,
    budget: usize,
}

impl Forward<'_> {
    fn wins(&mut self, key: u128, kc: usize, ic: usize, rounds: usize) -> bool {
        if self.target.reached_counts(kc, ic) {
            return true;
        }
        if rounds == 0 || self.budget == 0 {
            return false;
        }
        if let Some(&v) = self.memo.get(&(key, rounds)) {
            return v;
        }
        self.budget -= 1;
        let occ = if self.model == AdversaryModel::Reduced {
            (0..self.agents).fold(0u64, |m, j| m | 1u64 << ((key >> (8 * j)) & 0xff))
        } else {
            0
        };
        let set = match self.sets.get(&occ) {
            Some(set) => set.clone(),
            None => {
                let set = Arc::new(choice_set(
                    self.g,
                    self.model,
                    &self.base,
                    &self.incident,
                    occ,
                ));
                self.sets.insert(occ, set.clone());
                set
            }
        };
        let agents = self.agents;
        let verdict = set.options.iter().all(|opts| {
            any_successor(key, agents, opts, |kc, ic, next| {
                self.wins(next, kc, ic, rounds - 1)
            })
        });
        self.memo.insert((key, rounds), verdict);
        verdict
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Winner {
    Agents,
    Adversary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PlacementRule {
    AdversaryPlaces,
    AgentsPlace,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub winner: Winner,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub optimal_time: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_placement: Option<GameState>,
    pub placement_rule: PlacementRule,
    pub state_count: usize,
    pub iterations: usize,
}

pub fn classify(g: &Graph, k: usize, rule: PlacementRule) -> Result<Classification> {
    classify_with(g, k, rule, &SolverConfig::default())
}

pub fn classify_with(
    g: &Graph,
    k: usize,
    rule: PlacementRule,
    config: &SolverConfig,
) -> Result<Classification> {
    let placements = initial_placements(g, k)?;
    let table = solve(g, k, 1, Target::AllKnowledgeable, config)?;
    Ok(classify_from_table(&table, &placements, rule))
}

/// Classification over the given placements using a prebuilt table.
pub fn classify_from_table(
    table: &AttractorTable,
    placements: &[GameState],
    rule: PlacementRule,
) -> Classification {
    let ranks: Vec<Option<usize>> = placements.iter().map(|p| table.rank(p)).collect();
    let (winner, optimal_time, witness_placement) = match rule {
        PlacementRule::AdversaryPlaces => match ranks.iter().position(Option::is_none) {
            Some(i) => (Winner::Adversary, None, Some(placements[i].clone())),
            None => (Winner::Agents, ranks.iter().flatten().max().copied(), None),
        },
        PlacementRule::AgentsPlace => match ranks.iter().flatten().min() {
            Some(&t) => (Winner::Agents, Some(t), None),
            None => (Winner::Adversary, None, placements.first().cloned()),
        },
    };
    Classification {
        winner,
        optimal_time,
        witness_placement,
        placement_rule: rule,
        state_count: table.state_count(),
        iterations: table.iterations(),
    }
}

/// Worst-case optimal times when the adversary places `y` knowledgeable and
/// `x` ignorant agents on distinct vertices. `None` means the adversary can
/// prevent that event forever.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigTimes {
    pub first_spread_time: Option<usize>,
    pub win_time: Option<usize>,
}

pub fn classify_config(g: &Graph, x: usize, y: usize) -> Result<ConfigTimes> {
    classify_config_with(g, x, y, &SolverConfig::default())
}

pub fn classify_config_with(
    g: &Graph,
    x: usize,
    y: usize,
    config: &SolverConfig,
) -> Result<ConfigTimes> {
    let placements = config_placements(g, x, y)?;
    let worst = |target: Target| -> Result<Option<usize>> {
        let table = solve(g, x + y, y, target, config)?;
        Ok(placements
            .iter()
            .map(|p| table.rank(p))
            .collect::<Option<Vec<_>>>()
            .map(|r| r.into_iter().max().unwrap_or(0)))
    };
    Ok(ConfigTimes {
        first_spread_time: worst(Target::KnowledgeSpreads { baseline: y })?,
        win_time: worst(Target::AllKnowledgeable)?,
    })
}

/// Agents playing the solver's optimal policy.
#[derive(Clone, Debug)]
pub struct OptimalAgents {
    table: Arc<AttractorTable>,
}

impl OptimalAgents {
    pub fn new(table: Arc<AttractorTable>) -> Self {
        OptimalAgents { table }
    }
}

impl AgentsStrategy for OptimalAgents {
    fn name(&self) -> String {
        "optimal".into()
    }

    fn moves(&mut self, _g: &Graph, s: &GameState, choice: &SpanningChoice) -> Result<MoveVector> {
        Ok(self
            .table
            .best_move(s, choice)
            .unwrap_or_else(|| MoveVector::stay(s)))
    }

    fn box_clone(&self) -> Box<dyn AgentsStrategy> {
        Box::new(self.clone())
    }
}

/// Adversary playing the solver's optimal policy.
#[derive(Clone, Debug)]
pub struct OptimalAdversary {
    table: Arc<AttractorTable>,
}

impl OptimalAdversary {
    pub fn new(table: Arc<AttractorTable>) -> Self {
        OptimalAdversary { table }
    }
}

impl AdversaryStrategy for OptimalAdversary {
    fn name(&self) -> String {
        "optimal".into()
    }

    fn choose(&mut self, g: &Graph, s: &GameState) -> Result<SpanningChoice> {
        if g.vertex_count() != self.table.graph.vertex_count()
            || g.edges() != self.table.graph.edges()
        {
            return Err(Error::Precondition("table built for another graph".into()));
        }
        Ok(self.table.worst_choice(s))
    }

    /// A placement outside the attractor if one exists, else one of
    /// maximum rank.
    fn designated_placement(&self, g: &Graph, k: usize) -> Option<GameState> {
        if k != self.table.agents {
            return None;
        }
        let placements = initial_placements(g, k).ok()?;
        placements
            .iter()
            .find(|p| self.table.rank(p).is_none())
            .or_else(|| {
                placements
                    .iter()
                    .max_by_key(|p| std::cmp::Reverse(std::cmp::Reverse(self.table.rank(p))))
            })
            .cloned()
    }

    fn box_clone(&self) -> Box<dyn AdversaryStrategy> {
        Box::new(self.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterRound {
    pub choice: Vec<Edge>,
    pub moves: MoveVector,
    pub after: GameState,
}

/// A placement and a line of play that beats a fixed adversary strategy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub placement: GameState,
    pub rounds: Vec<CounterRound>,
}

pub fn refute_adversary_strategy(
    g: &Graph,
    k: usize,
    adv: &dyn AdversaryStrategy,
) -> Result<Option<Counterexample>> {
    refute_adversary_strategy_with(
        g,
        k,
        adv,
        PlacementRule::AdversaryPlaces,
        DEFAULT_MAX_STATES,
    )
}

/// Searches for an agents' win against a fixed adversary strategy.
///
/// Under [`PlacementRule::AdversaryPlaces`] the strategy's designated
/// placement is used; a strategy without one is refuted only if the agents
/// win from every placement. Under [`PlacementRule::AgentsPlace`] any
/// winning placement refutes it.
pub fn refute_adversary_strategy_with(
    g: &Graph,
    k: usize,
    adv: &dyn AdversaryStrategy,
    rule: PlacementRule,
    max_nodes: usize,
) -> Result<Option<Counterexample>> {
    let all = initial_placements(g, k)?;
    match (rule, adv.designated_placement(g, k)) {
        (PlacementRule::AdversaryPlaces, Some(p)) => {
            p.check_vertices(g)?;
            search_against(g, &p, adv, max_nodes)
        }
        (PlacementRule::AdversaryPlaces, None) => {
            let mut first = None;
            for p in &all {
                match search_against(g, p, adv, max_nodes)? {
                    None => return Ok(None),
                    Some(c) => {
                        first.get_or_insert(c);
                    }
                }
            }
            Ok(first)
        }
        (PlacementRule::AgentsPlace, _) => {
            for p in &all {
                if let Some(c) = search_against(g, p, adv, max_nodes)? {
                    return Ok(Some(c));
                }
            }
            Ok(None)
        }
    }
}

fn search_against(
    g: &Graph,
    start: &GameState,
    adv: &dyn AdversaryStrategy,
    max_nodes: usize,
) -> Result<Option<Counterexample>> {
    if start.is_won() {
        return Ok(Some(Counterexample {
            placement: start.clone(),
            rounds: Vec::new(),
        }));
    }
    struct Node {
        state: GameState,
        adv: Box<dyn AdversaryStrategy>,
        parent: Option<(usize, CounterRound)>,
    }
    let mut nodes: Vec<Node> = vec![Node {
        state: start.clone(),
        adv: adv.box_clone(),
        parent: None,
    }];
    let mut seen: HashMap<(GameState, Vec<u64>), usize> = HashMap::new();
    seen.insert((start.clone(), adv.phase()), 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(id) = queue.pop_front() {
        let mut a = nodes[id].adv.box_clone();
        let state = nodes[id].state.clone();
        let choice = a.choose(g, &state)?;
        let choice = SpanningChoice::new(g, choice.mask())?;
        let opts = move_options(g, choice.mask());
        let phase = a.phase();
        for mv in move_vectors(&state, &opts) {
            let next = apply_moves(g, &state, &choice, &mv)?;
            let round = CounterRound {
                choice: choice.edges(g),
                moves: mv,
                after: next.clone(),
            };
            if next.is_won() {
                let mut rounds = vec![round];
                let mut cur = id;
                while let Some((p, r)) = &nodes[cur].parent {
                    rounds.push(r.clone());
                    cur = *p;
                }
                rounds.reverse();
                return Ok(Some(Counterexample {
                    placement: start.clone(),
                    rounds,
                }));
            }
            let key = (next.clone(), phase.clone());
            if seen.contains_key(&key) {
                continue;
            }
            if nodes.len() >= max_nodes {
                return Err(Error::BudgetExceeded {
                    what: "search nodes",
                    limit: max_nodes,
                });
            }
            seen.insert(key, nodes.len());
            queue.push_back(nodes.len());
            nodes.push(Node {
                state: next,
                adv: a.box_clone(),
                parent: Some((id, round)),
            });
        }
    }
    Ok(None)
}

/// Outcome of a fixed agents strategy against every adversary.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AgentsEvaluation {
    /// The strategy always wins, at worst after this many rounds.
    WinsWithin(usize),
    /// Tree choices that loop forever: `states[i]` is the position before
    /// `trees[i]` is played; the final state repeats an earlier one.
    Counterline {
        trees: Vec<Vec<Edge>>,
        states: Vec<GameState>,
    },
}

pub fn evaluate_agents_strategy(
    g: &Graph,
    s0: &GameState,
    ag: &dyn AgentsStrategy,
) -> Result<AgentsEvaluation> {
    evaluate_agents_strategy_with(g, s0, ag, DEFAULT_MAX_STATES, DEFAULT_MAX_TREES)
}

pub fn evaluate_agents_strategy_with(
    g: &Graph,
    s0: &GameState,
    ag: &dyn AgentsStrategy,
    max_nodes: usize,
    max_trees: usize,
) -> Result<AgentsEvaluation> {
    s0.check_vertices(g)?;
    let trees = spanning_trees_capped(g, max_trees)?;
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Open,
        Done(usize),
    }
    struct Node {
        state: GameState,
        ag: Box<dyn AgentsStrategy>,
        mark: Option<Mark>,
    }
    let mut nodes = vec![Node {
        state: s0.clone(),
        ag: ag.box_clone(),
        mark: None,
    }];
    let mut ids: HashMap<(GameState, Vec<u64>), usize> = HashMap::new();
    ids.insert((s0.clone(), ag.phase()), 0);
    // frames: (node, next tree index, best value so far)
    let mut stack: Vec<(usize, usize, usize)> = Vec::new();
    if s0.is_won() {
        return Ok(AgentsEvaluation::WinsWithin(0));
    }
    nodes[0].mark = Some(Mark::Open);
    stack.push((0, 0, 0));
    while let Some(&mut (id, ref mut ti, ref mut best)) = stack.last_mut() {
        if *ti == trees.len() {
            let value = *best;
            nodes[id].mark = Some(Mark::Done(value));
            stack.pop();
            if let Some(parent) = stack.last_mut() {
                parent.2 = parent.2.max(value + 1);
            }
            continue;
        }
        let tree = trees[*ti];
        *ti += 1;
        let choice = SpanningChoice::trusted(tree);
        let mut a = nodes[id].ag.box_clone();
        let state = nodes[id].state.clone();
        let mv = a.moves(g, &state, &choice)?;
        let next = apply_moves(g, &state, &choice, &mv)?;
        if next.is_won() {
            *best = (*best).max(1);
            continue;
        }
        let key = (next.clone(), a.phase());
        let child = match ids.get(&key) {
            Some(&c) => c,
            None => {
                if nodes.len() >= max_nodes {
                    return Err(Error::BudgetExceeded {
                        what: "search nodes",
                        limit: max_nodes,
                    });
                }
                ids.insert(key, nodes.len());
                nodes.push(Node {
                    state: next.clone(),
                    ag: a,
                    mark: None,
                });
                nodes.len() - 1
            }
        };
        match nodes[child].mark {
            Some(Mark::Done(v)) => {
                let frame = stack.last_mut().expect("frame");
                frame.2 = frame.2.max(v + 1);
            }
            Some(Mark::Open) => {
                // cycle: replay the open path
                let trees_played: Vec<Vec<Edge>> = stack
                    .iter()
                    .map(|&(_, t, _)| g.mask_edges(trees[t - 1]))
                    .collect();
                let mut states: Vec<GameState> = stack
                    .iter()
                    .map(|&(n, _, _)| nodes[n].state.clone())
                    .collect();
                states.push(next);
                return Ok(AgentsEvaluation::Counterline {
                    trees: trees_played,
                    states,
                });
            }
            None => {
                nodes[child].mark = Some(Mark::Open);
                stack.push((child, 0, 0));
            }
        }
    }
    match nodes[0].mark {
        Some(Mark::Done(v)) => Ok(AgentsEvaluation::WinsWithin(v)),
        _ => unreachable!("root is finished when the stack empties"),
    }
}

/// Solves the standard game three ways (every connected spanning subgraph,
/// every spanning tree, reduced projections) and reports whether all ranks
/// agree.
pub fn tree_reduction_equivalence_check(g: &Graph, k: usize) -> Result<bool> {
    if g.edge_count() > SUBGRAPH_MODEL_MAX_EDGES {
        return Err(Error::TooLarge {
            what: "edge count for the subgraph model",
            limit: SUBGRAPH_MODEL_MAX_EDGES,
        });
    }
    let run = |model| {
        let config = SolverConfig {
            model,
            ..SolverConfig::default()
        };
        solve(g, k, 1, Target::AllKnowledgeable, &config).map(|t| t.rank_vector())
    };
    let css = run(AdversaryModel::Subgraphs)?;
    Ok(css == run(AdversaryModel::Trees)? && css == run(AdversaryModel::Reduced)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate;

    fn fam(s: &str) -> Graph {
        generate(&s.parse().unwrap()).unwrap()
    }

    fn st(k: &[Vertex], i: &[Vertex]) -> GameState {
        GameState::new(k.to_vec(), i.to_vec())
    }

    #[test]
    fn pack_round_trip() {
        let s = st(&[4, 1], &[7, 0, 0]);
        assert_eq!(unpack(pack_state(&s), 5), s);
    }

    #[test]
    fn multiset_counts() {
        assert_eq!(multisets(5, 2), 15);
        assert_eq!(multisets(3, 0), 1);
    }

    #[test]
    fn cycle_five_pair_is_safe() {
        let t = agents_attractor(&fam("cycle:5"), 2).unwrap();
        assert_eq!(t.rank(&st(&[0], &[2])), None);
        assert_eq!(t.rank(&st(&[0, 0], &[])), Some(0));
        assert_eq!(t.rank(&st(&[3], &[3])), Some(1));
    }

    #[test]
    fn trees_are_agent_wins() {
        let t = agents_attractor(&fam("bintree:2"), 3).unwrap();
        assert!(t.states().all(|(_, r)| r.is_some()));
    }

    #[test]
    fn single_agent_is_immediate() {
        let c = classify(&fam("cycle:6"), 1, PlacementRule::AdversaryPlaces).unwrap();
        assert_eq!((c.winner, c.optimal_time), (Winner::Agents, Some(0)));
    }

    #[test]
    fn classification_json() {
        let c = classify(&fam("cycle:5"), 2, PlacementRule::AdversaryPlaces).unwrap();
        let json = serde_json::to_string(&c).unwrap();
        assert!(json.starts_with(r#"{"winner":"Adversary""#), "{json}");
        assert!(json.contains("witness_placement"));
        assert!(!json.contains("optimal_time"));
    }

    #[test]
    fn path_config_times() {
        let t = classify_config(&fam("path:5"), 1, 1).unwrap();
        assert_eq!(t.win_time, Some(2));
        let t = classify_config(&fam("path:6"), 2, 1).unwrap();
        assert_eq!(t.first_spread_time, Some(2));
        let t = classify_config(&fam("path:4"), 0, 2).unwrap();
        assert_eq!((t.first_spread_time, t.win_time), (Some(0), Some(0)));
    }

    #[test]
    fn budget_is_enforced() {
        let config = SolverConfig {
            max_states: 10,
            ..SolverConfig::default()
        };
        assert!(matches!(
            classify_with(&fam("cycle:6"), 3, PlacementRule::AdversaryPlaces, &config),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn forward_search_matches_table_ranks() {
        for (name, k) in [
            ("cycle:5", 3),
            ("path:6", 3),
            ("theta:2,3", 3),
            ("clique:4", 2),
        ] {
            let g = fam(name);
            let t = agents_attractor(&g, k).unwrap();
            for (s, r) in t.states() {
                for rounds in 0..=3 {
                    let fwd = forces_within(
                        &g,
                        &s,
                        Target::AllKnowledgeable,
                        rounds,
                        &SolverConfig::default(),
                    )
                    .unwrap();
                    assert_eq!(fwd, r.is_some_and(|r| r <= rounds), "{name} {s} {rounds}");
                }
            }
        }
    }

    #[test]
    fn capped_ranks_agree_below_the_cap() {
        let g = fam("path:7");
        let full = solve(&g, 3, 1, Target::AllKnowledgeable, &SolverConfig::default()).unwrap();
        let config = SolverConfig {
            max_rank: Some(2),
            ..SolverConfig::default()
        };
        let capped = solve(&g, 3, 1, Target::AllKnowledgeable, &config).unwrap();
        assert!(full.max_rank() > 2);
        for ((s, a), (_, b)) in full.states().zip(capped.states()) {
            assert_eq!(a.filter(|&r| r <= 2), b, "{s}");
        }
        assert_eq!(capped.iterations(), 2);
    }

    #[test]
    fn interchangeable_agents_do_not_change_ranks() {
        // three agents stacked on one vertex exercise the multiset enumeration
        let g = fam("cycle:5");
        let t = agents_attractor(&g, 4).unwrap();
        let trees = solve(
            &g,
            4,
            1,
            Target::AllKnowledgeable,
            &SolverConfig {
                model: AdversaryModel::Trees,
                ..SolverConfig::default()
            },
        )
        .unwrap();
        assert_eq!(t.rank_vector(), trees.rank_vector());
        assert_eq!(
            t.rank(&st(&[0], &[2, 2, 2])),
            trees.rank(&st(&[0], &[2, 2, 2]))
        );
    }

    #[test]
    fn evaluate_rendezvous_on_path() {
        let g = fam("path:4");
        let r = evaluate_agents_strategy(
            &g,
            &st(&[0], &[3]),
            &crate::strategies::rendezvous_tree_agents(1),
        )
        .unwrap();
        assert_eq!(r, AgentsEvaluation::WinsWithin(2));
        let won = evaluate_agents_strategy(
            &g,
            &st(&[2, 2], &[]),
            &crate::strategies::rendezvous_tree_agents(1),
        )
        .unwrap();
        assert_eq!(won, AgentsEvaluation::WinsWithin(0));
    }

    #[test]
    fn small_reduction_checks() {
        for name in ["cycle:4", "cycle:5", "clique:4"] {
            assert!(
                tree_reduction_equivalence_check(&fam(name), 2).unwrap(),
                "{name}"
            );
        }
    }
}
