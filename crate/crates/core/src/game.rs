//! Round mechanics: states, adversary choices, agent moves, knowledge spread
//! and strategy-versus-strategy play.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, EdgeSet, Graph, Vertex};
use crate::strategies::{AdversaryStrategy, AgentsStrategy};

/// Agent positions split by knowledge. Both multisets are kept sorted, so
/// equal states compare equal regardless of how they were built.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GameState {
    knowledgeable: Vec<Vertex>,
    ignorant: Vec<Vertex>,
}

impl GameState {
    pub fn new(mut knowledgeable: Vec<Vertex>, mut ignorant: Vec<Vertex>) -> Self {
        knowledgeable.sort_unstable();
        ignorant.sort_unstable();
        GameState {
            knowledgeable,
            ignorant,
        }
    }

    pub fn knowledgeable(&self) -> &[Vertex] {
        &self.knowledgeable
    }

    pub fn ignorant(&self) -> &[Vertex] {
        &self.ignorant
    }

    pub fn agent_count(&self) -> usize {
        self.knowledgeable.len() + self.ignorant.len()
    }

    pub fn is_won(&self) -> bool {
        self.ignorant.is_empty()
    }

    /// Positions in slot order: knowledgeable agents, then ignorant ones.
    pub fn slots(&self) -> Vec<Vertex> {
        self.knowledgeable
            .iter()
            .chain(&self.ignorant)
            .copied()
            .collect()
    }

    /// Distinct occupied vertices, sorted.
    pub fn occupied(&self) -> Vec<Vertex> {
        let mut v = self.slots();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn map_vertices(&self, f: impl Fn(Vertex) -> Vertex) -> GameState {
        GameState::new(
            self.knowledgeable.iter().map(|&v| f(v)).collect(),
            self.ignorant.iter().map(|&v| f(v)).collect(),
        )
    }

    pub fn check_vertices(&self, g: &Graph) -> Result<()> {
        self.slots().into_iter().try_for_each(|v| g.check_vertex(v))
    }
}

impl fmt::Display for GameState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "K:{};I:{}",
            self.knowledgeable.iter().join(","),
            self.ignorant.iter().join(",")
        )
    }
}

/// Parses `K:0,3;I:1,2` (either side may be empty).
impl FromStr for GameState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Precondition(format!("cannot parse state `{s}`"));
        let mut k = None;
        let mut i = None;
        for part in s.split(';') {
            let (tag, list) = part.split_once(':').ok_or_else(bad)?;
            let verts: Vec<Vertex> = list
                .split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(|t| t.parse().map_err(|_| bad()))
                .collect::<Result<_>>()?;
            match tag.trim() {
                "K" | "k" => k = Some(verts),
                "I" | "i" => i = Some(verts),
                _ => return Err(bad()),
            }
        }
        Ok(GameState::new(k.unwrap_or_default(), i.unwrap_or_default()))
    }
}

pub fn is_agents_win(s: &GameState) -> bool {
    s.is_won()
}

/// A connected spanning subgraph of the base graph, as an edge mask.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SpanningChoice {
    mask: EdgeSet,
}

impl SpanningChoice {
    pub fn new(g: &Graph, mask: EdgeSet) -> Result<Self> {
        g.check_maskable()?;
        if !mask.is_subset(EdgeSet::full(g.edge_count())) || !g.edge_subgraph(mask).is_connected() {
            return Err(Error::NotSpanning);
        }
        Ok(SpanningChoice { mask })
    }

    pub fn from_edges(g: &Graph, edges: &[Edge]) -> Result<Self> {
        SpanningChoice::new(g, g.mask_of(edges)?)
    }

    /// The whole base graph.
    pub fn full(g: &Graph) -> Result<Self> {
        SpanningChoice::new(g, g.full_mask()?)
    }

    /// Wraps a mask already known to be connected and spanning.
    pub(crate) fn trusted(mask: EdgeSet) -> Self {
        SpanningChoice { mask }
    }

    pub fn mask(&self) -> EdgeSet {
        self.mask
    }

    pub fn edges(&self, g: &Graph) -> Vec<Edge> {
        g.mask_edges(self.mask)
    }

    pub fn subgraph(&self, g: &Graph) -> Graph {
        g.edge_subgraph(self.mask)
    }

    pub fn has_edge(&self, g: &Graph, u: Vertex, v: Vertex) -> bool {
        g.edge_index(u, v).is_some_and(|i| self.mask.contains(i))
    }
}

/// Per-vertex move options under an edge mask: the vertex itself first, then
/// its neighbours across selected edges in increasing order.
pub fn move_options(g: &Graph, mask: EdgeSet) -> Vec<Vec<Vertex>> {
    let mut opts: Vec<Vec<Vertex>> = (0..g.vertex_count()).map(|v| vec![v]).collect();
    for i in mask.iter() {
        let (u, v) = g.edges()[i];
        opts[u].push(v);
        opts[v].push(u);
    }
    for o in &mut opts {
        o[1..].sort_unstable();
    }
    opts
}

/// One destination per agent slot (knowledgeable slots first).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MoveVector(pub Vec<Vertex>);

impl MoveVector {
    pub fn stay(s: &GameState) -> Self {
        MoveVector(s.slots())
    }
}

/// Knowledge update after simultaneous moves: an ignorant agent learns iff
/// it ends on a vertex where some agent that was knowledgeable at the start
/// of the round also ends.
pub(crate) fn resolve(k_dest: &[Vertex], i_dest: &[Vertex]) -> GameState {
    let mut knowledgeable = k_dest.to_vec();
    let mut ignorant = Vec::with_capacity(i_dest.len());
    for &v in i_dest {
        if k_dest.contains(&v) {
            knowledgeable.push(v);
        } else {
            ignorant.push(v);
        }
    }
    GameState::new(knowledgeable, ignorant)
}

/// Moves every agent and spreads knowledge by co-location.
pub fn apply_moves(
    g: &Graph,
    s: &GameState,
    choice: &SpanningChoice,
    mv: &MoveVector,
) -> Result<GameState> {
    let slots = s.slots();
    if mv.0.len() != slots.len() {
        return Err(Error::MoveArity {
            got: mv.0.len(),
            expected: slots.len(),
        });
    }
    for (slot, (&from, &to)) in slots.iter().zip(&mv.0).enumerate() {
        if from != to && !choice.has_edge(g, from, to) {
            return Err(Error::IllegalMove { slot, from, to });
        }
    }
    let k = s.knowledgeable().len();
    Ok(resolve(&mv.0[..k], &mv.0[k..]))
}

/// All move vectors for `s` given per-vertex options, in odometer order
/// (last slot varies fastest).
pub fn move_vectors<'a>(
    s: &GameState,
    options: &'a [Vec<Vertex>],
) -> impl Iterator<Item = MoveVector> + 'a {
    let choices: Vec<&'a [Vertex]> = s
        .slots()
        .into_iter()
        .map(|v| options[v].as_slice())
        .collect();
    choices
        .into_iter()
        .map(|o| o.iter().copied())
        .multi_cartesian_product()
        .map(MoveVector)
}

/// Distinct successor states over every legal move vector.
pub fn agent_move_options(g: &Graph, s: &GameState, choice: &SpanningChoice) -> Vec<GameState> {
    let opts = move_options(g, choice.mask());
    let k = s.knowledgeable().len();
    let mut out: Vec<GameState> = move_vectors(s, &opts)
        .map(|mv| resolve(&mv.0[..k], &mv.0[k..]))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Standard setup: one knowledgeable and `k - 1` ignorant agents on `k`
/// distinct vertices.
pub fn initial_placements(g: &Graph, k: usize) -> Result<Vec<GameState>> {
    if k == 0 {
        return Err(Error::AgentCount {
            agents: k,
            vertex_count: g.vertex_count(),
        });
    }
    config_placements(g, k - 1, 1)
}

/// `y` knowledgeable and `x` ignorant agents on `x + y` distinct vertices.
pub fn config_placements(g: &Graph, x: usize, y: usize) -> Result<Vec<GameState>> {
    let n = g.vertex_count();
    if y == 0 || x + y > n {
        return Err(Error::AgentCount {
            agents: x + y,
            vertex_count: n,
        });
    }
    let mut out = Vec::new();
    for kset in (0..n).combinations(y) {
        let rest: Vec<Vertex> = (0..n).filter(|v| !kset.contains(v)).collect();
        for iset in rest.into_iter().combinations(x) {
            out.push(GameState::new(kset.clone(), iset));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum PlayOutcome {
    AgentsWinAt {
        round: usize,
    },
    CycleDetected {
        first_repeat_round: usize,
        period: usize,
    },
    RoundCapReached {
        cap: usize,
    },
}

/// One round of play, as written to trace files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub round: usize,
    pub subgraph_edges: Vec<Edge>,
    pub positions_before: GameState,
    pub positions_after: GameState,
    pub knowledgeable_count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlayResult {
    pub outcome: PlayOutcome,
    pub trace: Vec<TraceRecord>,
}

impl PlayResult {
    /// Trace as JSON lines, one record per round.
    pub fn trace_jsonl(&self) -> String {
        self.trace
            .iter()
            .map(|r| serde_json::to_string(r).expect("trace records serialize") + "\n")
            .collect()
    }
}

/// Plays `adv` against `ag` from `s0`. Stops at the first win, the first
/// repeated (state, strategy phases) configuration, or after `cap` rounds.
pub fn play(
    g: &Graph,
    s0: &GameState,
    adv: &mut dyn AdversaryStrategy,
    ag: &mut dyn AgentsStrategy,
    cap: usize,
) -> Result<PlayResult> {
    s0.check_vertices(g)?;
    let mut seen: HashMap<(GameState, Vec<u64>, Vec<u64>), usize> = HashMap::new();
    let mut trace = Vec::new();
    let mut state = s0.clone();
    let mut round = 0;
    let outcome = loop {
        if state.is_won() {
            break PlayOutcome::AgentsWinAt { round };
        }
        let key = (state.clone(), adv.phase(), ag.phase());
        if let Some(&prev) = seen.get(&key) {
            break PlayOutcome::CycleDetected {
                first_repeat_round: round,
                period: round - prev,
            };
        }
        seen.insert(key, round);
        if round == cap {
            break PlayOutcome::RoundCapReached { cap };
        }
        let choice = adv.choose(g, &state)?;
        let choice = SpanningChoice::new(g, choice.mask())?;
        let mv = ag.moves(g, &state, &choice)?;
        let next = apply_moves(g, &state, &choice, &mv)?;
        trace.push(TraceRecord {
            round: round + 1,
            subgraph_edges: choice.edges(g),
            positions_before: state.clone(),
            positions_after: next.clone(),
            knowledgeable_count: next.knowledgeable().len(),
        });
        state = next;
        round += 1;
    };
    Ok(PlayResult { outcome, trace })
}
