//! Executable adversary and agents strategies, and the combinators that lift
//! a strategy from one graph to a related one.

mod basic;
mod grid;
mod lift;
mod sts;

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use basic::{
    cycle_adversary, greedy_to_source_agents, rendezvous_tree_agents, restrict_to_subgraph,
    CycleAdversary, GreedySourceAgents, RendezvousAgents, RestrictedAdversary, Tiebreak,
};
pub use grid::{
    grid_alternating_adversary, grid_coordinates, grid_vertex, GridAlternatingAdversary,
};
pub use lift::{
    contract_lift_agents, cut_vertex_lift, expand_lift_agents, ContractLiftAgents, CutVertexLift,
    ExpandLiftAgents,
};
pub use sts::{sts_adversary, StsAdversary};

use crate::error::Result;
use crate::game::{move_options, GameState, MoveVector, SpanningChoice};
use crate::graph::{EdgeSet, Graph, Vertex};

/// Chooses the round's connected spanning subgraph.
pub trait AdversaryStrategy: Send + Sync {
    fn name(&self) -> String;

    fn choose(&mut self, g: &Graph, s: &GameState) -> Result<SpanningChoice>;

    /// Internal memory that, together with the state, determines all future
    /// choices. Empty for memoryless strategies.
    fn phase(&self) -> Vec<u64> {
        Vec::new()
    }

    /// The placement this strategy would pick when it sets up the game.
    fn designated_placement(&self, _g: &Graph, _k: usize) -> Option<GameState> {
        None
    }

    fn box_clone(&self) -> Box<dyn AdversaryStrategy>;
}

/// Moves every agent given the state and the adversary's choice.
pub trait AgentsStrategy: Send + Sync {
    fn name(&self) -> String;

    fn moves(&mut self, g: &Graph, s: &GameState, choice: &SpanningChoice) -> Result<MoveVector>;

    fn phase(&self) -> Vec<u64> {
        Vec::new()
    }

    fn box_clone(&self) -> Box<dyn AgentsStrategy>;
}

impl Clone for Box<dyn AdversaryStrategy> {
    fn clone(&self) -> Self {
        self.box_clone()
    }
}

impl Clone for Box<dyn AgentsStrategy> {
    fn clone(&self) -> Self {
        self.box_clone()
    }
}

/// `next[v]` is the neighbour of `v` one step closer to `target` in the
/// subgraph selected by `mask` (`next[target] = target`). Unreachable
/// vertices map to themselves.
pub(crate) fn steps_toward(g: &Graph, mask: EdgeSet, target: Vertex) -> Vec<Vertex> {
    let opts = move_options(g, mask);
    let n = g.vertex_count();
    let mut next = vec![usize::MAX; n];
    next[target] = target;
    let mut queue = VecDeque::from([target]);
    while let Some(u) = queue.pop_front() {
        for &w in &opts[u][1..] {
            if next[w] == usize::MAX {
                next[w] = u;
                queue.push_back(w);
            }
        }
    }
    next.iter()
        .enumerate()
        .map(|(v, &p)| if p == usize::MAX { v } else { p })
        .collect()
}

/// Agents that pick a uniformly random legal move each round (seeded).
#[derive(Clone)]
pub struct RandomAgents {
    rng: ChaCha8Rng,
}

impl RandomAgents {
    pub fn new(seed: u64) -> Self {
        RandomAgents {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl AgentsStrategy for RandomAgents {
    fn name(&self) -> String {
        "random".into()
    }

    fn moves(&mut self, g: &Graph, s: &GameState, choice: &SpanningChoice) -> Result<MoveVector> {
        let opts = move_options(g, choice.mask());
        Ok(MoveVector(
            s.slots()
                .into_iter()
                .map(|v| {
                    *opts[v]
                        .choose(&mut self.rng)
                        .expect("a vertex can always stay")
                })
                .collect(),
        ))
    }

    fn phase(&self) -> Vec<u64> {
        let pos = self.rng.get_word_pos();
        vec![pos as u64, (pos >> 64) as u64]
    }

    fn box_clone(&self) -> Box<dyn AgentsStrategy> {
        Box::new(self.clone())
    }
}
