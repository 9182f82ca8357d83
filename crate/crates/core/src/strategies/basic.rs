use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{steps_toward, AdversaryStrategy, AgentsStrategy};
use crate::error::{Error, Result};
use crate::game::{GameState, MoveVector, SpanningChoice};
use crate::graph::{Graph, Vertex};

/// Every agent walks toward a fixed vertex along the current subgraph.
#[derive(Clone, Debug)]
pub struct RendezvousAgents {
    target: Vertex,
}

pub fn rendezvous_tree_agents(target: Vertex) -> RendezvousAgents {
    RendezvousAgents { target }
}

impl AgentsStrategy for RendezvousAgents {
    fn name(&self) -> String {
        format!("rendezvous:{}", self.target)
    }

    fn moves(&mut self, g: &Graph, s: &GameState, choice: &SpanningChoice) -> Result<MoveVector> {
        g.check_vertex(self.target)?;
        let next = steps_toward(g, choice.mask(), self.target);
        Ok(MoveVector(s.slots().into_iter().map(|v| next[v]).collect()))
    }

    fn box_clone(&self) -> Box<dyn AgentsStrategy> {
        Box::new(self.clone())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tiebreak {
    /// Cut the edge toward the lower-numbered neighbour.
    LowestNeighbor,
    Seeded(u64),
}

/// On a cycle, cuts the edge next to the knowledgeable agent on the shorter
/// way round to the ignorant agent.
#[derive(Clone, Debug)]
pub struct CycleAdversary {
    rng: Option<ChaCha8Rng>,
}

pub fn cycle_adversary(tiebreak: Tiebreak) -> CycleAdversary {
    CycleAdversary {
        rng: match tiebreak {
            Tiebreak::LowestNeighbor => None,
            Tiebreak::Seeded(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        },
    }
}

impl CycleAdversary {
    fn order(g: &Graph) -> Result<Vec<Vertex>> {
        g.cycle_order()
            .ok_or_else(|| Error::Precondition("cycle strategy needs a cycle graph".into()))
    }
}

impl AdversaryStrategy for CycleAdversary {
    fn name(&self) -> String {
        "cycle".into()
    }

    fn choose(&mut self, g: &Graph, s: &GameState) -> Result<SpanningChoice> {
        let order = Self::order(g)?;
        let m = order.len();
        if s.is_won() {
            return SpanningChoice::full(g);
        }
        let mut pos = vec![0; m];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        // closest knowledgeable/ignorant pair
        let (kv, iv) = s
            .knowledgeable()
            .iter()
            .flat_map(|&k| s.ignorant().iter().map(move |&i| (k, i)))
            .min_by_key(|&(k, i)| {
                let f = (pos[i] + m - pos[k]) % m;
                (f.min(m - f), k, i)
            })
            .expect("non-won state has both kinds");
        let fwd = (pos[iv] + m - pos[kv]) % m;
        let ahead = order[(pos[kv] + 1) % m];
        let behind = order[(pos[kv] + m - 1) % m];
        let cut_to = if fwd == 0 || fwd == m - fwd {
            let flip = self.rng.as_mut().is_some_and(|rng| rng.gen_bool(0.5));
            if flip {
                ahead.max(behind)
            } else {
                ahead.min(behind)
            }
        } else if fwd < m - fwd {
            ahead
        } else {
            behind
        };
        let cut = g
            .edge_index(kv, cut_to)
            .expect("cycle neighbours are adjacent");
        let mut mask = g.full_mask()?;
        mask.remove(cut);
        SpanningChoice::new(g, mask)
    }

    fn phase(&self) -> Vec<u64> {
        match &self.rng {
            Some(rng) => {
                let pos = rng.get_word_pos();
                vec![pos as u64, (pos >> 64) as u64]
            }
            None => Vec::new(),
        }
    }

    /// Knowledgeable agent at the start of the cycle order, ignorant agent
    /// half-way round.
    fn designated_placement(&self, g: &Graph, k: usize) -> Option<GameState> {
        let order = Self::order(g).ok()?;
        (k == 2).then(|| GameState::new(vec![order[0]], vec![order[order.len() / 2]]))
    }

    fn box_clone(&self) -> Box<dyn AdversaryStrategy> {
        Box::new(self.clone())
    }
}

/// Picks the ignorant agent whose tree path to the nearest knowledgeable
/// agent carries the most ignorant agents, and moves that whole path one
/// step toward the source. The source agent steps toward the chosen agent
/// unless they are adjacent.
#[derive(Clone, Debug, Default)]
pub struct GreedySourceAgents;

pub fn greedy_to_source_agents() -> GreedySourceAgents {
    GreedySourceAgents
}

impl GreedySourceAgents {
    /// The chosen path, from the ignorant agent to the source inclusive.
    pub fn chosen_path(
        g: &Graph,
        s: &GameState,
        choice: &SpanningChoice,
    ) -> Result<Option<Vec<Vertex>>> {
        let n = g.vertex_count();
        if choice.mask().len() + 1 != n {
            return Err(Error::Precondition(
                "greedy-source needs a spanning tree".into(),
            ));
        }
        if s.is_won() {
            return Ok(None);
        }
        let tree = choice.subgraph(g);
        // multi-source BFS from the knowledgeable vertices
        let mut next = vec![usize::MAX; n];
        let mut queue = std::collections::VecDeque::new();
        for &k in s.knowledgeable() {
            if next[k] == usize::MAX {
                next[k] = k;
                queue.push_back(k);
            }
        }
        while let Some(u) = queue.pop_front() {
            for &w in tree.neighbors(u) {
                if next[w] == usize::MAX {
                    next[w] = u;
                    queue.push_back(w);
                }
            }
        }
        let mut ignorant_at = vec![0usize; n];
        for &i in s.ignorant() {
            ignorant_at[i] += 1;
        }
        let mut best: Option<(usize, Vec<Vertex>)> = None;
        for c in s.occupied() {
            if ignorant_at[c] == 0 {
                continue;
            }
            let mut path = vec![c];
            let mut v = c;
            while next[v] != v {
                v = next[v];
                path.push(v);
            }
            let count: usize = path[..path.len() - 1].iter().map(|&v| ignorant_at[v]).sum();
            if best.as_ref().is_none_or(|(b, _)| count > *b) {
                best = Some((count, path));
            }
        }
        Ok(best.map(|(_, p)| p))
    }
}

impl AgentsStrategy for GreedySourceAgents {
    fn name(&self) -> String {
        "greedy-source".into()
    }

    fn moves(&mut self, g: &Graph, s: &GameState, choice: &SpanningChoice) -> Result<MoveVector> {
        let Some(path) = Self::chosen_path(g, s, choice)? else {
            return Ok(MoveVector::stay(s));
        };
        let n = g.vertex_count();
        let mut dest: Vec<Vertex> = (0..n).collect();
        let mut on_path = vec![false; n];
        for w in path.windows(2) {
            dest[w[0]] = w[1];
            on_path[w[0]] = true;
        }
        let source = *path.last().unwrap();
        let source_step = (path.len() >= 3).then(|| path[path.len() - 2]);
        let k = s.knowledgeable().len();
        Ok(MoveVector(
            s.slots()
                .into_iter()
                .enumerate()
                .map(|(slot, v)| {
                    if slot < k {
                        match source_step {
                            Some(to) if v == source => to,
                            _ => v,
                        }
                    } else if on_path[v] {
                        dest[v]
                    } else {
                        v
                    }
                })
                .collect(),
        ))
    }

    fn box_clone(&self) -> Box<dyn AgentsStrategy> {
        Box::new(self.clone())
    }
}

/// Plays a strategy for a connected spanning subgraph on the host graph.
#[derive(Clone)]
pub struct RestrictedAdversary {
    inner: Box<dyn AdversaryStrategy>,
    sub: Graph,
}

pub fn restrict_to_subgraph(
    inner: Box<dyn AdversaryStrategy>,
    sub: &Graph,
    host: &Graph,
) -> Result<RestrictedAdversary> {
    if sub.vertex_count() != host.vertex_count() {
        return Err(Error::Precondition("subgraph must span the host".into()));
    }
    if let Some(&(u, v)) = sub.edges().iter().find(|&&(u, v)| !host.has_edge(u, v)) {
        return Err(Error::MissingEdge(u, v));
    }
    sub.require_connected()?;
    Ok(RestrictedAdversary {
        inner,
        sub: sub.clone(),
    })
}

impl AdversaryStrategy for RestrictedAdversary {
    fn name(&self) -> String {
        format!("restrict({})", self.inner.name())
    }

    fn choose(&mut self, g: &Graph, s: &GameState) -> Result<SpanningChoice> {
        let c = self.inner.choose(&self.sub, s)?;
        SpanningChoice::from_edges(g, &c.edges(&self.sub))
    }

    fn phase(&self) -> Vec<u64> {
        self.inner.phase()
    }

    fn designated_placement(&self, _g: &Graph, k: usize) -> Option<GameState> {
        self.inner.designated_placement(&self.sub, k)
    }

    fn box_clone(&self) -> Box<dyn AdversaryStrategy> {
        Box::new(self.clone())
    }
}
