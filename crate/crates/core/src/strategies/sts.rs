use std::sync::Arc;

use super::AdversaryStrategy;
use crate::error::{Error, Result};
use crate::game::{GameState, SpanningChoice};
use crate::graph::{Edge, Graph, Vertex};
use crate::symmetry::{extends_to_tree_isomorphism, OneStepFunction, StsWitness};

/// Plays `T_S` for the opening positions, then after every agents' move the
/// image of the current tree under a map extending that move, so the
/// positions keep the same shape on an isomorphic tree.
///
/// When the current tree is the witness tree of the previous positions the
/// stored map is used; otherwise a map is searched for. If none exists the
/// witness tree of the new positions is played instead.
#[derive(Clone, Debug)]
pub struct StsAdversary {
    witness: Arc<StsWitness>,
    current: Option<(Vec<Edge>, Vec<Vertex>)>,
    last_map: Option<Vec<Vertex>>,
}

pub fn sts_adversary(witness: StsWitness) -> StsAdversary {
    StsAdversary {
        witness: Arc::new(witness),
        current: None,
        last_map: None,
    }
}

fn normalize(mut edges: Vec<Edge>) -> Vec<Edge> {
    for e in &mut edges {
        *e = (e.0.min(e.1), e.0.max(e.1));
    }
    edges.sort_unstable();
    edges
}

impl StsAdversary {
    /// The vertex map used for the most recent choice, if it was an image.
    pub fn last_map(&self) -> Option<&[Vertex]> {
        self.last_map.as_deref()
    }

    fn witness_tree(&self, set: &[Vertex]) -> Result<Vec<Edge>> {
        self.witness
            .entry(set)
            .map(|e| e.tree.clone())
            .ok_or_else(|| {
                Error::OutsideDomain(format!("positions {set:?} not covered by witness"))
            })
    }

    /// The move that took `prev` to `now` along `tree`, if unambiguous.
    fn recover_move(tree: &Graph, prev: &[Vertex], now: &[Vertex]) -> Option<OneStepFunction> {
        let mut image = Vec::with_capacity(prev.len());
        for &p in prev {
            let mut hits = now.iter().filter(|&&q| q == p || tree.has_edge(p, q));
            let q = *hits.next()?;
            if hits.next().is_some() {
                return None;
            }
            image.push(q);
        }
        let t = OneStepFunction {
            domain: prev.to_vec(),
            image,
        };
        let mut covered = t.image.clone();
        covered.sort_unstable();
        (covered == now).then_some(t)
    }

    fn next_tree(&mut self, g: &Graph, now: &[Vertex]) -> Result<Vec<Edge>> {
        self.last_map = None;
        let Some((tree_edges, prev)) = &self.current else {
            return self.witness_tree(now);
        };
        let tree = Graph::new(g.vertex_count(), tree_edges.iter().copied())?;
        let Some(t) = Self::recover_move(&tree, prev, now) else {
            return self.witness_tree(now);
        };
        let stored = self.witness.entry(prev).and_then(|e| {
            (normalize(e.tree.clone()) == *tree_edges)
                .then(|| {
                    e.maps
                        .iter()
                        .find(|m| m.image == t.image)
                        .map(|m| m.phi.clone())
                })
                .flatten()
        });
        match stored.or_else(|| extends_to_tree_isomorphism(&tree, &t, g)) {
            Some(phi) => {
                let image = normalize(tree_edges.iter().map(|&(a, b)| (phi[a], phi[b])).collect());
                self.last_map = Some(phi);
                Ok(image)
            }
            None => self.witness_tree(now),
        }
    }
}

impl AdversaryStrategy for StsAdversary {
    fn name(&self) -> String {
        "sts".into()
    }

    fn choose(&mut self, g: &Graph, s: &GameState) -> Result<SpanningChoice> {
        let now = s.occupied();
        if now.len() != self.witness.k || s.agent_count() != self.witness.k {
            return Err(Error::OutsideDomain(format!(
                "state {s} is not a {}-set",
                self.witness.k
            )));
        }
        let tree = normalize(self.next_tree(g, &now)?);
        let choice = SpanningChoice::from_edges(g, &tree)?;
        self.current = Some((tree, now));
        Ok(choice)
    }

    fn phase(&self) -> Vec<u64> {
        match &self.current {
            None => Vec::new(),
            Some((tree, prev)) => tree
                .iter()
                .map(|&(a, b)| ((a as u64) << 32) | b as u64)
                .chain(std::iter::once(u64::MAX))
                .chain(prev.iter().map(|&v| v as u64))
                .collect(),
        }
    }

    /// Knowledgeable agent on the smallest vertex of the first k-set.
    fn designated_placement(&self, _g: &Graph, k: usize) -> Option<GameState> {
        let first = self.witness.entries.first()?;
        (k == self.witness.k).then(|| GameState::new(vec![first.set[0]], first.set[1..].to_vec()))
    }

    fn box_clone(&self) -> Box<dyn AdversaryStrategy> {
        Box::new(self.clone())
    }
}
