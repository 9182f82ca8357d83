use itertools::Itertools;

use super::{greedy_to_source_agents, AdversaryStrategy, AgentsStrategy};
use crate::error::{Error, Result};
use crate::game::{apply_moves, GameState, SpanningChoice};
use crate::graph::{generate, spanning_trees, Edge, EdgeSet, FamilySpec, Graph, Vertex};

/// Vertex id of grid cell (column, row), both 1-based.
pub fn grid_vertex(cols: usize, col: usize, row: usize) -> Vertex {
    (row - 1) * cols + (col - 1)
}

/// Inverse of [`grid_vertex`].
pub fn grid_coordinates(cols: usize, v: Vertex) -> (usize, usize) {
    (v % cols + 1, v / cols + 1)
}

/// Alternates between a comb tree (every column path plus one connector
/// per neighbouring column pair) and a second tree under which the greedy
/// source-seeking agents walk straight back to the start.
#[derive(Clone, Debug)]
pub struct GridAlternatingAdversary {
    comb: EdgeSet,
    flip: EdgeSet,
    odd_round: bool,
    placement: GameState,
}

/// Knowledgeable agent at (1,1); column 2 full; later columns miss the
/// bottom cell (odd columns) or the top cell (even columns).
fn alternating_placement(rows: usize, cols: usize) -> GameState {
    let mut ignorant: Vec<Vertex> = (1..=rows).map(|r| grid_vertex(cols, 2, r)).collect();
    for c in 3..=cols {
        let skip = if c % 2 == 1 { 1 } else { rows };
        ignorant.extend(
            (1..=rows)
                .filter(|&r| r != skip)
                .map(|r| grid_vertex(cols, c, r)),
        );
    }
    GameState::new(vec![grid_vertex(cols, 1, 1)], ignorant)
}

fn comb_tree(g: &Graph, rows: usize, cols: usize, connectors: &[usize]) -> Result<EdgeSet> {
    let mut edges: Vec<Edge> = Vec::new();
    for c in 1..=cols {
        for r in 1..rows {
            edges.push((grid_vertex(cols, c, r), grid_vertex(cols, c, r + 1)));
        }
    }
    for (c, &r) in (1..cols).zip(connectors) {
        edges.push((grid_vertex(cols, c, r), grid_vertex(cols, c + 1, r)));
    }
    g.mask_of(&edges)
}

fn greedy_step(g: &Graph, s: &GameState, mask: EdgeSet) -> Result<GameState> {
    let choice = SpanningChoice::new(g, mask)?;
    let mv = greedy_to_source_agents().moves(g, s, &choice)?;
    apply_moves(g, s, &choice, &mv)
}

/// Builds the alternating strategy and its starting placement on the grid
/// with `rows` rows and `cols` columns.
///
/// Connector rows for the comb are searched, trying the boustrophedon
/// (top, bottom, top, ...) first; the second tree is the first spanning tree
/// in enumeration order that returns greedy agents to the start.
pub fn grid_alternating_adversary(
    rows: usize,
    cols: usize,
) -> Result<(GameState, GridAlternatingAdversary)> {
    if rows < 2 || cols < 2 || (rows <= 2 && cols <= 2) {
        return Err(Error::Precondition(format!("grid {rows}x{cols} too small")));
    }
    let g = generate(&FamilySpec::Grid { rows, cols })?;
    let start = alternating_placement(rows, cols);
    let trees = spanning_trees(&g)?;
    let snake: Vec<usize> = (1..cols)
        .map(|c| if c % 2 == 1 { rows } else { 1 })
        .collect();
    let others = (0..cols - 1).map(|_| 1..=rows).multi_cartesian_product();
    for connectors in std::iter::once(snake).chain(others) {
        let comb = comb_tree(&g, rows, cols, &connectors)?;
        let mid = greedy_step(&g, &start, comb)?;
        if mid.is_won() {
            continue;
        }
        for &flip in &trees {
            if greedy_step(&g, &mid, flip)? == start {
                let adv = GridAlternatingAdversary {
                    comb,
                    flip,
                    odd_round: false,
                    placement: start.clone(),
                };
                return Ok((start, adv));
            }
        }
    }
    Err(Error::Precondition(format!(
        "no alternating tree pair found for grid {rows}x{cols}"
    )))
}

impl GridAlternatingAdversary {
    pub fn comb_tree(&self) -> EdgeSet {
        self.comb
    }

    pub fn flip_tree(&self) -> EdgeSet {
        self.flip
    }
}

impl AdversaryStrategy for GridAlternatingAdversary {
    fn name(&self) -> String {
        "grid-alt".into()
    }

    fn choose(&mut self, g: &Graph, _s: &GameState) -> Result<SpanningChoice> {
        let mask = if self.odd_round { self.flip } else { self.comb };
        self.odd_round = !self.odd_round;
        SpanningChoice::new(g, mask)
    }

    fn phase(&self) -> Vec<u64> {
        vec![self.odd_round as u64]
    }

    fn designated_placement(&self, _g: &Graph, k: usize) -> Option<GameState> {
        (k == self.placement.agent_count()).then(|| self.placement.clone())
    }

    fn box_clone(&self) -> Box<dyn AdversaryStrategy> {
        Box::new(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{play, PlayOutcome};

    #[test]
    fn coordinates_round_trip() {
        for v in 0..12 {
            let (c, r) = grid_coordinates(4, v);
            assert_eq!(grid_vertex(4, c, r), v);
        }
        assert_eq!(grid_vertex(3, 1, 1), 0);
        assert_eq!(grid_vertex(3, 2, 3), 7);
    }

    #[test]
    fn placement_pattern() {
        let s = alternating_placement(3, 3);
        assert_eq!(s.knowledgeable(), &[0]);
        // column 2 full, column 3 misses the bottom row
        assert_eq!(s.ignorant(), &[1, 4, 5, 7, 8]);
        assert_eq!(alternating_placement(3, 4).agent_count(), 8);
    }

    #[test]
    fn comb_holds_every_column_edge() {
        let (_, adv) = grid_alternating_adversary(3, 3).unwrap();
        let g = generate(&FamilySpec::Grid { rows: 3, cols: 3 }).unwrap();
        let comb = adv.comb_tree();
        for c in 1..=3 {
            for r in 1..3 {
                let e = g
                    .edge_index(grid_vertex(3, c, r), grid_vertex(3, c, r + 1))
                    .unwrap();
                assert!(comb.contains(e));
            }
        }
        assert!(g.edge_subgraph(comb).is_tree());
        assert!(g.edge_subgraph(adv.flip_tree()).is_tree());
    }

    #[test]
    fn greedy_agents_cycle_with_period_two() {
        for (rows, cols) in [(3, 3), (3, 4), (4, 3)] {
            let g = generate(&FamilySpec::Grid { rows, cols }).unwrap();
            let (s0, mut adv) = grid_alternating_adversary(rows, cols).unwrap();
            let mut ag = greedy_to_source_agents();
            let res = play(&g, &s0, &mut adv, &mut ag, 40).unwrap();
            assert_eq!(
                res.outcome,
                PlayOutcome::CycleDetected {
                    first_repeat_round: 2,
                    period: 2
                },
                "{rows}x{cols}"
            );
            assert!(res.trace.iter().all(|r| r.knowledgeable_count == 1));
        }
    }

    #[test]
    fn too_small() {
        assert!(grid_alternating_adversary(2, 2).is_err());
        assert!(grid_alternating_adversary(3, 1).is_err());
    }
}
