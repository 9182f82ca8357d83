//! Time metrics: y-set-diameter, separation lower bounds and closed-form
//! times on paths and trees. Half-integer quantities are rounded up.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::GameState;
use crate::graph::{Graph, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundKind {
    LowerBound,
    Exact,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimeBound {
    pub kind: BoundKind,
    pub rounds: usize,
    /// Short tag naming the argument behind the bound.
    pub justification: String,
}

fn distances(g: &Graph) -> Result<Vec<Vec<usize>>> {
    g.require_connected()?;
    g.all_pairs_distances()
}

/// For vertex `v`, the best y-set is its `y` farthest other vertices; the
/// value is the smallest distance among them.
fn best_set_for(dist: &[usize], v: Vertex, y: usize) -> (usize, Vec<Vertex>) {
    let mut others: Vec<Vertex> = (0..dist.len()).filter(|&u| u != v).collect();
    others.sort_by_key(|&u| (std::cmp::Reverse(dist[u]), u));
    others.truncate(y);
    let value = others.iter().map(|&u| dist[u]).min().unwrap_or(0);
    others.sort_unstable();
    (value, others)
}

fn check_y(g: &Graph, y: usize) -> Result<()> {
    if y == 0 || y >= g.vertex_count() {
        return Err(Error::Precondition(format!(
            "y = {y} must satisfy 1 <= y < {}",
            g.vertex_count()
        )));
    }
    Ok(())
}

/// Largest distance from a vertex to the nearest member of a `y`-set not
/// containing it.
pub fn y_set_diameter(g: &Graph, y: usize) -> Result<usize> {
    check_y(g, y)?;
    let dist = distances(g)?;
    Ok((0..g.vertex_count())
        .map(|v| best_set_for(&dist[v], v, y).0)
        .max()
        .unwrap_or(0))
}

/// Largest distance from an ignorant agent to its nearest knowledgeable one.
pub fn initial_separation(g: &Graph, s: &GameState) -> Result<usize> {
    if s.knowledgeable().is_empty() || s.ignorant().is_empty() {
        return Err(Error::Precondition(
            "separation needs both kinds of agent".into(),
        ));
    }
    s.check_vertices(g)?;
    let dist = distances(g)?;
    Ok(s.ignorant()
        .iter()
        .map(|&i| {
            s.knowledgeable()
                .iter()
                .map(|&k| dist[i][k])
                .min()
                .expect("nonempty")
        })
        .max()
        .expect("nonempty"))
}

/// Each round shrinks the separation by at most two.
pub fn time_lower_bound(g: &Graph, s: &GameState) -> Result<TimeBound> {
    Ok(TimeBound {
        kind: BoundKind::LowerBound,
        rounds: initial_separation(g, s)?.div_ceil(2),
        justification: "separation-halving".into(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathTimes {
    pub first_spread: usize,
    pub all_knowledgeable: usize,
}

/// Closed-form times on `P_n` with `x` ignorant and `y` knowledgeable agents
/// on distinct vertices.
pub fn path_time_bounds(n: usize, x: usize, y: usize) -> Result<PathTimes> {
    if x == 0 || y == 0 || x + y > n {
        return Err(Error::Precondition(format!(
            "infeasible path parameters n={n}, x={x}, y={y}"
        )));
    }
    Ok(PathTimes {
        first_spread: (n - x - y).div_ceil(2),
        all_knowledgeable: (n - y).div_ceil(2),
    })
}

/// Half the diameter, rounded up: the optimal time for two agents on a tree.
pub fn tree_two_agent_bound(t: &Graph) -> Result<usize> {
    if !t.is_tree() {
        return Err(Error::Precondition("graph is not a tree".into()));
    }
    Ok(t.diameter()?.div_ceil(2))
}

/// Knowledgeable agents on a y-set achieving the y-set-diameter, one
/// ignorant agent on the far vertex, the rest on the smallest free vertices.
pub fn placement_for_bound(g: &Graph, x: usize, y: usize) -> Result<GameState> {
    if x == 0 || x + y > g.vertex_count() {
        return Err(Error::Precondition(format!(
            "cannot place {x} ignorant and {y} knowledgeable agents on {} vertices",
            g.vertex_count()
        )));
    }
    check_y(g, y)?;
    let dist = distances(g)?;
    let (v, set) = (0..g.vertex_count())
        .map(|v| (v, best_set_for(&dist[v], v, y)))
        .max_by_key(|(v, (d, _))| (*d, std::cmp::Reverse(*v)))
        .map(|(v, (_, set))| (v, set))
        .expect("nonempty graph");
    let mut ignorant = vec![v];
    ignorant.extend(
        (0..g.vertex_count())
            .filter(|u| *u != v && !set.contains(u))
            .take(x - 1),
    );
    Ok(GameState::new(set, ignorant))
}
