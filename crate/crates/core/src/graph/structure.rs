use super::{Edge, Graph, Vertex};
use crate::error::{Error, Result};

/// Size cap for the exponential brute-force queries.
pub const BRUTE_FORCE_MAX_VERTICES: usize = 12;

fn check_small(g: &Graph) -> Result<()> {
    if g.vertex_count() > BRUTE_FORCE_MAX_VERTICES {
        return Err(Error::TooLarge {
            what: "vertex count for brute-force query",
            limit: BRUTE_FORCE_MAX_VERTICES,
        });
    }
    Ok(())
}

struct LowLink {
    disc: Vec<usize>,
    low: Vec<usize>,
    timer: usize,
    cut: Vec<bool>,
    bridges: Vec<Edge>,
}

impl LowLink {
    fn run(g: &Graph) -> Self {
        let n = g.vertex_count();
        let mut ll = LowLink {
            disc: vec![usize::MAX; n],
            low: vec![0; n],
            timer: 0,
            cut: vec![false; n],
            bridges: Vec::new(),
        };
        for s in 0..n {
            if ll.disc[s] == usize::MAX {
                ll.dfs(g, s, usize::MAX);
            }
        }
        ll.bridges.sort_unstable();
        ll
    }

    fn dfs(&mut self, g: &Graph, u: Vertex, parent: Vertex) {
        self.disc[u] = self.timer;
        self.low[u] = self.timer;
        self.timer += 1;
        let mut children = 0;
        for &w in g.neighbors(u) {
            if w == parent {
                continue;
            }
            if self.disc[w] == usize::MAX {
                children += 1;
                self.dfs(g, w, u);
                self.low[u] = self.low[u].min(self.low[w]);
                if parent != usize::MAX && self.low[w] >= self.disc[u] {
                    self.cut[u] = true;
                }
                if self.low[w] > self.disc[u] {
                    self.bridges.push((u.min(w), u.max(w)));
                }
            } else {
                self.low[u] = self.low[u].min(self.disc[w]);
            }
        }
        if parent == usize::MAX && children > 1 {
            self.cut[u] = true;
        }
    }
}

/// Articulation vertices of a connected graph, sorted.
pub fn cut_vertices(g: &Graph) -> Result<Vec<Vertex>> {
    g.require_connected()?;
    let ll = LowLink::run(g);
    Ok((0..g.vertex_count()).filter(|&v| ll.cut[v]).collect())
}

/// Bridges (cut edges) of a connected graph, sorted.
pub fn bridges(g: &Graph) -> Result<Vec<Edge>> {
    g.require_connected()?;
    Ok(LowLink::run(g).bridges)
}

/// Size of a maximum clique.
pub fn clique_number(g: &Graph) -> Result<usize> {
    check_small(g)?;
    fn grow(g: &Graph, clique: &mut Vec<Vertex>, candidates: &[Vertex], best: &mut usize) {
        *best = (*best).max(clique.len());
        if clique.len() + candidates.len() <= *best {
            return;
        }
        for (i, &v) in candidates.iter().enumerate() {
            let rest: Vec<Vertex> = candidates[i + 1..]
                .iter()
                .copied()
                .filter(|&w| g.has_edge(v, w))
                .collect();
            clique.push(v);
            grow(g, clique, &rest, best);
            clique.pop();
        }
    }
    let mut best = 0;
    let all: Vec<Vertex> = (0..g.vertex_count()).collect();
    grow(g, &mut Vec::new(), &all, &mut best);
    Ok(best)
}

/// Length of a longest simple cycle, 0 for forests.
pub fn circumference(g: &Graph) -> Result<usize> {
    check_small(g)?;
    let n = g.vertex_count();
    let mut best = 0;
    let mut on_path = vec![false; n];
    // Each cycle is found from its smallest vertex.
    fn extend(
        g: &Graph,
        start: Vertex,
        u: Vertex,
        len: usize,
        on_path: &mut [bool],
        best: &mut usize,
    ) {
        if *best == g.vertex_count() {
            return;
        }
        for &w in g.neighbors(u) {
            if w == start && len >= 3 {
                *best = (*best).max(len);
            } else if w > start && !on_path[w] {
                on_path[w] = true;
                extend(g, start, w, len + 1, on_path, best);
                on_path[w] = false;
            }
        }
    }
    for s in 0..n {
        on_path[s] = true;
        extend(g, s, s, 1, &mut on_path, &mut best);
        on_path[s] = false;
    }
    Ok(best)
}

/// Hamiltonicity by subset dynamic programming over paths from vertex 0.
pub fn is_hamiltonian(g: &Graph) -> Result<bool> {
    check_small(g)?;
    let n = g.vertex_count();
    if n < 3 {
        return Ok(false);
    }
    // reach[mask] = set of end vertices of paths from 0 covering `mask`.
    let full = (1usize << n) - 1;
    let mut reach = vec![0u32; 1 << n];
    reach[1] = 1;
    for mask in 1..=full {
        if mask & 1 == 0 || reach[mask] == 0 {
            continue;
        }
        let ends = reach[mask];
        for v in 0..n {
            if ends >> v & 1 == 0 {
                continue;
            }
            for &w in g.neighbors(v) {
                if mask >> w & 1 == 0 {
                    reach[mask | 1 << w] |= 1 << w;
                }
            }
        }
    }
    Ok(g.neighbors(0).iter().any(|&w| reach[full] >> w & 1 == 1))
}
