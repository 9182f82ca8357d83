use serde::{Deserialize, Serialize};

use super::{bridges, Edge, Graph, Vertex};
use crate::error::{Error, Result};

/// Records a bridge contraction: which source vertex became which contracted
/// vertex, and which source edges were contracted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractionMap {
    /// `vertex_map[old] = new`.
    pub vertex_map: Vec<Vertex>,
    pub contracted: Vec<Edge>,
}

impl ContractionMap {
    pub fn source_vertex_count(&self) -> usize {
        self.vertex_map.len()
    }

    pub fn target_vertex_count(&self) -> usize {
        self.vertex_map.iter().map(|&v| v + 1).max().unwrap_or(0)
    }

    pub fn project(&self, v: Vertex) -> Vertex {
        self.vertex_map[v]
    }

    /// Source vertices that collapse onto `new`.
    pub fn members(&self, new: Vertex) -> Vec<Vertex> {
        (0..self.vertex_map.len())
            .filter(|&v| self.vertex_map[v] == new)
            .collect()
    }

    pub fn is_contracted(&self, u: Vertex, v: Vertex) -> bool {
        self.contracted.binary_search(&(u.min(v), u.max(v))).is_ok()
    }

    /// The unique source edge joining the classes of `a` and `b`, oriented
    /// from class `a` to class `b`.
    pub fn source_edge(&self, source: &Graph, a: Vertex, b: Vertex) -> Option<Edge> {
        source
            .edges()
            .iter()
            .filter(|&&(u, v)| !self.is_contracted(u, v))
            .find_map(|&(u, v)| {
                let (pu, pv) = (self.vertex_map[u], self.vertex_map[v]);
                if (pu, pv) == (a, b) {
                    Some((u, v))
                } else if (pu, pv) == (b, a) {
                    Some((v, u))
                } else {
                    None
                }
            })
    }

    /// Checks that this map describes `target` as a bridge contraction of
    /// `source`.
    pub fn validate(&self, source: &Graph, target: &Graph) -> Result<()> {
        let inconsistent = |m: &str| Err(Error::Precondition(format!("contraction map: {m}")));
        if self.vertex_map.len() != source.vertex_count()
            || self.target_vertex_count() != target.vertex_count()
        {
            return inconsistent("vertex counts differ");
        }
        let br = bridges(source)?;
        for &(u, v) in &self.contracted {
            if br.binary_search(&(u, v)).is_err() {
                return Err(Error::NotABridge(u, v));
            }
            if self.vertex_map[u] != self.vertex_map[v] {
                return inconsistent("contracted edge endpoints map apart");
            }
        }
        for &(u, v) in source.edges() {
            if !self.is_contracted(u, v) && !target.has_edge(self.vertex_map[u], self.vertex_map[v])
            {
                return inconsistent("source edge has no image");
            }
        }
        if target.edge_count() + self.contracted.len() != source.edge_count() {
            return inconsistent("edge counts differ");
        }
        Ok(())
    }
}

/// Contracts the listed bridges. Contracted vertices are numbered in order
/// of their smallest source vertex.
pub fn contract_bridges(g: &Graph, subset: &[Edge]) -> Result<(Graph, ContractionMap)> {
    let br = bridges(g)?;
    let mut contracted: Vec<Edge> = subset.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    contracted.sort_unstable();
    contracted.dedup();
    for &(u, v) in &contracted {
        if !g.has_edge(u, v) {
            return Err(Error::MissingEdge(u, v));
        }
        if br.binary_search(&(u, v)).is_err() {
            return Err(Error::NotABridge(u, v));
        }
    }
    // union-find over contracted edges
    let n = g.vertex_count();
    let mut parent: Vec<Vertex> = (0..n).collect();
    fn find(parent: &mut [Vertex], v: Vertex) -> Vertex {
        let mut r = v;
        while parent[r] != r {
            r = parent[r];
        }
        let mut c = v;
        while parent[c] != r {
            let next = parent[c];
            parent[c] = r;
            c = next;
        }
        r
    }
    for &(u, v) in &contracted {
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        parent[ru.max(rv)] = ru.min(rv);
    }
    let mut new_id = vec![usize::MAX; n];
    let mut vertex_map = vec![0; n];
    let mut next = 0;
    for (v, slot) in vertex_map.iter_mut().enumerate() {
        let r = find(&mut parent, v);
        if new_id[r] == usize::MAX {
            new_id[r] = next;
            next += 1;
        }
        *slot = new_id[r];
    }
    let edges = g
        .edges()
        .iter()
        .filter(|e| contracted.binary_search(e).is_err())
        .map(|&(u, v)| (vertex_map[u], vertex_map[v]));
    let h = Graph::new(next, edges)?;
    let map = ContractionMap {
        vertex_map,
        contracted,
    };
    Ok((h, map))
}

/// Glues `h` onto `g` by identifying `u ∈ h` with `v ∈ g`.
///
/// Vertices of `g` keep their ids; the other vertices of `h` follow in
/// increasing order starting at `g.vertex_count()`.
pub fn vertex_sum(g: &Graph, v: Vertex, h: &Graph, u: Vertex) -> Result<Graph> {
    g.check_vertex(v)?;
    h.check_vertex(u)?;
    let base = g.vertex_count();
    let map = |w: Vertex| -> Vertex {
        match w.cmp(&u) {
            std::cmp::Ordering::Equal => v,
            std::cmp::Ordering::Less => base + w,
            std::cmp::Ordering::Greater => base + w - 1,
        }
    };
    let edges = g
        .edges()
        .iter()
        .copied()
        .chain(h.edges().iter().map(|&(a, b)| (map(a), map(b))));
    Graph::new(base + h.vertex_count() - 1, edges)
}

/// Hangs a pendant path with `lengths[v]` new edges on each vertex `v`.
/// Missing entries count as zero.
pub fn attach_paths(g: &Graph, lengths: &[usize]) -> Graph {
    let mut edges: Vec<Edge> = g.edges().to_vec();
    let mut next = g.vertex_count();
    for v in 0..g.vertex_count() {
        let mut prev = v;
        for _ in 0..lengths.get(v).copied().unwrap_or(0) {
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
    }
    Graph::new(next, edges).expect("fresh vertices keep the graph simple")
}
