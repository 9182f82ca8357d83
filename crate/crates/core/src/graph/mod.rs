//! Undirected simple graphs, the named graph families, and the structural
//! queries and constructions used by the game solver.

mod canon;
mod construct;
mod enumerate;
mod family;
mod structure;

use std::collections::VecDeque;
use std::fmt;

pub use canon::{
    all_graphs, canonical_form, connected_graphs, is_isomorphic, trees, CanonicalForm,
    CANON_MAX_VERTICES,
};
pub use construct::{attach_paths, contract_bridges, vertex_sum, ContractionMap};
pub use enumerate::{
    connected_spanning_subgraphs, spanning_trees, spanning_trees_capped, CSS_MAX_EDGES,
};
pub use family::{generate, FamilySpec};
pub use structure::{
    bridges, circumference, clique_number, cut_vertices, is_hamiltonian, BRUTE_FORCE_MAX_VERTICES,
};

use crate::error::{Error, Result};

pub type Vertex = usize;
pub type Edge = (Vertex, Vertex);

/// Maximum number of edges addressable by an [`EdgeSet`].
pub const MAX_MASK_EDGES: usize = 64;

/// A subset of a base graph's edges, addressed by edge index.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeSet(pub u64);

impl EdgeSet {
    pub const EMPTY: EdgeSet = EdgeSet(0);

    pub fn full(edge_count: usize) -> Self {
        if edge_count >= 64 {
            EdgeSet(u64::MAX)
        } else {
            EdgeSet((1u64 << edge_count) - 1)
        }
    }

    #[inline]
    pub fn contains(self, index: usize) -> bool {
        self.0 >> index & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, index: usize) {
        self.0 |= 1 << index;
    }

    #[inline]
    pub fn remove(&mut self, index: usize) {
        self.0 &= !(1 << index);
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn is_subset(self, other: EdgeSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }
}

/// An undirected simple graph on vertices `0..vertex_count`.
///
/// Edges are stored as sorted pairs `(u, v)` with `u < v`, in lexicographic
/// order; the position of an edge in that order is its edge index.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<Vertex>>,
    labels: Option<Vec<String>>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges)
    }
}

impl Graph {
    /// Builds a graph, merging duplicate edges. Self-loops and out-of-range
    /// endpoints are rejected.
    pub fn new(vertex_count: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let mut list = Vec::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            for w in [u, v] {
                if w >= vertex_count {
                    return Err(Error::VertexOutOfRange {
                        vertex: w,
                        vertex_count,
                    });
                }
            }
            list.push((u.min(v), u.max(v)));
        }
        list.sort_unstable();
        list.dedup();
        let mut adj = vec![Vec::new(); vertex_count];
        for &(u, v) in &list {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        Ok(Graph {
            n: vertex_count,
            edges: list,
            adj,
            labels: None,
        })
    }

    pub fn empty(vertex_count: usize) -> Self {
        Graph {
            n: vertex_count,
            edges: Vec::new(),
            adj: vec![Vec::new(); vertex_count],
            labels: None,
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.n, "one label per vertex");
        self.labels = Some(labels);
        self
    }

    pub fn label(&self, v: Vertex) -> String {
        match &self.labels {
            Some(l) => l[v].clone(),
            None => v.to_string(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n && v < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    /// Index of edge `{u, v}` in the sorted edge list.
    pub fn edge_index(&self, u: Vertex, v: Vertex) -> Option<usize> {
        self.edges.binary_search(&(u.min(v), u.max(v))).ok()
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                vertex_count: self.n,
            })
        }
    }

    /// Mask of all edges, failing if the graph has too many edges to address.
    pub fn full_mask(&self) -> Result<EdgeSet> {
        self.check_maskable()?;
        Ok(EdgeSet::full(self.edges.len()))
    }

    pub fn check_maskable(&self) -> Result<()> {
        if self.edges.len() > MAX_MASK_EDGES {
            return Err(Error::TooLarge {
                what: "edge count",
                limit: MAX_MASK_EDGES,
            });
        }
        Ok(())
    }

    /// Converts an explicit edge list into a mask over this graph's edges.
    pub fn mask_of(&self, edges: &[Edge]) -> Result<EdgeSet> {
        self.check_maskable()?;
        let mut m = EdgeSet::EMPTY;
        for &(u, v) in edges {
            let i = self.edge_index(u, v).ok_or(Error::MissingEdge(u, v))?;
            m.insert(i);
        }
        Ok(m)
    }

    pub fn mask_edges(&self, mask: EdgeSet) -> Vec<Edge> {
        mask.iter().map(|i| self.edges[i]).collect()
    }

    /// The spanning subgraph with the edges selected by `mask`.
    pub fn edge_subgraph(&self, mask: EdgeSet) -> Graph {
        let mut g = Graph::new(self.n, self.mask_edges(mask)).expect("subset of valid edges");
        g.labels = self.labels.clone();
        g
    }

    /// Induced subgraph on `vertices` (in the given order). Returns the
    /// subgraph together with the local-to-global vertex map.
    pub fn induced(&self, vertices: &[Vertex]) -> (Graph, Vec<Vertex>) {
        let mut local = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| local[u] != usize::MAX && local[v] != usize::MAX)
            .map(|&(u, v)| (local[u], local[v]));
        let g = Graph::new(vertices.len(), edges).expect("induced edges are valid");
        (g, vertices.to_vec())
    }

    /// Applies a vertex permutation: old vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[Vertex]) -> Graph {
        assert_eq!(perm.len(), self.n);
        Graph::new(self.n, self.edges.iter().map(|&(u, v)| (perm[u], perm[v])))
            .expect("permutation keeps edges valid")
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// True iff the graph has at most one connected component.
    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    pub fn require_connected(&self) -> Result<()> {
        if self.is_connected() {
            Ok(())
        } else {
            Err(Error::Disconnected)
        }
    }

    pub fn is_tree(&self) -> bool {
        self.n >= 1 && self.edges.len() + 1 == self.n && self.is_connected()
    }

    /// True iff this graph is a single cycle through every vertex.
    pub fn is_cycle(&self) -> bool {
        self.n >= 3 && self.adj.iter().all(|a| a.len() == 2) && self.is_connected()
    }

    /// Hop distances from `src`; `None` for unreachable vertices.
    pub fn bfs_distances(&self, src: Vertex) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        dist[src] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap();
            for &w in &self.adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// A shortest path from `from` to `to` (inclusive), lowest-id neighbours
    /// preferred.
    pub fn shortest_path(&self, from: Vertex, to: Vertex) -> Option<Vec<Vertex>> {
        let mut parent = vec![usize::MAX; self.n];
        parent[to] = to;
        let mut queue = VecDeque::from([to]);
        while let Some(u) = queue.pop_front() {
            if u == from {
                break;
            }
            for &w in &self.adj[u] {
                if parent[w] == usize::MAX {
                    parent[w] = u;
                    queue.push_back(w);
                }
            }
        }
        if parent[from] == usize::MAX {
            return None;
        }
        let mut path = vec![from];
        let mut cur = from;
        while cur != to {
            cur = parent[cur];
            path.push(cur);
        }
        Some(path)
    }

    /// Shortest-path hop counts between all vertex pairs.
    pub fn all_pairs_distances(&self) -> Result<Vec<Vec<usize>>> {
        self.require_connected()?;
        Ok((0..self.n)
            .map(|s| {
                self.bfs_distances(s)
                    .into_iter()
                    .map(|d| d.expect("connected"))
                    .collect()
            })
            .collect())
    }

    pub fn diameter(&self) -> Result<usize> {
        Ok(self
            .all_pairs_distances()?
            .iter()
            .flat_map(|row| row.iter().copied())
            .max()
            .unwrap_or(0))
    }

    /// Vertices in cyclic order, starting at the smallest vertex and
    /// continuing to its smaller neighbour. `None` unless the graph is a cycle.
    pub fn cycle_order(&self) -> Option<Vec<Vertex>> {
        if !self.is_cycle() {
            return None;
        }
        let mut order = vec![0, self.adj[0][0]];
        while order.len() < self.n {
            let last = order[order.len() - 1];
            let prev = order[order.len() - 2];
            let next = if self.adj[last][0] == prev {
                self.adj[last][1]
            } else {
                self.adj[last][0]
            };
            order.push(next);
        }
        Some(order)
    }

    /// Serializes to the edge-list text format.
    pub fn to_edge_list(&self) -> String {
        let mut s = format!("# vertices: {}\n", self.n);
        for (u, v) in &self.edges {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }
}

/// Parses the edge-list format: one `u v` pair per line, `#` starts a
/// comment. A `# vertices: N` comment, when present, fixes the vertex count
/// so trailing isolated vertices survive a round trip.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut edges = Vec::new();
    let mut declared = None;
    for (lineno, raw) in text.lines().enumerate() {
        let (body, comment) = match raw.find('#') {
            Some(i) => (&raw[..i], Some(&raw[i + 1..])),
            None => (raw, None),
        };
        if let Some(n) = comment
            .and_then(|c| c.trim().strip_prefix("vertices:"))
            .and_then(|rest| rest.trim().parse::<usize>().ok())
        {
            declared = Some(n);
        }
        let body = body.trim();
        if body.is_empty() {
            continue;
        }
        let malformed = || Error::MalformedEdge {
            line: lineno + 1,
            text: raw.to_string(),
        };
        let mut parts = body.split_whitespace();
        let (Some(a), Some(b), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(malformed());
        };
        let u: Vertex = a.parse().map_err(|_| malformed())?;
        let v: Vertex = b.parse().map_err(|_| malformed())?;
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        edges.push((u, v));
    }
    let implied = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
    Graph::new(declared.unwrap_or(0).max(implied), edges)
}
