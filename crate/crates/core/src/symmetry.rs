//! One-step functions and the k-spanning-tree-symmetry search.
//!
//! A graph has k-spanning-tree symmetry when every k-set of positions `S`
//! has a spanning tree `T_S` such that every one-step function on `S` (each
//! vertex stays or crosses one tree edge) extends to an injective vertex map
//! sending the edges of `T_S` onto edges of the graph. Because such a map is
//! injective, the search rejects any tree in which two positions lie within
//! distance 2 of each other.

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{spanning_trees_capped, Edge, Graph, Vertex};

/// Vertex cap for [`has_k_sts`].
pub const STS_MAX_VERTICES: usize = 10;

/// Default cap on spanning trees examined per graph.
pub const STS_MAX_TREES: usize = 50_000;

/// `domain[i]` goes to `image[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OneStepFunction {
    pub domain: Vec<Vertex>,
    pub image: Vec<Vertex>,
}

impl OneStepFunction {
    pub fn apply(&self, v: Vertex) -> Option<Vertex> {
        self.domain
            .iter()
            .position(|&d| d == v)
            .map(|i| self.image[i])
    }

    pub fn is_injective(&self) -> bool {
        self.image.iter().all_unique()
    }
}

/// Every map sending each vertex of `set` to itself or an `h`-neighbour.
/// Images are enumerated with "stay" first, then neighbours in order.
pub fn one_step_functions(set: &[Vertex], h: &Graph) -> Vec<OneStepFunction> {
    set.iter()
        .map(|&v| {
            std::iter::once(v)
                .chain(h.neighbors(v).iter().copied())
                .collect::<Vec<_>>()
        })
        .multi_cartesian_product()
        .map(|image| OneStepFunction {
            domain: set.to_vec(),
            image,
        })
        .collect()
}

/// Searches for an injective `phi: V -> V` with `phi|S = t` that maps every
/// edge of `tree` to an edge of `g`. The image of the tree is then a
/// spanning tree of `g` isomorphic to `tree`.
pub fn extends_to_tree_isomorphism(
    tree: &Graph,
    t: &OneStepFunction,
    g: &Graph,
) -> Option<Vec<Vertex>> {
    let n = g.vertex_count();
    if tree.vertex_count() != n || t.domain.len() != t.image.len() || !t.is_injective() {
        return None;
    }
    let mut phi = vec![usize::MAX; n];
    let mut used = vec![false; n];
    for (&d, &i) in t.domain.iter().zip(&t.image) {
        if phi[d] != usize::MAX || i >= n {
            return None;
        }
        phi[d] = i;
        used[i] = true;
    }
    for &(a, b) in tree.edges() {
        if phi[a] != usize::MAX && phi[b] != usize::MAX && !g.has_edge(phi[a], phi[b]) {
            return None;
        }
    }
    // BFS order over the tree from the fixed vertices
    let mut roots: Vec<Vertex> = t.domain.clone();
    let free_root = roots.is_empty() && n > 0;
    if free_root {
        roots.push(0);
    }
    let mut parent = vec![usize::MAX; n];
    let mut order = Vec::new();
    let mut seen = vec![false; n];
    let mut queue: std::collections::VecDeque<Vertex> = roots.iter().copied().collect();
    for &r in &roots {
        seen[r] = true;
    }
    while let Some(u) = queue.pop_front() {
        for &w in tree.neighbors(u) {
            if !seen[w] {
                seen[w] = true;
                parent[w] = u;
                order.push(w);
                queue.push_back(w);
            }
        }
    }
    if seen.iter().any(|&s| !s) {
        return None;
    }

    fn place(
        tree: &Graph,
        g: &Graph,
        order: &[Vertex],
        parent: &[Vertex],
        phi: &mut [Vertex],
        used: &mut [bool],
    ) -> bool {
        let Some((&v, rest)) = order.split_first() else {
            return true;
        };
        let p = parent[v];
        let candidates: Vec<Vertex> = g.neighbors(phi[p]).to_vec();
        for c in candidates {
            if used[c] || g.degree(c) < tree.degree(v) {
                continue;
            }
            let fits = tree
                .neighbors(v)
                .iter()
                .all(|&w| w == p || phi[w] == usize::MAX || g.has_edge(c, phi[w]));
            if !fits {
                continue;
            }
            phi[v] = c;
            used[c] = true;
            if place(tree, g, rest, parent, phi, used) {
                return true;
            }
            phi[v] = usize::MAX;
            used[c] = false;
        }
        false
    }

    if free_root {
        for c in 0..n {
            phi[0] = c;
            used[c] = true;
            if place(tree, g, &order, &parent, &mut phi, &mut used) {
                return Some(phi);
            }
            used[c] = false;
        }
        return None;
    }
    place(tree, g, &order, &parent, &mut phi, &mut used).then_some(phi)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StsMap {
    /// Image of the position set under the one-step function.
    pub image: Vec<Vertex>,
    /// Full vertex map extending it.
    pub phi: Vec<Vertex>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StsEntry {
    pub set: Vec<Vertex>,
    pub tree: Vec<Edge>,
    /// One map per one-step function, in [`one_step_functions`] order.
    pub maps: Vec<StsMap>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StsWitness {
    pub vertex_count: usize,
    pub k: usize,
    /// One entry per k-set, in lexicographic order.
    pub entries: Vec<StsEntry>,
}

impl StsWitness {
    pub fn entry(&self, set: &[Vertex]) -> Option<&StsEntry> {
        self.entries
            .binary_search_by(|e| e.set.as_slice().cmp(set))
            .ok()
            .map(|i| &self.entries[i])
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("witness serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Precondition(format!("bad witness: {e}")))
    }
}

/// Pairwise tree distances between positions are all at least 3.
fn positions_spread(tree: &Graph, set: &[Vertex]) -> bool {
    set.iter().enumerate().all(|(i, &a)| {
        let d = tree.bfs_distances(a);
        set[i + 1..].iter().all(|&b| d[b].is_some_and(|x| x >= 3))
    })
}

fn entry_for(g: &Graph, trees: &[Graph], set: &[Vertex]) -> Option<StsEntry> {
    trees.iter().find_map(|tree| {
        if !positions_spread(tree, set) {
            return None;
        }
        let maps = one_step_functions(set, tree)
            .into_iter()
            .map(|t| {
                extends_to_tree_isomorphism(tree, &t, g).map(|phi| StsMap {
                    image: t.image,
                    phi,
                })
            })
            .collect::<Option<Vec<_>>>()?;
        Some(StsEntry {
            set: set.to_vec(),
            tree: tree.edges().to_vec(),
            maps,
        })
    })
}

pub fn has_k_sts(g: &Graph, k: usize) -> Result<Option<StsWitness>> {
    has_k_sts_capped(g, k, STS_MAX_TREES)
}

/// Complete witness if every k-set has a suitable tree, else `None`.
/// Trees are tried in enumeration order; the first that works is kept.
pub fn has_k_sts_capped(g: &Graph, k: usize, max_trees: usize) -> Result<Option<StsWitness>> {
    let n = g.vertex_count();
    if n > STS_MAX_VERTICES {
        return Err(Error::TooLarge {
            what: "vertex count for symmetry search",
            limit: STS_MAX_VERTICES,
        });
    }
    if k == 0 || k > n {
        return Err(Error::AgentCount {
            agents: k,
            vertex_count: n,
        });
    }
    let trees: Vec<Graph> = spanning_trees_capped(g, max_trees)?
        .into_iter()
        .map(|m| g.edge_subgraph(m))
        .collect();
    let sets: Vec<Vec<Vertex>> = (0..n).combinations(k).collect();
    let entries: Vec<Option<StsEntry>> = sets.par_iter().map(|s| entry_for(g, &trees, s)).collect();
    Ok(entries
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .map(|entries| StsWitness {
            vertex_count: n,
            k,
            entries,
        }))
}

/// Independently re-checks every invariant of a witness against `g`.
pub fn validate_witness(g: &Graph, w: &StsWitness) -> Result<()> {
    let bad = |m: String| Err(Error::Precondition(format!("invalid witness: {m}")));
    let n = g.vertex_count();
    if w.vertex_count != n {
        return bad("vertex count".into());
    }
    let sets: Vec<Vec<Vertex>> = (0..n).combinations(w.k).collect();
    if sets.len() != w.entries.len() {
        return bad("entry count".into());
    }
    for (set, e) in sets.iter().zip(&w.entries) {
        if &e.set != set {
            return bad(format!("entry for {set:?} missing"));
        }
        if let Some(&(a, b)) = e.tree.iter().find(|&&(a, b)| !g.has_edge(a, b)) {
            return bad(format!("tree edge ({a}, {b}) not in graph"));
        }
        let tree = Graph::new(n, e.tree.iter().copied())?;
        if !tree.is_tree() {
            return bad(format!("tree for {set:?} is not spanning"));
        }
        let fns = one_step_functions(set, &tree);
        if fns.len() != e.maps.len() {
            return bad(format!("map count for {set:?}"));
        }
        for (t, m) in fns.iter().zip(&e.maps) {
            if t.image != m.image || m.phi.len() != n {
                return bad(format!("map for {set:?} -> {:?}", t.image));
            }
            if !m.phi.iter().all(|&x| x < n) || !m.phi.iter().all_unique() {
                return bad(format!("map for {set:?} -> {:?} not injective", t.image));
            }
            if set.iter().zip(&t.image).any(|(&s, &i)| m.phi[s] != i) {
                return bad(format!("map for {set:?} does not extend {:?}", t.image));
            }
            if tree
                .edges()
                .iter()
                .any(|&(a, b)| !g.has_edge(m.phi[a], m.phi[b]))
            {
                return bad(format!("map for {set:?} -> {:?} breaks an edge", t.image));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate;

    fn fam(s: &str) -> Graph {
        generate(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn one_step_examples() {
        let edge = fam("path:2");
        let fns = one_step_functions(&[0], &edge);
        assert_eq!(
            fns.iter().map(|f| f.image.clone()).collect::<Vec<_>>(),
            vec![vec![0], vec![1]]
        );
        assert_eq!(one_step_functions(&[], &edge).len(), 1);
        let g = fam("theta:2,3,3");
        let set = [0, 3, 5];
        let expected: usize = set.iter().map(|&v| g.degree(v) + 1).product();
        assert_eq!(one_step_functions(&set, &g).len(), expected);
    }

    #[test]
    fn clique_path_shift() {
        let k5 = fam("clique:5");
        let path = fam("path:5");
        let t = OneStepFunction {
            domain: vec![0, 3],
            image: vec![1, 4],
        };
        let phi = extends_to_tree_isomorphism(&path, &t, &k5).unwrap();
        assert_eq!((phi[0], phi[3]), (1, 4));
        assert!(phi.iter().all_unique());
        let id = OneStepFunction {
            domain: vec![0, 3],
            image: vec![0, 3],
        };
        assert!(extends_to_tree_isomorphism(&path, &id, &k5).is_some());
        let merge = OneStepFunction {
            domain: vec![0, 2],
            image: vec![1, 1],
        };
        assert_eq!(extends_to_tree_isomorphism(&path, &merge, &k5), None);
    }

    #[test]
    fn identity_extends_on_any_tree() {
        let g = fam("grid:2x3");
        let tree = g.edge_subgraph(crate::graph::spanning_trees(&g).unwrap()[0]);
        let t = OneStepFunction {
            domain: vec![0, 5],
            image: vec![0, 5],
        };
        assert!(extends_to_tree_isomorphism(&tree, &t, &g).is_some());
    }

    #[test]
    fn extension_fails_without_room() {
        // on a path, shifting one end outward has nowhere to go
        let p4 = fam("path:4");
        let t = OneStepFunction {
            domain: vec![0],
            image: vec![1],
        };
        assert_eq!(extends_to_tree_isomorphism(&p4, &t, &p4), None);
    }

    #[test]
    fn clique_witness() {
        let k5 = fam("clique:5");
        let w = has_k_sts(&k5, 2).unwrap().expect("K5 has 2-STS");
        assert_eq!(w.entries.len(), 10);
        validate_witness(&k5, &w).unwrap();
        let back = StsWitness::from_json(&w.to_json()).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn paths_have_no_symmetry() {
        for n in 2..=6 {
            assert_eq!(
                has_k_sts(&fam(&format!("path:{n}")), 2).unwrap(),
                None,
                "P{n}"
            );
        }
    }

    #[test]
    fn tampered_witness_rejected() {
        let k5 = fam("clique:5");
        let mut w = has_k_sts(&k5, 2).unwrap().unwrap();
        w.entries[0].maps[1].phi.swap(0, 1);
        assert!(validate_witness(&k5, &w).is_err());
    }
}
