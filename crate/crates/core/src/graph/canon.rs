use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};

use super::{Graph, Vertex};

/// Largest graph handled by [`canonical_form`] (the adjacency code is a u64).
pub const CANON_MAX_VERTICES: usize = 11;

/// An isomorphism-invariant code for a small graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub vertex_count: usize,
    pub code: u64,
}

fn pair_bit(n: usize, i: usize, j: usize) -> u64 {
    let (i, j) = (i.min(j), i.max(j));
    // row-major index of (i, j) in the upper triangle
    let p = i * (2 * n - i - 1) / 2 + (j - i - 1);
    1u64 << (63 - p)
}

/// Vertex classes from colour refinement, in an isomorphism-invariant order.
fn refined_cells(g: &Graph) -> Vec<Vec<Vertex>> {
    let n = g.vertex_count();
    let mut color: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    loop {
        let sigs: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut s: Vec<usize> = g.neighbors(v).iter().map(|&w| color[w]).collect();
                s.sort_unstable();
                (color[v], s)
            })
            .collect();
        let mut distinct: Vec<&(usize, Vec<usize>)> = sigs.iter().collect();
        distinct.sort();
        distinct.dedup();
        let next: Vec<usize> = sigs
            .iter()
            .map(|s| distinct.binary_search(&s).unwrap())
            .collect();
        let before = color
            .iter()
            .collect::<std::collections::BTreeSet<_>>()
            .len();
        color = next;
        if distinct.len() == before {
            break;
        }
    }
    let mut cells: BTreeMap<usize, Vec<Vertex>> = BTreeMap::new();
    for (v, &c) in color.iter().enumerate() {
        cells.entry(c).or_default().push(v);
    }
    cells.into_values().collect()
}

/// Canonical code: the maximum adjacency code over all labelings that
/// respect the refined vertex classes.
pub fn canonical_form(g: &Graph) -> CanonicalForm {
    let n = g.vertex_count();
    assert!(
        n <= CANON_MAX_VERTICES,
        "canonical form limited to {CANON_MAX_VERTICES} vertices"
    );
    let cells = refined_cells(g);
    let mut order: Vec<Vertex> = Vec::with_capacity(n);
    let mut best = 0u64;
    let mut any = false;
    fn place(
        g: &Graph,
        cells: &[Vec<Vertex>],
        cell: usize,
        used: &mut Vec<bool>,
        order: &mut Vec<Vertex>,
        best: &mut u64,
        any: &mut bool,
    ) {
        let n = g.vertex_count();
        if order.len() == n {
            let mut pos = vec![0; n];
            for (p, &v) in order.iter().enumerate() {
                pos[v] = p;
            }
            let code = g
                .edges()
                .iter()
                .fold(0u64, |acc, &(u, v)| acc | pair_bit(n, pos[u], pos[v]));
            if !*any || code > *best {
                *best = code;
                *any = true;
            }
            return;
        }
        let members = &cells[cell];
        let placed_in_cell = order.len() - cells[..cell].iter().map(Vec::len).sum::<usize>();
        if placed_in_cell == members.len() {
            place(g, cells, cell + 1, used, order, best, any);
            return;
        }
        for &v in members {
            if !used[v] {
                used[v] = true;
                order.push(v);
                place(g, cells, cell, used, order, best, any);
                order.pop();
                used[v] = false;
            }
        }
    }
    let mut used = vec![false; n];
    place(g, &cells, 0, &mut used, &mut order, &mut best, &mut any);
    CanonicalForm {
        vertex_count: n,
        code: best,
    }
}

pub fn is_isomorphic(a: &Graph, b: &Graph) -> bool {
    a.vertex_count() == b.vertex_count()
        && a.edge_count() == b.edge_count()
        && canonical_form(a) == canonical_form(b)
}

fn dedup_classes(candidates: impl IntoIterator<Item = Graph>) -> Vec<Graph> {
    let mut seen: HashMap<CanonicalForm, Graph> = HashMap::new();
    for g in candidates {
        seen.entry(canonical_form(&g)).or_insert(g);
    }
    let mut out: Vec<(CanonicalForm, Graph)> = seen.into_iter().collect();
    out.sort_by_key(|(c, g)| (g.edge_count(), std::cmp::Reverse(c.code)));
    out.into_iter().map(|(_, g)| g).collect()
}

fn cached(
    cache: &'static OnceLock<Mutex<HashMap<usize, Vec<Graph>>>>,
    n: usize,
    build: impl FnOnce() -> Vec<Graph>,
) -> Vec<Graph> {
    let map = cache.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = map.lock().unwrap().get(&n) {
        return v.clone();
    }
    let built = build();
    map.lock().unwrap().insert(n, built.clone());
    built
}

/// One representative of every isomorphism class of graphs on `n` vertices.
pub fn all_graphs(n: usize) -> Vec<Graph> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Vec<Graph>>>> = OnceLock::new();
    cached(&CACHE, n, || {
        if n == 0 {
            return vec![Graph::empty(0)];
        }
        let smaller = all_graphs(n - 1);
        let candidates = smaller.iter().flat_map(|g| {
            (0u32..1 << (n - 1)).map(move |nbrs| {
                let extra = (0..n - 1)
                    .filter(move |&v| nbrs >> v & 1 == 1)
                    .map(move |v| (v, n - 1));
                Graph::new(n, g.edges().iter().copied().chain(extra)).unwrap()
            })
        });
        dedup_classes(candidates)
    })
}

/// One representative of every isomorphism class of connected graphs on `n`
/// vertices.
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    all_graphs(n)
        .into_iter()
        .filter(Graph::is_connected)
        .collect()
}

/// One representative of every isomorphism class of trees on `n` vertices.
pub fn trees(n: usize) -> Vec<Graph> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Vec<Graph>>>> = OnceLock::new();
    cached(&CACHE, n, || match n {
        0 => Vec::new(),
        1 => vec![Graph::empty(1)],
        _ => {
            let smaller = trees(n - 1);
            dedup_classes(smaller.iter().flat_map(|t| {
                (0..n - 1).map(move |v| {
                    Graph::new(n, t.edges().iter().copied().chain([(v, n - 1)])).unwrap()
                })
            }))
        }
    })
}
