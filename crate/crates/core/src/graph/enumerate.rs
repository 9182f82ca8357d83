use super::{EdgeSet, Graph};
use crate::error::{Error, Result};

/// Edge cap for exhaustive connected-spanning-subgraph enumeration.
pub const CSS_MAX_EDGES: usize = 20;

/// Every spanning tree of `g`, each exactly once, as edge masks in
/// include-first edge order.
pub fn spanning_trees(g: &Graph) -> Result<Vec<EdgeSet>> {
    spanning_trees_capped(g, usize::MAX)
}

/// As [`spanning_trees`], failing once more than `cap` trees are found.
pub fn spanning_trees_capped(g: &Graph, cap: usize) -> Result<Vec<EdgeSet>> {
    g.require_connected()?;
    g.check_maskable()?;
    let n = g.vertex_count();
    let mut out = Vec::new();
    if n <= 1 {
        out.push(EdgeSet::EMPTY);
        return Ok(out);
    }
    let mut search = TreeSearch {
        g,
        cap,
        out: &mut out,
    };
    let comp: Vec<usize> = (0..n).collect();
    search.branch(0, EdgeSet::EMPTY, comp, n - 1)?;
    Ok(out)
}

struct TreeSearch<'a> {
    g: &'a Graph,
    cap: usize,
    out: &'a mut Vec<EdgeSet>,
}

impl TreeSearch<'_> {
    // `comp[v]` labels the component of v under the chosen edges.
    fn branch(
        &mut self,
        i: usize,
        chosen: EdgeSet,
        comp: Vec<usize>,
        missing: usize,
    ) -> Result<()> {
        if missing == 0 {
            if self.out.len() >= self.cap {
                return Err(Error::BudgetExceeded {
                    what: "spanning trees",
                    limit: self.cap,
                });
            }
            self.out.push(chosen);
            return Ok(());
        }
        let edges = self.g.edges();
        if i == edges.len() {
            return Ok(());
        }
        let (u, v) = edges[i];
        let (cu, cv) = (comp[u], comp[v]);
        if cu != cv {
            let mut merged = comp.clone();
            let (keep, drop) = (cu.min(cv), cu.max(cv));
            for c in merged.iter_mut() {
                if *c == drop {
                    *c = keep;
                }
            }
            let mut with = chosen;
            with.insert(i);
            self.branch(i + 1, with, merged, missing - 1)?;
        }
        if self.completable(i + 1, &comp) {
            self.branch(i + 1, chosen, comp, missing)?;
        }
        Ok(())
    }

    // Can edges from index `from` onward still join every component?
    fn completable(&self, from: usize, comp: &[usize]) -> bool {
        let n = comp.len();
        let mut label: Vec<usize> = comp.to_vec();
        for &(u, v) in &self.g.edges()[from..] {
            let (a, b) = (label[u], label[v]);
            if a != b {
                let (keep, drop) = (a.min(b), a.max(b));
                for l in label.iter_mut() {
                    if *l == drop {
                        *l = keep;
                    }
                }
            }
        }
        (0..n).all(|v| label[v] == label[0])
    }
}

/// Every edge subset of `g` that is connected and spans all vertices.
pub fn connected_spanning_subgraphs(g: &Graph) -> Result<Vec<EdgeSet>> {
    g.require_connected()?;
    let m = g.edge_count();
    if m > CSS_MAX_EDGES {
        return Err(Error::TooLarge {
            what: "edge count for subgraph enumeration",
            limit: CSS_MAX_EDGES,
        });
    }
    let n = g.vertex_count();
    let mut out = Vec::new();
    for bits in 0u64..(1u64 << m) {
        let mask = EdgeSet(bits);
        if mask.len() + 1 < n {
            continue;
        }
        if g.edge_subgraph(mask).is_connected() {
            out.push(mask);
        }
    }
    Ok(out)
}
