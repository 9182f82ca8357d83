use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use super::{parse_edge_list, Graph};
use crate::error::{Error, Result};

/// A named graph family with its parameters.
///
/// The textual form is `family:params`, e.g. `cycle:5`, `grid:3x4`,
/// `theta:3,3,3`, `bintree:3` or `file:g.edges`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilySpec {
    Path(usize),
    Cycle(usize),
    Clique(usize),
    Grid { rows: usize, cols: usize },
    Theta(Vec<usize>),
    BinaryTree(usize),
    File(PathBuf),
}

impl FamilySpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidFamily(msg));
        match self {
            FamilySpec::Path(n) | FamilySpec::Clique(n) if *n == 0 => {
                bad(format!("{self}: size must be >= 1"))
            }
            FamilySpec::Cycle(n) if *n < 3 => bad(format!("{self}: a cycle needs >= 3 vertices")),
            FamilySpec::Grid { rows, cols } if *rows == 0 || *cols == 0 => {
                bad(format!("{self}: grid dimensions must be >= 1"))
            }
            FamilySpec::BinaryTree(0) => bad(format!("{self}: depth must be >= 1")),
            FamilySpec::Theta(lengths) => {
                if lengths.is_empty() {
                    return bad("theta needs at least one path".into());
                }
                if lengths.contains(&0) {
                    return bad(format!("{self}: path lengths must be >= 1"));
                }
                if lengths.iter().filter(|&&d| d == 1).count() > 1 {
                    return bad(format!("{self}: two unit paths would be parallel edges"));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Path(n) => write!(f, "path:{n}"),
            FamilySpec::Cycle(n) => write!(f, "cycle:{n}"),
            FamilySpec::Clique(n) => write!(f, "clique:{n}"),
            FamilySpec::Grid { rows, cols } => write!(f, "grid:{rows}x{cols}"),
            FamilySpec::Theta(d) => {
                let parts: Vec<String> = d.iter().map(|x| x.to_string()).collect();
                write!(f, "theta:{}", parts.join(","))
            }
            FamilySpec::BinaryTree(d) => write!(f, "bintree:{d}"),
            FamilySpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidFamily(s.to_string());
        let (family, params) = s.split_once(':').ok_or_else(bad)?;
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
        let spec = match family.trim().to_ascii_lowercase().as_str() {
            "path" => FamilySpec::Path(num(params)?),
            "cycle" => FamilySpec::Cycle(num(params)?),
            "clique" | "complete" => FamilySpec::Clique(num(params)?),
            "grid" => {
                let (r, c) = params.split_once(['x', 'X']).ok_or_else(bad)?;
                FamilySpec::Grid {
                    rows: num(r)?,
                    cols: num(c)?,
                }
            }
            "theta" => FamilySpec::Theta(params.split(',').map(num).collect::<Result<_>>()?),
            "bintree" => FamilySpec::BinaryTree(num(params)?),
            "file" if !params.is_empty() => FamilySpec::File(PathBuf::from(params)),
            _ => return Err(bad()),
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Builds the named family.
///
/// Theta graphs put the hubs at vertices 0 and 1 and number internal vertices
/// path by path. Grid vertex `(row, col)` gets id `row * cols + col`. Binary
/// trees use heap order (children of `i` are `2i+1` and `2i+2`).
pub fn generate(spec: &FamilySpec) -> Result<Graph> {
    spec.validate()?;
    match spec {
        FamilySpec::Path(n) => Graph::new(*n, (1..*n).map(|i| (i - 1, i))),
        FamilySpec::Cycle(n) => Graph::new(*n, (0..*n).map(|i| (i, (i + 1) % n))),
        FamilySpec::Clique(n) => {
            Graph::new(*n, (0..*n).flat_map(|u| (u + 1..*n).map(move |v| (u, v))))
        }
        FamilySpec::Grid { rows, cols } => {
            let (r, c) = (*rows, *cols);
            let mut edges = Vec::new();
            for row in 0..r {
                for col in 0..c {
                    let id = row * c + col;
                    if col + 1 < c {
                        edges.push((id, id + 1));
                    }
                    if row + 1 < r {
                        edges.push((id, id + c));
                    }
                }
            }
            Graph::new(r * c, edges)
        }
        FamilySpec::Theta(lengths) => {
            let mut edges = Vec::new();
            let mut next = 2;
            for &d in lengths {
                let mut prev = 0;
                for _ in 1..d {
                    edges.push((prev, next));
                    prev = next;
                    next += 1;
                }
                edges.push((prev, 1));
            }
            Graph::new(next, edges)
        }
        FamilySpec::BinaryTree(depth) => {
            let n = (1usize << (depth + 1)) - 1;
            Graph::new(n, (1..n).map(|i| ((i - 1) / 2, i)))
        }
        FamilySpec::File(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
                path: path.display().to_string(),
                message: e.to_string(),
            })?;
            parse_edge_list(&text)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(spec: FamilySpec) -> (usize, usize) {
        let g = generate(&spec).unwrap();
        (g.vertex_count(), g.edge_count())
    }

    #[test]
    fn small_examples() {
        assert_eq!(counts(FamilySpec::Cycle(5)), (5, 5));
        assert_eq!(counts(FamilySpec::Theta(vec![3, 3])), (6, 6));
        assert_eq!(counts(FamilySpec::Grid { rows: 2, cols: 3 }), (6, 7));
    }

    #[test]
    fn theta_33_is_a_six_cycle() {
        let g = generate(&FamilySpec::Theta(vec![3, 3])).unwrap();
        assert!(g.is_cycle());
        assert_eq!(g.degree(0), 2);
        assert_eq!(g.degree(1), 2);
    }

    #[test]
    fn theta_unit_paths() {
        let g = generate(&FamilySpec::Theta(vec![1, 2])).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (3, 3));
        assert!(g.has_edge(0, 1));
        assert!(generate(&FamilySpec::Theta(vec![1, 1, 3])).is_err());
        assert!(generate(&FamilySpec::Theta(vec![0, 3])).is_err());
    }

    #[test]
    fn counting_identities_up_to_eight() {
        for n in 1..=8 {
            assert_eq!(counts(FamilySpec::Path(n)), (n, n - 1));
            assert_eq!(counts(FamilySpec::Clique(n)), (n, n * (n - 1) / 2));
            if n >= 3 {
                assert_eq!(counts(FamilySpec::Cycle(n)), (n, n));
            }
            let bt = generate(&FamilySpec::BinaryTree(n.min(6))).unwrap();
            assert!(bt.is_tree());
            assert_eq!(bt.vertex_count(), (1 << (n.min(6) + 1)) - 1);
            for c in 1..=8 {
                assert_eq!(
                    counts(FamilySpec::Grid { rows: n, cols: c }),
                    (n * c, (n - 1) * c + n * (c - 1))
                );
            }
            for l in 1..=4 {
                let lengths = vec![n.max(2); l];
                let sum: usize = lengths.iter().sum();
                assert_eq!(
                    counts(FamilySpec::Theta(lengths.clone())),
                    (2 + sum - l, sum),
                    "theta {lengths:?}"
                );
            }
        }
    }

    #[test]
    fn grammar_round_trip() {
        for s in [
            "path:4",
            "cycle:5",
            "clique:6",
            "grid:3x4",
            "theta:3,3,3",
            "bintree:3",
        ] {
            let spec: FamilySpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert!("cycle:2".parse::<FamilySpec>().is_err());
        assert!("blob:3".parse::<FamilySpec>().is_err());
        assert!("grid:3".parse::<FamilySpec>().is_err());
        assert_eq!(
            "complete:4".parse::<FamilySpec>().unwrap(),
            FamilySpec::Clique(4)
        );
    }
}
