use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::Rng;

use crate::{Error, Result};

/// Unweighted simple graph on `n` vertices; every edge is a unit-strength CZ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl ClusterGraph {
    /// Edges are unordered; duplicates are merged.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("n", "a graph needs at least one vertex"));
        }
        let mut set = BTreeSet::new();
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::ModeOutOfRange { index: a.max(b), n_modes: n });
            }
            if a == b {
                return Err(Error::invalid("edges", format!("self-loop on vertex {a}")));
            }
            set.insert((a.min(b), a.max(b)));
        }
        Ok(Self { n, edges: set.into_iter().collect() })
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self { n: n.max(1), edges }
    }

    /// Vertex 0 joined to every other vertex.
    pub fn star(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (0, i)).collect();
        Self { n: n.max(1), edges }
    }

    /// Erdős–Rényi graph with edge probability `p`.
    pub fn random<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<Self> {
        let mut edges = Vec::new();
        for a in 0..n {
            for b in (a + 1)..n {
                if rng.random::<f64>() < p {
                    edges.push((a, b));
                }
            }
        }
        Self::new(n, &edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter_map(move |&(a, b)| {
            if a == v {
                Some(b)
            } else if b == v {
                Some(a)
            } else {
                None
            }
        })
    }
}

/// Reads `n=<count>` followed by one `i j` edge per line. Lines starting with
/// `#` are comments.
pub fn parse_graph(text: &str) -> Result<ClusterGraph> {
    let mut n = None;
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| Error::Parse { line: i + 1, message };
        match n {
            None => {
                let count = line
                    .strip_prefix("n=")
                    .and_then(|v| v.trim().parse::<usize>().ok())
                    .ok_or_else(|| err(format!("expected `n=<count>`, found `{line}`")))?;
                n = Some(count);
            }
            Some(_) => {
                let parts: Vec<&str> = line.split_whitespace().collect();
                let [a, b] = parts[..] else {
                    return Err(err(format!("expected `i j`, found `{line}`")));
                };
                let a = a.parse().map_err(|_| err(format!("bad vertex `{a}`")))?;
                let b = b.parse().map_err(|_| err(format!("bad vertex `{b}`")))?;
                edges.push((a, b));
            }
        }
    }
    let n = n.ok_or(Error::Parse { line: 0, message: "missing `n=<count>` header".into() })?;
    ClusterGraph::new(n, &edges)
}

pub fn write_graph(graph: &ClusterGraph) -> String {
    let mut out = format!("n={}\n", graph.n);
    for (a, b) in &graph.edges {
        let _ = writeln!(out, "{a} {b}");
    }
    out
}
