//! Undirected graphs, their Laplacian and incidence matrices, and G(n, p)
//! sampling with connectivity enforcement.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::spectra::{sym_eigen, RANK_TOL};

/// Number of independent substreams tried before giving up on a connected
/// sample.
pub const MAX_SAMPLING_ATTEMPTS: usize = 1000;

/// Simple undirected graph on nodes `0..node_count`. Every edge is stored
/// once as `(i, j)` with `i < j`, in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    node_count: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Normalizes each edge to `i < j` and sorts the list. Self-loops,
    /// out-of-range endpoints and duplicate edges are rejected.
    pub fn new(node_count: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if node_count == 0 {
            return Err(Error::InvalidInput("graph needs at least one node".into()));
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a >= node_count || b >= node_count {
                return Err(Error::InvalidInput(format!(
                    "edge ({a}, {b}) out of range for {node_count} nodes"
                )));
            }
            if a == b {
                return Err(Error::InvalidInput(format!("self-loop at node {a}")));
            }
            if !set.insert((a.min(b), a.max(b))) {
                return Err(Error::InvalidInput(format!("duplicate edge ({a}, {b})")));
            }
        }
        Ok(Self {
            node_count,
            edges: set.into_iter().collect(),
        })
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
        Self::new(n, edges).expect("complete graph is valid")
    }

    pub fn path(n: usize) -> Self {
        Self::new(n, (1..n).map(|i| (i - 1, i))).expect("path graph is valid")
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidInput("a cycle needs at least 3 nodes".into()));
        }
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// `L = D − Adj`.
    pub fn laplacian(&self) -> DMatrix<f64> {
        let mut l = DMatrix::zeros(self.node_count, self.node_count);
        for &(i, j) in &self.edges {
            l[(i, i)] += 1.0;
            l[(j, j)] += 1.0;
            l[(i, j)] -= 1.0;
            l[(j, i)] -= 1.0;
        }
        l
    }

    /// Signed `N × M` incidence matrix: the column of edge `(i, j)` has `+1`
    /// at row `i` and `−1` at row `j`.
    pub fn incidence(&self) -> DMatrix<f64> {
        let mut b = DMatrix::zeros(self.node_count, self.edges.len());
        for (k, &(i, j)) in self.edges.iter().enumerate() {
            b[(i, k)] = 1.0;
            b[(j, k)] = -1.0;
        }
        b
    }

    /// Breadth-first reachability from node 0.
    pub fn is_connected(&self) -> bool {
        let mut adj = vec![Vec::new(); self.node_count];
        for &(i, j) in &self.edges {
            adj[i].push(j);
            adj[j].push(i);
        }
        let mut seen = vec![false; self.node_count];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    reached += 1;
                    queue.push_back(v);
                }
            }
        }
        reached == self.node_count
    }

    /// Smallest and largest nonzero Laplacian eigenvalues `(λ₂, λ_N)`.
    pub fn spectral_gap(&self) -> Result<(f64, f64)> {
        if self.node_count < 2 {
            return Err(Error::InvalidInput("spectral gap needs at least two nodes".into()));
        }
        let eig = sym_eigen(&self.laplacian())?;
        let lambda_n = eig.values[self.node_count - 1];
        let lambda_2 = eig.values[1];
        if lambda_2 <= RANK_TOL * lambda_n.max(1.0) {
            return Err(Error::Disconnected);
        }
        Ok((lambda_2, lambda_n))
    }

    /// Parses `"N M"` followed by `M` lines `"i j"` (0-based). Blank lines and
    /// lines starting with `#` are skipped.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "missing header".into(),
        })?;
        let [n, m] = parse_pair(hline, header)?;
        let mut edges = Vec::with_capacity(m);
        for (line, text) in lines.by_ref().take(m) {
            let [i, j] = parse_pair(line, text)?;
            edges.push((i, j));
        }
        if edges.len() != m {
            return Err(Error::Parse {
                line: hline,
                message: format!("header announces {m} edges, found {}", edges.len()),
            });
        }
        if let Some((line, _)) = lines.next() {
            return Err(Error::Parse {
                line,
                message: "trailing content after the last edge".into(),
            });
        }
        Self::new(n, edges)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.node_count, self.edges.len());
        for &(i, j) in &self.edges {
            let _ = writeln!(out, "{i} {j}");
        }
        out
    }
}

fn parse_pair(line: usize, text: &str) -> Result<[usize; 2]> {
    let fields: Vec<&str> = text.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(Error::Parse {
            line,
            message: format!("expected two integers, got {text:?}"),
        });
    }
    let parse = |s: &str| {
        s.parse::<usize>().map_err(|e| Error::Parse {
            line,
            message: format!("{s:?}: {e}"),
        })
    };
    Ok([parse(fields[0])?, parse(fields[1])?])
}

/// One G(n, p) draw from substream `stream` of `seed`.
fn sample_gnp(n: usize, p: f64, seed: u64, stream: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < p {
                edges.push((i, j));
            }
        }
    }
    Graph::new(n, edges).expect("sampled edges are valid")
}

/// Connected Erdős–Rényi graph: each pair is included independently with
/// probability `p`; disconnected samples are rejected and redrawn from the
/// next substream. Deterministic in `(n, p, seed)`.
pub fn erdos_renyi_connected(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("need at least 2 nodes, got {n}")));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidInput(format!("edge probability must lie in (0, 1], got {p}")));
    }
    (0..MAX_SAMPLING_ATTEMPTS as u64)
        .map(|stream| sample_gnp(n, p, seed, stream))
        .find(Graph::is_connected)
        .ok_or(Error::GraphSampling {
            nodes: n,
            p,
            attempts: MAX_SAMPLING_ATTEMPTS,
        })
}
