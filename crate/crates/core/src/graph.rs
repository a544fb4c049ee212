//! Undirected networks with positive edge weights and per-node self-weights.
//!
//! Nodes are dense ids `0..n`. Adjacency lists are kept sorted by neighbor id
//! so every weighted sum in the update rules runs in the same order.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Connected-sample budget shared by the random generators.
pub const RETRY_BUDGET: usize = 1000;

const KARATE_EDGES: &str = include_str!("../data/karate.el");

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("K must be even (got {0})")]
    OddMeanDegree(usize),
    #[error("no connected sample after {0} attempts")]
    RetryBudgetExhausted(usize),
    #[error("node {node} out of range for a graph with {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("self-loop on node {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("edge ({0}, {1}) is not present")]
    MissingEdge(usize, usize),
    #[error("edge weight must be positive and finite (got {0})")]
    NonPositiveWeight(f64),
    #[error("self-weight must be non-negative and finite (got {0})")]
    NegativeSelfWeight(f64),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph is empty")]
    Empty,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("io error: {0}")]
    Io(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    adjacency: Vec<Vec<(usize, f64)>>,
    self_weights: Vec<f64>,
    edge_count: usize,
}

/// Result of deleting an edge. The edited graph is returned even when the
/// deletion broke connectivity so callers can decide to skip it.
#[derive(Debug, Clone)]
pub struct EdgeRemoval {
    pub graph: Graph,
    pub connected: bool,
}

impl Graph {
    /// Graph on `n` isolated nodes with unit self-weights.
    pub fn empty(n: usize) -> Self {
        Graph {
            adjacency: vec![Vec::new(); n],
            self_weights: vec![1.0; n],
            edge_count: 0,
        }
    }

    /// Builds a graph from weighted edges, rejecting loops, duplicates and
    /// non-positive weights. Connectivity is not required here.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut g = Graph::empty(n);
        for (i, j, w) in edges {
            g.insert_edge(i, j, w)?;
        }
        Ok(g)
    }

    pub fn from_unweighted_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Graph::from_edges(n, edges.into_iter().map(|(i, j)| (i, j, 1.0)))
    }

    pub fn path(n: usize) -> Self {
        Graph::from_unweighted_edges(n, (1..n).map(|i| (i - 1, i))).expect("valid path")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 nodes");
        Graph::from_unweighted_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("valid cycle")
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
        Graph::from_unweighted_edges(n, edges).expect("valid complete graph")
    }

    /// Star with node 0 at the center and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        Graph::from_unweighted_edges(leaves + 1, (1..=leaves).map(|j| (0, j))).expect("valid star")
    }

    /// Complete bipartite graph; the first `a` ids form one side.
    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let edges = (0..a).flat_map(|i| (a..a + b).map(move |j| (i, j)));
        Graph::from_unweighted_edges(a + b, edges).expect("valid bipartite graph")
    }

    pub fn with_self_weights(mut self, weights: Vec<f64>) -> Result<Self, GraphError> {
        if weights.len() != self.n() {
            return Err(GraphError::InvalidParameter(format!(
                "expected {} self-weights, got {}",
                self.n(),
                weights.len()
            )));
        }
        if let Some(&w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(GraphError::NegativeSelfWeight(w));
        }
        self.self_weights = weights;
        Ok(self)
    }

    pub fn with_uniform_self_weight(self, w: f64) -> Result<Self, GraphError> {
        let n = self.n();
        self.with_self_weights(vec![w; n])
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn m(&self) -> usize {
        self.edge_count
    }

    /// Neighbors of `i` with static weights, ascending by id.
    pub fn neighbors(&self, i: usize) -> &[(usize, f64)] {
        &self.adjacency[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    /// Weighted degree: sum of static edge weights at `i`.
    pub fn weighted_degree(&self, i: usize) -> f64 {
        self.adjacency[i].iter().map(|&(_, w)| w).sum()
    }

    pub fn self_weight(&self, i: usize) -> f64 {
        self.self_weights[i]
    }

    pub fn self_weights(&self) -> &[f64] {
        &self.self_weights
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edge_weight(i, j).is_some()
    }

    pub fn edge_weight(&self, i: usize, j: usize) -> Option<f64> {
        let row = self.adjacency.get(i)?;
        row.binary_search_by_key(&j, |&(k, _)| k)
            .ok()
            .map(|pos| row[pos].1)
    }

    /// Edges as `(u, v, w)` with `u < v`, sorted by `(u, v)`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, row)| {
            row.iter()
                .filter(move |&&(v, _)| v > u)
                .map(move |&(v, w)| (u, v, w))
        })
    }

    /// Unordered node pairs that are not edges, sorted.
    pub fn non_edges(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| !self.has_edge(i, j))
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.n();
        if n == 0 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = queue.pop_front() {
            for &(v, _) in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    reached += 1;
                    queue.push_back(v);
                }
            }
        }
        reached == n
    }

    pub fn ensure_connected(&self) -> Result<(), GraphError> {
        if self.is_connected() {
            Ok(())
        } else {
            Err(GraphError::Disconnected)
        }
    }

    pub fn add_edge(&self, i: usize, j: usize, w: f64) -> Result<Graph, GraphError> {
        let mut g = self.clone();
        g.insert_edge(i, j, w)?;
        Ok(g)
    }

    pub fn remove_edge(&self, i: usize, j: usize) -> Result<EdgeRemoval, GraphError> {
        self.check_node(i)?;
        self.check_node(j)?;
        if !self.has_edge(i, j) {
            return Err(GraphError::MissingEdge(i, j));
        }
        let mut g = self.clone();
        g.adjacency[i].retain(|&(k, _)| k != j);
        g.adjacency[j].retain(|&(k, _)| k != i);
        g.edge_count -= 1;
        let connected = g.is_connected();
        Ok(EdgeRemoval { graph: g, connected })
    }

    /// Relabels nodes: node `i` becomes `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph, GraphError> {
        let n = self.n();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(GraphError::InvalidParameter("relabeling is not a permutation".into()));
        }
        let mut g = Graph::from_edges(n, self.edges().map(|(u, v, w)| (perm[u], perm[v], w)))?;
        for i in 0..n {
            g.self_weights[perm[i]] = self.self_weights[i];
        }
        Ok(g)
    }

    fn check_node(&self, i: usize) -> Result<(), GraphError> {
        if i >= self.n() {
            Err(GraphError::NodeOutOfRange { node: i, n: self.n() })
        } else {
            Ok(())
        }
    }

    fn insert_edge(&mut self, i: usize, j: usize, w: f64) -> Result<(), GraphError> {
        self.check_node(i)?;
        self.check_node(j)?;
        if i == j {
            return Err(GraphError::SelfLoop(i));
        }
        if !(w.is_finite() && w > 0.0) {
            return Err(GraphError::NonPositiveWeight(w));
        }
        let (lo, hi) = (i.min(j), i.max(j));
        let pos_i = match self.adjacency[i].binary_search_by_key(&j, |&(k, _)| k) {
            Ok(_) => return Err(GraphError::DuplicateEdge(lo, hi)),
            Err(pos) => pos,
        };
        self.adjacency[i].insert(pos_i, (j, w));
        let pos_j = self.adjacency[j]
            .binary_search_by_key(&i, |&(k, _)| k)
            .unwrap_err();
        self.adjacency[j].insert(pos_j, (i, w));
        self.edge_count += 1;
        Ok(())
    }
}

/// Erdős–Rényi G(n, rho), resampled until connected.
pub fn generate_er(n: usize, rho: f64, seed: u64) -> Result<Graph, GraphError> {
    if n < 2 {
        return Err(GraphError::InvalidParameter(format!("n must be at least 2 (got {n})")));
    }
    if !(0.0..=1.0).contains(&rho) {
        return Err(GraphError::InvalidParameter(format!("rho must lie in [0, 1] (got {rho})")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RETRY_BUDGET {
        let mut g = Graph::empty(n);
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen::<f64>() < rho {
                    g.insert_edge(i, j, 1.0)?;
                }
            }
        }
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(GraphError::RetryBudgetExhausted(RETRY_BUDGET))
}

/// Watts–Strogatz with every lattice edge rewired, resampled until connected.
pub fn generate_ws(n: usize, k: usize, seed: u64) -> Result<Graph, GraphError> {
    if n < 3 {
        return Err(GraphError::InvalidParameter(format!("n must be at least 3 (got {n})")));
    }
    if k % 2 != 0 {
        return Err(GraphError::OddMeanDegree(k));
    }
    if k < 2 || k >= n {
        return Err(GraphError::InvalidParameter(format!("K must satisfy 2 <= K < n (got {k})")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RETRY_BUDGET {
        let mut g = Graph::empty(n);
        for offset in 1..=k / 2 {
            for i in 0..n {
                g.insert_edge(i, (i + offset) % n, 1.0)?;
            }
        }
        for offset in 1..=k / 2 {
            for i in 0..n {
                let old = (i + offset) % n;
                if !g.has_edge(i, old) {
                    // Already moved by an earlier rewiring of the reverse edge.
                    continue;
                }
                let targets: Vec<usize> = (0..n).filter(|&t| t != i && !g.has_edge(i, t)).collect();
                if targets.is_empty() {
                    continue;
                }
                let target = targets[rng.gen_range(0..targets.len())];
                g.adjacency[i].retain(|&(x, _)| x != old);
                g.adjacency[old].retain(|&(x, _)| x != i);
                g.edge_count -= 1;
                g.insert_edge(i, target, 1.0)?;
            }
        }
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(GraphError::RetryBudgetExhausted(RETRY_BUDGET))
}

/// Barabási–Albert preferential attachment grown from a complete graph on
/// `m0` nodes. Each arrival draws `m` distinct targets without replacement.
pub fn generate_ba(n: usize, m0: usize, m: usize, seed: u64) -> Result<Graph, GraphError> {
    if !(1 <= m && m <= m0 && m0 < n) {
        return Err(GraphError::InvalidParameter(format!(
            "require 1 <= M <= M0 < n (got n={n}, M0={m0}, M={m})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::empty(n);
    for i in 0..m0 {
        for j in i + 1..m0 {
            g.insert_edge(i, j, 1.0)?;
        }
    }
    let mut degrees: Vec<usize> = (0..n).map(|i| g.degree(i)).collect();
    for v in m0..n {
        let mut chosen: Vec<usize> = Vec::with_capacity(m);
        for _ in 0..m {
            let available = |u: &usize| !chosen.contains(u);
            let total: usize = (0..v).filter(available).map(|u| degrees[u]).sum();
            let target = if total == 0 {
                let pool: Vec<usize> = (0..v).filter(available).collect();
                pool[rng.gen_range(0..pool.len())]
            } else {
                let mut r = rng.gen_range(0..total);
                let mut pick = None;
                for u in (0..v).filter(available) {
                    if r < degrees[u] {
                        pick = Some(u);
                        break;
                    }
                    r -= degrees[u];
                }
                pick.expect("draw falls inside the total weight")
            };
            chosen.push(target);
        }
        for &u in &chosen {
            g.insert_edge(v, u, 1.0)?;
            degrees[u] += 1;
            degrees[v] += 1;
        }
    }
    Ok(g)
}

/// Zachary's karate club (34 nodes, 78 edges), unweighted.
pub fn karate() -> Graph {
    parse_edge_list(KARATE_EDGES).expect("bundled karate edge list is valid")
}

pub fn load_edge_list(path: impl AsRef<Path>) -> Result<Graph, GraphError> {
    let text = std::fs::read_to_string(path.as_ref())
        .map_err(|e| GraphError::Io(format!("{}: {e}", path.as_ref().display())))?;
    parse_edge_list(&text)
}

/// Parses `u v [w]` lines; `#` starts a comment line. Node count is the
/// largest id plus one and the result must be connected.
pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut edges: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    let mut max_id: Option<usize> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 && fields.len() != 3 {
            return Err(GraphError::Parse {
                line: line_no,
                msg: format!("expected `u v` or `u v w`, found {} fields", fields.len()),
            });
        }
        let parse_id = |s: &str| {
            s.parse::<usize>().map_err(|_| GraphError::Parse {
                line: line_no,
                msg: format!("invalid node id `{s}`"),
            })
        };
        let u = parse_id(fields[0])?;
        let v = parse_id(fields[1])?;
        let w = match fields.get(2) {
            Some(s) => s.parse::<f64>().map_err(|_| GraphError::Parse {
                line: line_no,
                msg: format!("invalid weight `{s}`"),
            })?,
            None => 1.0,
        };
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if !(w.is_finite() && w > 0.0) {
            return Err(GraphError::NonPositiveWeight(w));
        }
        let key = (u.min(v), u.max(v));
        if edges.insert(key, w).is_some() {
            return Err(GraphError::DuplicateEdge(key.0, key.1));
        }
        max_id = Some(max_id.map_or(key.1, |m: usize| m.max(key.1)));
    }
    let n = max_id.ok_or(GraphError::Empty)? + 1;
    let g = Graph::from_edges(n, edges.into_iter().map(|((u, v), w)| (u, v, w)))?;
    g.ensure_connected()?;
    Ok(g)
}

/// One `u v [w]` line per edge sorted by `(u, v)`; the weight is omitted
/// when it is exactly 1. `header` lines are written as `#` comments first.
pub fn write_edge_list(g: &Graph, header: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(h) = header {
        for line in h.lines() {
            let _ = writeln!(out, "# {line}");
        }
    }
    for (u, v, w) in g.edges() {
        if w == 1.0 {
            let _ = writeln!(out, "{u} {v}");
        } else {
            let _ = writeln!(out, "{u} {v} {w}");
        }
    }
    out
}

pub fn save_edge_list(g: &Graph, header: Option<&str>, path: impl AsRef<Path>) -> Result<(), GraphError> {
    std::fs::write(path.as_ref(), write_edge_list(g, header))
        .map_err(|e| GraphError::Io(format!("{}: {e}", path.as_ref().display())))
}
