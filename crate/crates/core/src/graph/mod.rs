//! Graphs, Euclidean embeddings, and the weight model `w(u,v) = ‖f(u) − f(v)‖^q`.

mod generators;
pub mod io;

pub use generators::{gen_family, gen_star_union, Family};

use serde::{Deserialize, Serialize};
use std::collections::HashSet;

use crate::{Error, Result};

/// Simple undirected graph with edges stored as sorted pairs `(u, v)`, `u < v`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    max_degree: usize,
}

impl Graph {
    /// Builds a canonical graph, rejecting self-loops, duplicates and
    /// out-of-range endpoints.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut canon = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::VertexOutOfRange { u, v, n });
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            let pair = (u.min(v), u.max(v));
            if !seen.insert(pair) {
                return Err(Error::DuplicateEdge(u, v));
            }
            canon.push(pair);
        }
        canon.sort_unstable();
        let mut degree = vec![0usize; n];
        for &(u, v) in &canon {
            degree[u] += 1;
            degree[v] += 1;
        }
        let max_degree = degree.iter().copied().max().unwrap_or(0);
        Ok(Graph {
            n,
            edges: canon,
            max_degree,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Maximum degree Δ.
    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut degree = vec![0usize; self.n];
        for &(u, v) in &self.edges {
            degree[u] += 1;
            degree[v] += 1;
        }
        degree
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }

    /// Connected component label per vertex, labels numbered by first vertex.
    pub fn components(&self) -> Vec<usize> {
        let adj = self.adjacency();
        let mut label = vec![usize::MAX; self.n];
        let mut next = 0;
        for start in 0..self.n {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = next;
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                for &v in &adj[u] {
                    if label[v] == usize::MAX {
                        label[v] = next;
                        stack.push(v);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().iter().all(|&c| c == 0)
    }

    /// Two-colouring test by BFS.
    pub fn is_bipartite(&self) -> bool {
        let adj = self.adjacency();
        let mut colour = vec![u8::MAX; self.n];
        for start in 0..self.n {
            if colour[start] != u8::MAX {
                continue;
            }
            colour[start] = 0;
            let mut queue = std::collections::VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &v in &adj[u] {
                    if colour[v] == u8::MAX {
                        colour[v] = 1 - colour[u];
                        queue.push_back(v);
                    } else if colour[v] == colour[u] {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Alias matching the operation name used throughout the docs.
pub fn build_graph(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Graph> {
    Graph::new(n, edges)
}

/// One point per vertex, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Embedding {
    n: usize,
    dim: usize,
    points: Vec<f64>,
}

impl Embedding {
    pub fn new(n: usize, dim: usize, points: Vec<f64>) -> Result<Self> {
        if points.len() != n * dim {
            return Err(Error::DimensionMismatch {
                expected: n * dim,
                actual: points.len(),
            });
        }
        if points.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter(
                "embedding coordinates must be finite".into(),
            ));
        }
        Ok(Embedding { n, dim, points })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.first().map_or(0, Vec::len);
        let mut points = Vec::with_capacity(rows.len() * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: row.len(),
                });
            }
            points.extend_from_slice(row);
        }
        Embedding::new(rows.len(), dim, points)
    }

    /// Standard-basis embedding `f(v) = e_v` in `R^n`.
    pub fn standard_basis(n: usize) -> Self {
        let mut points = vec![0.0; n * n];
        for v in 0..n {
            points[v * n + v] = 1.0;
        }
        Embedding { n, dim: n, points }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, v: usize) -> &[f64] {
        &self.points[v * self.dim..(v + 1) * self.dim]
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn scaled(&self, c: f64) -> Self {
        Embedding {
            n: self.n,
            dim: self.dim,
            points: self.points.iter().map(|x| x * c).collect(),
        }
    }

    /// Appends `extra` zero coordinates to every point.
    pub fn zero_padded(&self, extra: usize) -> Self {
        let dim = self.dim + extra;
        let mut points = vec![0.0; self.n * dim];
        for v in 0..self.n {
            points[v * dim..v * dim + self.dim].copy_from_slice(self.point(v));
        }
        Embedding {
            n: self.n,
            dim,
            points,
        }
    }

    pub fn sq_dist(&self, u: usize, v: usize) -> f64 {
        self.point(u)
            .iter()
            .zip(self.point(v))
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }

    /// `‖f(u) − f(v)‖^q`.
    pub fn pair_weight(&self, u: usize, v: usize, q: f64) -> f64 {
        let sq = self.sq_dist(u, v);
        if q == 2.0 {
            sq
        } else {
            sq.sqrt().powf(q)
        }
    }

    pub fn centroid(&self) -> Vec<f64> {
        let mut c = vec![0.0; self.dim];
        for v in 0..self.n {
            for (ci, x) in c.iter_mut().zip(self.point(v)) {
                *ci += x;
            }
        }
        if self.n > 0 {
            c.iter_mut().for_each(|x| *x /= self.n as f64);
        }
        c
    }

    /// Σ_u ‖f(u)‖².
    pub fn sum_sq_norms(&self) -> f64 {
        self.points.iter().map(|x| x * x).sum()
    }
}

/// Subtracts the centroid so that Σ_v f(v) = 0.
pub fn center_embedding(f: &Embedding) -> Embedding {
    let c = f.centroid();
    let mut points = f.points.clone();
    for row in points.chunks_mut(f.dim.max(1)) {
        for (x, m) in row.iter_mut().zip(&c) {
            *x -= m;
        }
    }
    Embedding {
        n: f.n,
        dim: f.dim,
        points,
    }
}

fn check_q(q: f64) -> Result<()> {
    if !(q >= 1.0 && q.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "exponent q must be finite and >= 1, got {q}"
        )));
    }
    Ok(())
}

/// Σ over ordered pairs (u, v) of ‖f(u) − f(v)‖^q; each unordered pair counts twice.
pub fn total_pair_weight(f: &Embedding, q: f64) -> Result<f64> {
    check_q(q)?;
    Ok(2.0 * unordered_pair_weight(f, q))
}

/// Σ over unordered pairs {u, v} of ‖f(u) − f(v)‖^q (the `w̃(V choose 2)` total).
pub fn unordered_pair_weight(f: &Embedding, q: f64) -> f64 {
    let mut total = 0.0;
    for u in 0..f.n {
        for v in u + 1..f.n {
            total += f.pair_weight(u, v, q);
        }
    }
    total
}

/// Graph together with one nonnegative weight per edge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedGraph {
    graph: Graph,
    weights: Vec<f64>,
    q: f64,
}

impl WeightedGraph {
    /// Accepts raw weights aligned with `graph.edges()`.
    pub fn new(graph: Graph, weights: Vec<f64>, q: f64) -> Result<Self> {
        if weights.len() != graph.num_edges() {
            return Err(Error::DimensionMismatch {
                expected: graph.num_edges(),
                actual: weights.len(),
            });
        }
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::InvalidParameter(
                "edge weights must be finite and nonnegative".into(),
            ));
        }
        Ok(WeightedGraph { graph, weights, q })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn total_edge_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        WeightedGraph::new(
            self.graph.clone(),
            self.weights.iter().map(|w| w * c).collect(),
            self.q,
        )
    }
}

/// `w(u,v) = ‖f(u) − f(v)‖^q` restricted to the edges of `g`.
pub fn weights_from_embedding(g: &Graph, f: &Embedding, q: f64) -> Result<WeightedGraph> {
    check_q(q)?;
    if f.n() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            actual: f.n(),
        });
    }
    let weights = g
        .edges()
        .iter()
        .map(|&(u, v)| f.pair_weight(u, v, q))
        .collect();
    Ok(WeightedGraph {
        graph: g.clone(),
        weights,
        q,
    })
}

/// Edge values `h(e)` of a fractional matching and its weight Σ h(e) w(e).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FractionalMatching {
    pub values: Vec<f64>,
    pub total_weight: f64,
}

impl FractionalMatching {
    /// Largest violation of `0 ≤ h ≤ 1` and of the vertex capacities.
    pub fn max_violation(&self, g: &Graph) -> f64 {
        let mut load = vec![0.0; g.n()];
        let mut worst: f64 = 0.0;
        for (&(u, v), &h) in g.edges().iter().zip(&self.values) {
            worst = worst.max(-h).max(h - 1.0);
            load[u] += h;
            load[v] += h;
        }
        load.iter().fold(worst, |acc, l| acc.max(l - 1.0))
    }
}

/// Vertex values `g(u)` of a fractional vertex cover and their total.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexCover {
    pub values: Vec<f64>,
    pub total: f64,
}

impl VertexCover {
    /// Largest violation of `g ≥ 0` and of `g(u) + g(v) ≥ w(u,v)`.
    pub fn max_violation(&self, w: &WeightedGraph) -> f64 {
        let mut worst = self.values.iter().fold(0.0f64, |acc, g| acc.max(-g));
        for (&(u, v), &wt) in w.graph().edges().iter().zip(w.weights()) {
            worst = worst.max(wt - self.values[u] - self.values[v]);
        }
        worst
    }
}
