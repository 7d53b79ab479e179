//! Exact maximum-weight matching by branch and bound.
//!
//! Edges are branched in order of decreasing weight. Each node is bounded by
//! the fractional matching LP on the residual graph; when that LP optimum is
//! already integral it is the best completion of the node and the subtree is
//! closed. Connected components are solved independently.

use serde::{Deserialize, Serialize};

use super::lp::solve_matching_primal;
use crate::graph::{Graph, WeightedGraph};
use crate::{Error, Result};

/// Components with more edges than this are only accepted when they have
/// maximum degree ≤ 3 or are bipartite (integral LP at every node).
pub const MAX_GENERAL_COMPONENT_EDGES: usize = 40;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matching {
    /// Indices into `graph.edges()`, ascending.
    pub edges: Vec<usize>,
    pub value: f64,
}

struct Component {
    edges: Vec<usize>,
}

fn components(g: &Graph) -> Vec<Component> {
    let label = g.components();
    let count = label.iter().copied().max().map_or(0, |m| m + 1);
    let mut comps: Vec<Component> = (0..count).map(|_| Component { edges: Vec::new() }).collect();
    for (e, &(u, _)) in g.edges().iter().enumerate() {
        comps[label[u]].edges.push(e);
    }
    comps.retain(|c| !c.edges.is_empty());
    comps
}

fn check_cap(g: &Graph, comp: &Component) -> Result<()> {
    if comp.edges.len() <= MAX_GENERAL_COMPONENT_EDGES {
        return Ok(());
    }
    let sub = Graph::new(g.n(), comp.edges.iter().map(|&e| g.edges()[e]))?;
    if sub.max_degree() <= 3 || sub.is_bipartite() {
        return Ok(());
    }
    Err(Error::SizeLimit(format!(
        "exact matching: component with {} edges and maximum degree {} is neither bipartite nor subcubic (cap {MAX_GENERAL_COMPONENT_EDGES} edges)",
        comp.edges.len(),
        sub.max_degree()
    )))
}

struct Search<'a> {
    n: usize,
    endpoints: Vec<(usize, usize)>,
    weights: Vec<f64>,
    // Local edge order → global edge index.
    global: &'a [usize],
    used: Vec<bool>,
    chosen: Vec<usize>,
    current: f64,
    best: f64,
    best_set: Vec<usize>,
}

impl Search<'_> {
    fn residual_bound(&self, from: usize) -> (f64, Option<Vec<usize>>) {
        let live: Vec<usize> = (from..self.endpoints.len())
            .filter(|&i| {
                let (u, v) = self.endpoints[i];
                !self.used[u] && !self.used[v]
            })
            .collect();
        if live.is_empty() {
            return (0.0, Some(Vec::new()));
        }
        let Ok(sub) = Graph::new(self.n, live.iter().map(|&i| self.endpoints[i])) else {
            return (f64::INFINITY, None);
        };
        // Graph::new sorts edges; map weights through the sorted order.
        let mut by_pair: Vec<((usize, usize), usize)> =
            live.iter().map(|&i| (self.endpoints[i], i)).collect();
        by_pair.sort_unstable();
        let weights: Vec<f64> = by_pair.iter().map(|&(_, i)| self.weights[i]).collect();
        let Ok(wg) = WeightedGraph::new(sub, weights, 1.0) else {
            return (f64::INFINITY, None);
        };
        let (h, _, report) = solve_matching_primal(&wg);
        if report.status != super::LpStatus::Optimal {
            // Fall back to the trivial bound.
            let total = live.iter().map(|&i| self.weights[i]).sum();
            return (total, None);
        }
        let integral = h
            .values
            .iter()
            .all(|x| x.abs() < 1e-9 || (x - 1.0).abs() < 1e-9);
        let completion = integral.then(|| {
            by_pair
                .iter()
                .zip(&h.values)
                .filter(|(_, &x)| x > 0.5)
                .map(|(&(_, i), _)| i)
                .collect()
        });
        (report.dual_value.max(report.primal_value), completion)
    }

    fn record(&mut self, extra: &[usize]) {
        let value = self.current + extra.iter().map(|&i| self.weights[i]).sum::<f64>();
        if value > self.best {
            self.best = value;
            self.best_set = self.chosen.iter().chain(extra).copied().collect();
        }
    }

    fn dfs(&mut self, from: usize) {
        let (bound, completion) = self.residual_bound(from);
        if self.current + bound <= self.best + 1e-12 * (1.0 + self.best) {
            return;
        }
        if let Some(extra) = completion {
            self.record(&extra);
            return;
        }
        let Some(i) = (from..self.endpoints.len()).find(|&i| {
            let (u, v) = self.endpoints[i];
            !self.used[u] && !self.used[v]
        }) else {
            self.record(&[]);
            return;
        };
        let (u, v) = self.endpoints[i];
        self.used[u] = true;
        self.used[v] = true;
        self.chosen.push(i);
        self.current += self.weights[i];
        self.dfs(i + 1);
        self.current -= self.weights[i];
        self.chosen.pop();
        self.used[u] = false;
        self.used[v] = false;
        self.dfs(i + 1);
    }
}

fn solve_component(w: &WeightedGraph, comp: &Component) -> Vec<usize> {
    let mut order: Vec<usize> = comp
        .edges
        .iter()
        .copied()
        .filter(|&e| w.weights()[e] > 0.0)
        .collect();
    order.sort_by(|&a, &b| w.weights()[b].total_cmp(&w.weights()[a]).then(a.cmp(&b)));
    let g = w.graph();
    // Greedy incumbent.
    let mut used = vec![false; g.n()];
    let mut greedy = Vec::new();
    for (i, &e) in order.iter().enumerate() {
        let (u, v) = g.edges()[e];
        if !used[u] && !used[v] {
            used[u] = true;
            used[v] = true;
            greedy.push(i);
        }
    }
    let mut search = Search {
        n: g.n(),
        endpoints: order.iter().map(|&e| g.edges()[e]).collect(),
        weights: order.iter().map(|&e| w.weights()[e]).collect(),
        global: &order,
        used: vec![false; g.n()],
        chosen: Vec::new(),
        current: 0.0,
        best: greedy.iter().map(|&i| w.weights()[order[i]]).sum(),
        best_set: greedy,
    };
    search.dfs(0);
    search.best_set.iter().map(|&i| search.global[i]).collect()
}

/// Maximum-weight (integral) matching.
pub fn max_matching_exact(w: &WeightedGraph) -> Result<Matching> {
    let comps = components(w.graph());
    for comp in &comps {
        check_cap(w.graph(), comp)?;
    }
    let mut edges: Vec<usize> = comps.iter().flat_map(|c| solve_component(w, c)).collect();
    edges.sort_unstable();
    let value = edges.iter().map(|&e| w.weights()[e]).sum();
    Ok(Matching { edges, value })
}
