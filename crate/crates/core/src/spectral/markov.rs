use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::jacobi::sym_eigs;
use crate::graph::Graph;
use crate::{Error, Result};

pub const SYMMETRY_TOL: f64 = 1e-12;
pub const ROW_SUM_TOL: f64 = 1e-10;

/// Symmetric stochastic matrix whose off-diagonal support lies on the edges
/// of `graph`.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovMatrix {
    graph: Graph,
    entries: DMatrix<f64>,
}

impl MarkovMatrix {
    /// Validates nonnegativity, symmetry, unit row sums and support.
    pub fn new(graph: Graph, entries: DMatrix<f64>) -> Result<Self> {
        check_feasible(&graph, &entries)?;
        Ok(MarkovMatrix { graph, entries })
    }

    /// `P = I − Σ_e p_e (e_u − e_v)(e_u − e_v)ᵀ` for edge values aligned with
    /// `graph.edges()`.
    pub fn from_edge_values(graph: Graph, values: &[f64]) -> Result<Self> {
        if values.len() != graph.num_edges() {
            return Err(Error::DimensionMismatch {
                expected: graph.num_edges(),
                actual: values.len(),
            });
        }
        let n = graph.n();
        let mut p = DMatrix::<f64>::identity(n, n);
        for (&(u, v), &x) in graph.edges().iter().zip(values) {
            p[(u, v)] = x;
            p[(v, u)] = x;
            p[(u, u)] -= x;
            p[(v, v)] -= x;
        }
        MarkovMatrix::new(graph, p)
    }

    /// Max-degree lazy walk `I − L/(Δ+1)`.
    pub fn max_degree_walk(graph: &Graph) -> Self {
        let step = 1.0 / (graph.max_degree() + 1) as f64;
        let values = vec![step; graph.num_edges()];
        MarkovMatrix::from_edge_values(graph.clone(), &values)
            .expect("max-degree walk is always feasible")
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn edge_values(&self) -> Vec<f64> {
        self.graph
            .edges()
            .iter()
            .map(|&(u, v)| self.entries[(u, v)])
            .collect()
    }
}

pub(crate) fn check_feasible(g: &Graph, p: &DMatrix<f64>) -> Result<()> {
    let n = g.n();
    if p.nrows() != n || p.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: p.nrows(),
        });
    }
    for i in 0..n {
        let mut row = 0.0;
        for j in 0..n {
            let x = p[(i, j)];
            if !x.is_finite() || x < 0.0 {
                return Err(Error::InvalidParameter(format!("entry ({i},{j}) = {x} is negative")));
            }
            if (x - p[(j, i)]).abs() > SYMMETRY_TOL {
                return Err(Error::NotSymmetric((x - p[(j, i)]).abs()));
            }
            if i != j && x > 0.0 && !g.has_edge(i, j) {
                return Err(Error::InvalidParameter(format!(
                    "entry ({i},{j}) = {x} is off the edge support"
                )));
            }
            row += x;
        }
        if (row - 1.0).abs() > ROW_SUM_TOL {
            return Err(Error::InvalidParameter(format!("row {i} sums to {row}")));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralSummary {
    /// Descending.
    pub eigenvalues: Vec<f64>,
    /// Second largest eigenvalue modulus, `max_{i≥2} |λ_i|`.
    pub slem: f64,
    /// `1 − slem`.
    pub gap: f64,
}

impl SpectralSummary {
    pub fn from_eigenvalues(eigenvalues: Vec<f64>) -> Self {
        let slem = eigenvalues
            .iter()
            .skip(1)
            .fold(0.0f64, |m, l| m.max(l.abs()))
            .min(1.0);
        SpectralSummary {
            eigenvalues,
            slem,
            gap: 1.0 - slem,
        }
    }
}

pub fn spectral_summary(p: &MarkovMatrix) -> Result<SpectralSummary> {
    Ok(SpectralSummary::from_eigenvalues(sym_eigs(p.entries())?))
}
