//! Frobenius-nearest point of `M(G)` by Dykstra's alternating projections.
//!
//! Symmetrising and zeroing entries off `E ∪ diag` is an orthogonal
//! projection onto a subspace, done once. Inside that subspace a matrix is
//! described by its diagonal `d` and one value `p_e` per edge (each appearing
//! twice in the matrix, hence weight 2 in the norm). Dykstra then alternates
//! between the nonnegative orthant and the affine set of unit row sums
//! `d_i + Σ_{e∋i} p_e = 1`. Projection onto the affine set solves
//! `(I + ½(D + A)) λ = 1 − rowsum` with the signless Laplacian `D + A`.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use super::markov::MarkovMatrix;
use crate::graph::Graph;
use crate::{Error, Result};

const MAX_ITERATIONS: usize = 50_000;
const STEP_TOL: f64 = 1e-13;

#[derive(Debug, Clone)]
pub struct Projection {
    pub matrix: MarkovMatrix,
    pub iterations: usize,
    pub converged: bool,
}

/// Reusable projector for one graph; the Cholesky factor is computed once.
pub struct FeasibleSetProjector {
    graph: Graph,
    factor: Cholesky<f64, Dyn>,
}

impl FeasibleSetProjector {
    pub fn new(graph: &Graph) -> Self {
        let n = graph.n();
        let mut k = DMatrix::<f64>::identity(n, n);
        for &(u, v) in graph.edges() {
            k[(u, u)] += 0.5;
            k[(v, v)] += 0.5;
            k[(u, v)] += 0.5;
            k[(v, u)] += 0.5;
        }
        let factor = Cholesky::new(k).expect("I + (D + A)/2 is positive definite");
        FeasibleSetProjector {
            graph: graph.clone(),
            factor,
        }
    }

    fn project_affine(&self, d: &mut [f64], p: &mut [f64]) {
        let mut rhs = DVector::from_iterator(d.len(), d.iter().map(|x| 1.0 - x));
        for (&(u, v), &x) in self.graph.edges().iter().zip(p.iter()) {
            rhs[u] -= x;
            rhs[v] -= x;
        }
        let lambda = self.factor.solve(&rhs);
        for (di, li) in d.iter_mut().zip(lambda.iter()) {
            *di += li;
        }
        for (&(u, v), x) in self.graph.edges().iter().zip(p.iter_mut()) {
            *x += 0.5 * (lambda[u] + lambda[v]);
        }
    }

    pub fn project(&self, m: &DMatrix<f64>) -> Result<Projection> {
        let n = self.graph.n();
        if m.nrows() != n || m.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: m.nrows(),
            });
        }
        let mut d: Vec<f64> = (0..n).map(|i| m[(i, i)]).collect();
        let mut p: Vec<f64> = self
            .graph
            .edges()
            .iter()
            .map(|&(u, v)| 0.5 * (m[(u, v)] + m[(v, u)]))
            .collect();
        let len = n + p.len();
        let mut corr_c = vec![0.0; len];
        let mut corr_a = vec![0.0; len];
        let mut iterations = 0;
        let mut converged = false;
        while iterations < MAX_ITERATIONS {
            iterations += 1;
            let x: Vec<f64> = d.iter().chain(&p).copied().collect();
            // Orthant step.
            let y: Vec<f64> = x.iter().zip(&corr_c).map(|(a, c)| (a + c).max(0.0)).collect();
            for i in 0..len {
                corr_c[i] += x[i] - y[i];
            }
            // Affine step.
            let mut z: Vec<f64> = y.iter().zip(&corr_a).map(|(a, c)| a + c).collect();
            let (zd, zp) = z.split_at_mut(n);
            self.project_affine(zd, zp);
            for i in 0..len {
                corr_a[i] += y[i] - z[i];
            }
            let step = x.iter().zip(&z).fold(0.0f64, |s, (a, b)| s.max((a - b).abs()));
            let negative = z.iter().fold(0.0f64, |s, a| s.max(-a));
            d.copy_from_slice(&z[..n]);
            p.copy_from_slice(&z[n..]);
            if step <= STEP_TOL && negative <= STEP_TOL {
                converged = true;
                break;
            }
        }
        Ok(Projection {
            matrix: self.finish(&p)?,
            iterations,
            converged,
        })
    }

    /// Rounds the iterate into `M(G)` exactly: clamps edge values at zero,
    /// shrinks edges at any vertex whose load exceeds one, and sets the
    /// diagonal from the row sums.
    fn finish(&self, p: &[f64]) -> Result<MarkovMatrix> {
        let g = &self.graph;
        let mut p: Vec<f64> = p.iter().map(|x| x.max(0.0)).collect();
        let mut load = vec![0.0; g.n()];
        for (&(u, v), &x) in g.edges().iter().zip(&p) {
            load[u] += x;
            load[v] += x;
        }
        for (&(u, v), x) in g.edges().iter().zip(p.iter_mut()) {
            *x /= load[u].max(load[v]).max(1.0);
        }
        let n = g.n();
        let mut m = DMatrix::<f64>::zeros(n, n);
        let mut row = vec![0.0; n];
        for (&(u, v), &x) in g.edges().iter().zip(&p) {
            m[(u, v)] = x;
            m[(v, u)] = x;
            row[u] += x;
            row[v] += x;
        }
        for i in 0..n {
            m[(i, i)] = (1.0 - row[i]).max(0.0);
        }
        MarkovMatrix::new(g.clone(), m)
    }
}

/// Nearest matrix in `M(G)` to `m` in Frobenius norm.
pub fn project_to_feasible(m: &DMatrix<f64>, g: &Graph) -> Result<Projection> {
    FeasibleSetProjector::new(g).project(m)
}
