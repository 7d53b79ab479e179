use nalgebra::DMatrix;
use rand_distr::{Distribution as _, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::graph::{io::read_embedding, Embedding, Graph};
use crate::rng::{rng_for, stream};
use crate::spectral::sym_eigen;
use crate::Result;

/// How to obtain the base embedding for an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmbeddingSpec {
    /// `f(v) = e_v`.
    Basis,
    /// The `k` Laplacian eigenvectors just above the constant one.
    Spectral { k: usize },
    /// i.i.d. standard normal coordinates.
    Gaussian { dim: usize },
    /// CSV file, one row per vertex.
    File { path: String },
}

pub fn build_embedding(g: &Graph, spec: &EmbeddingSpec, seed: u64) -> Result<Embedding> {
    let n = g.n();
    match spec {
        EmbeddingSpec::Basis => Ok(Embedding::standard_basis(n)),
        EmbeddingSpec::Spectral { k } => {
            let mut lap = DMatrix::<f64>::zeros(n, n);
            for &(u, v) in g.edges() {
                lap[(u, u)] += 1.0;
                lap[(v, v)] += 1.0;
                lap[(u, v)] -= 1.0;
                lap[(v, u)] -= 1.0;
            }
            let eig = sym_eigen(&lap)?;
            let k = (*k).clamp(1, n.saturating_sub(1).max(1));
            // Eigenvalues are descending; the last column is the constant vector.
            let cols: Vec<usize> = (0..k).map(|i| n.saturating_sub(2 + i)).collect();
            let mut points = Vec::with_capacity(n * k);
            for v in 0..n {
                points.extend(cols.iter().map(|&c| eig.vectors[(v, c)]));
            }
            Embedding::new(n, k, points)
        }
        EmbeddingSpec::Gaussian { dim } => {
            let mut rng = rng_for(seed, stream::EMBEDDING, 0);
            let points = (0..n * dim)
                .map(|_| StandardNormal.sample(&mut rng))
                .collect();
            Embedding::new(n, *dim, points)
        }
        EmbeddingSpec::File { path } => read_embedding(path),
    }
}
