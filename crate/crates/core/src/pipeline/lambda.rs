use serde::{Deserialize, Serialize};

use crate::graph::{center_embedding, weights_from_embedding, Embedding, Graph};
use crate::matching::{min_vertex_cover_lp, LpStatus};
use crate::{Error, Result};

/// `Σ_u g(u) / Σ_u ‖f(u)‖²` at a fixed centred embedding, with `g` the
/// optimal fractional vertex cover of the squared-distance weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaValue {
    pub value: f64,
    /// Optimal cover total (= fractional matching number of the weights).
    pub numerator: f64,
    /// Σ_u ‖f(u)‖² after centring.
    pub denominator: f64,
    pub dim: usize,
}

pub fn lambda_eval(g: &Graph, f: &Embedding) -> Result<LambdaValue> {
    if f.n() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            actual: f.n(),
        });
    }
    let raw = f.sum_sq_norms();
    let centred = center_embedding(f);
    let denominator = centred.sum_sq_norms();
    if denominator <= 1e-20 * raw || denominator == 0.0 || denominator.is_nan() {
        return Err(Error::DegenerateEmbedding);
    }
    let w = weights_from_embedding(g, &centred, 2.0)?;
    let (cover, report) = min_vertex_cover_lp(&w);
    if report.status != LpStatus::Optimal {
        return Err(Error::Numerical(format!(
            "vertex cover LP not certified optimal (primal {}, dual {})",
            report.primal_value, report.dual_value
        )));
    }
    Ok(LambdaValue {
        value: cover.total / denominator,
        numerator: cover.total,
        denominator,
        dim: f.dim(),
    })
}
