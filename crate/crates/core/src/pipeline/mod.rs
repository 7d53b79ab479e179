//! End-to-end experiments built on the graph, matching, projection and
//! spectral layers.

mod embeddings;
mod full;
mod lambda;
mod theorem1;
mod theorem2;

use serde::{Deserialize, Serialize};

use crate::conductance::log_floor;

pub use embeddings::{build_embedding, EmbeddingSpec};
pub use full::{run_full_pipeline, ComponentStatus, FullPipelineConfig, FullPipelineReport};
pub use lambda::{lambda_eval, LambdaValue};
pub use theorem1::{
    run_theorem1_experiment, sweep_dim_multiplier, Reference, SweepReport, Theorem1Config,
    Theorem1Report, Theorem1Trial, GUARANTEE_TOL,
};
pub use theorem2::{run_theorem2_experiment, Theorem2Config, Theorem2Report, Theorem2Trial};

/// How the experiments obtain the projection applied in each trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProjectionMode {
    /// Random projector with the dimension given by the multiplier formula.
    Random,
    /// Identity map; every trial reproduces the input exactly.
    Identity,
    /// Random projector with a fixed target dimension.
    FixedDimension(usize),
}

/// `⌈m · q · max(ln(Δ/(εq)), 1) / ε²⌉`, at least 1.
pub fn target_dimension(multiplier: f64, q: f64, eps: f64, max_degree: usize) -> usize {
    let raw = multiplier * q * log_floor(max_degree as f64 / (eps * q)) / (eps * eps);
    (raw.ceil() as usize).max(1)
}
