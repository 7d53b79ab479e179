//! Monte-Carlo check that projecting an embedding to logarithmic dimension at
//! most doubles the normalised cover objective.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::lambda::{lambda_eval, LambdaValue};
use super::theorem1::projector_for;
use super::{target_dimension, ProjectionMode};
use crate::dimred::{apply_projector, estimate_goodness, heavy_light_report, Distribution, GoodnessEstimate};
use crate::graph::{center_embedding, total_pair_weight, weights_from_embedding, Embedding, Graph};
use crate::matching::max_matching_exact;
use crate::rng::{derive_seed, stream};
use crate::{Error, Result};

const Q: f64 = 2.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem2Config {
    pub eps: f64,
    pub dim_multiplier: f64,
    pub distribution: Distribution,
    pub trials: usize,
    pub seed: u64,
    pub goodness_trials: usize,
    pub projection: ProjectionMode,
}

impl Default for Theorem2Config {
    fn default() -> Self {
        Theorem2Config {
            eps: 0.01,
            dim_multiplier: 1.0,
            distribution: Distribution::Gaussian,
            trials: 100,
            seed: 0,
            goodness_trials: 10_000,
            projection: ProjectionMode::Random,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem2Trial {
    pub trial: usize,
    pub projector_seed: u64,
    pub lambda: LambdaValue,
    /// λ(πF) / λ(F).
    pub ratio: f64,
    pub within_factor_two: bool,
    /// Σ_{u,v} ‖πF(u) − πF(v)‖² over ordered pairs.
    pub pair_total: f64,
    pub pair_total_preserved: bool,
    pub event_g: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem2Report {
    pub config: Theorem2Config,
    pub n: usize,
    pub edges: usize,
    pub max_degree: usize,
    pub d: usize,
    pub base: LambdaValue,
    /// Σ_{u,v} ‖F(u) − F(v)‖² over ordered pairs, F centred.
    pub base_pair_total: f64,
    pub goodness: GoodnessEstimate,
    pub within_factor_two: f64,
    pub event_g_frequency: f64,
    /// Fraction of event-G trials that also satisfy the factor-two bound.
    pub within_factor_two_given_g: Option<f64>,
    /// Event-G trials in which the pair total fell below `e^{-2ε}` times the original.
    pub pair_total_violations_under_g: usize,
    pub max_ratio: f64,
    pub trials: Vec<Theorem2Trial>,
}

pub fn run_theorem2_experiment(g: &Graph, f: &Embedding, config: &Theorem2Config) -> Result<Theorem2Report> {
    if !(config.eps > 0.0 && config.eps < 0.1) {
        return Err(Error::InvalidParameter(format!(
            "eps must lie in (0, 1/10), got {}",
            config.eps
        )));
    }
    if config.trials == 0 || config.goodness_trials == 0 {
        return Err(Error::InvalidParameter("trial counts must be positive".into()));
    }
    if config.dim_multiplier.is_nan() || config.dim_multiplier <= 0.0 {
        return Err(Error::InvalidParameter("dimension multiplier must be positive".into()));
    }
    let eps = config.eps;
    let base = lambda_eval(g, f)?;
    let centred = center_embedding(f);
    let base_pair_total = total_pair_weight(&centred, Q)?;
    let w = weights_from_embedding(g, &centred, Q)?;
    let matching = max_matching_exact(&w)?;

    let d = match config.projection {
        ProjectionMode::Random => target_dimension(config.dim_multiplier, Q, eps, g.max_degree()),
        ProjectionMode::FixedDimension(d) => d,
        ProjectionMode::Identity => f.dim(),
    };
    let goodness = estimate_goodness(config.distribution, f.dim(), d, eps, Q, config.goodness_trials, config.seed)?;
    let (delta_up, rho_up) = (goodness.delta_upper(), goodness.rho_upper());
    let floor = (-2.0 * eps).exp();

    let trials = (0..config.trials)
        .into_par_iter()
        .map(|t| -> Result<Theorem2Trial> {
            let projector_seed = derive_seed(config.seed, stream::PROJECTOR, t as u64);
            let p = projector_for(&config.projection, f.dim(), d, config.distribution, projector_seed)?;
            let fp = apply_projector(&p, &centred)?;
            let lambda = lambda_eval(g, &fp)?;
            let ratio = if base.value == 0.0 {
                if lambda.value == 0.0 {
                    1.0
                } else {
                    f64::INFINITY
                }
            } else {
                lambda.value / base.value
            };
            let hl = heavy_light_report(&w, &centred, &fp, eps, Q, delta_up, rho_up, matching.value)?;
            let pair_total = 2.0 * hl.pair_weight_proj;
            Ok(Theorem2Trial {
                trial: t,
                projector_seed,
                within_factor_two: lambda.value <= 2.0 * base.value,
                lambda,
                ratio,
                pair_total,
                pair_total_preserved: pair_total >= floor * base_pair_total * (1.0 - 1e-12),
                event_g: hl.event_g,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let total = trials.len() as f64;
    let under_g: Vec<&Theorem2Trial> = trials.iter().filter(|t| t.event_g).collect();
    let within_given_g = (!under_g.is_empty())
        .then(|| under_g.iter().filter(|t| t.within_factor_two).count() as f64 / under_g.len() as f64);
    Ok(Theorem2Report {
        config: config.clone(),
        n: g.n(),
        edges: g.num_edges(),
        max_degree: g.max_degree(),
        d,
        base,
        base_pair_total,
        goodness,
        within_factor_two: trials.iter().filter(|t| t.within_factor_two).count() as f64 / total,
        event_g_frequency: under_g.len() as f64 / total,
        within_factor_two_given_g: within_given_g,
        pair_total_violations_under_g: under_g.iter().filter(|t| !t.pair_total_preserved).count(),
        max_ratio: trials.iter().map(|t| t.ratio).fold(0.0, f64::max),
        trials,
    })
}
