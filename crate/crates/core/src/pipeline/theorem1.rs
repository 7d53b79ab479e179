//! Monte-Carlo check that random projection preserves matching numbers.
//!
//! Each trial projects the embedding, recomputes the weights, and compares
//! the projected maximum matching, maximum fractional matching and total pair
//! weight with the originals against the band `[e^{-εq}, e^{εq}]`. Trials in
//! which event G holds are additionally checked against the deterministic
//! inequalities that event G implies.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{target_dimension, ProjectionMode};
use crate::dimred::{
    apply_projector, estimate_goodness, heavy_light_report, sample_projector, Distribution,
    GoodnessEstimate, Projector,
};
use crate::graph::{total_pair_weight, weights_from_embedding, Embedding, Graph};
use crate::matching::{fractional_matching, max_matching_exact, LpStatus};
use crate::rng::{derive_seed, stream};
use crate::{Error, Result};

/// Relative slack for the per-trial event-G inequalities (LP round-off).
pub const GUARANTEE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem1Config {
    pub q: f64,
    pub eps: f64,
    pub dim_multiplier: f64,
    pub distribution: Distribution,
    pub trials: usize,
    pub seed: u64,
    /// Monte-Carlo trials for the δ/ρ estimates feeding the event-G thresholds.
    pub goodness_trials: usize,
    pub projection: ProjectionMode,
}

impl Default for Theorem1Config {
    fn default() -> Self {
        Theorem1Config {
            q: 2.0,
            eps: 0.09,
            dim_multiplier: 1.0,
            distribution: Distribution::Gaussian,
            trials: 200,
            seed: 0,
            goodness_trials: 10_000,
            projection: ProjectionMode::Random,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem1Trial {
    pub trial: usize,
    pub projector_seed: u64,
    pub matching: f64,
    pub fractional: f64,
    pub pair_total: f64,
    pub success_matching: bool,
    pub success_fractional: bool,
    pub success_pair_total: bool,
    pub event_g: bool,
    pub heavy: usize,
    pub light_edges: usize,
    pub light_pairs: usize,
    pub diff_h: f64,
    pub cost_l1: f64,
    pub cost_l2: f64,
    /// Event-G consequences that failed in this trial (empty when none).
    pub guarantee_violations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reference {
    pub matching: f64,
    pub fractional: f64,
    /// Ordered-pair total Σ_{u,v} w̃(u,v).
    pub pair_total: f64,
    pub edge_total: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem1Report {
    pub config: Theorem1Config,
    pub n: usize,
    pub edges: usize,
    pub max_degree: usize,
    pub d: usize,
    pub reference: Reference,
    pub goodness: GoodnessEstimate,
    /// δ and ρ upper confidence bounds used in the event-G thresholds; they
    /// stand in for the unknown exact δ, ρ.
    pub delta_upper: f64,
    pub rho_upper: f64,
    pub success_matching: f64,
    pub success_fractional: f64,
    pub success_pair_total: f64,
    pub success_all: f64,
    pub event_g_frequency: f64,
    /// `1 − 3·√max(δ, ρ)`, the Markov/union-bound floor for event G using the
    /// fitted decay constant.
    pub event_g_floor: f64,
    pub guarantee_violations: usize,
    /// Fitted `c` in `P(failure) ≈ exp(−c ε² d)`; empirical, not a proven constant.
    pub fitted_failure_decay: f64,
    pub trials: Vec<Theorem1Trial>,
}

fn in_band(value: f64, reference: f64, factor: f64) -> bool {
    value >= reference / factor && value <= reference * factor
}

fn check_config(config: &Theorem1Config) -> Result<()> {
    if !(config.eps > 0.0 && config.eps < 0.1) {
        return Err(Error::InvalidParameter(format!(
            "eps must lie in (0, 1/10), got {}",
            config.eps
        )));
    }
    if !(config.q >= 1.0 && config.q.is_finite()) {
        return Err(Error::InvalidParameter(format!("q must be >= 1, got {}", config.q)));
    }
    if config.trials == 0 || config.goodness_trials == 0 {
        return Err(Error::InvalidParameter("trial counts must be positive".into()));
    }
    if config.dim_multiplier.is_nan() || config.dim_multiplier <= 0.0 {
        return Err(Error::InvalidParameter("dimension multiplier must be positive".into()));
    }
    Ok(())
}

pub(crate) fn projector_for(
    mode: &ProjectionMode,
    n: usize,
    d: usize,
    distribution: Distribution,
    seed: u64,
) -> Result<Projector> {
    match mode {
        ProjectionMode::Identity => Ok(Projector::identity(n)),
        _ => sample_projector(n, d, distribution, seed),
    }
}

pub fn run_theorem1_experiment(
    g: &Graph,
    f: &Embedding,
    config: &Theorem1Config,
) -> Result<Theorem1Report> {
    check_config(config)?;
    let (q, eps) = (config.q, config.eps);
    let w = weights_from_embedding(g, f, q)?;
    let matching = max_matching_exact(&w)?;
    let (frac, lp) = fractional_matching(&w);
    if lp.status != LpStatus::Optimal {
        return Err(Error::Numerical("fractional matching LP on the base weights".into()));
    }
    let reference = Reference {
        matching: matching.value,
        fractional: frac.total_weight,
        pair_total: total_pair_weight(f, q)?,
        edge_total: w.total_edge_weight(),
    };
    let delta_g = g.max_degree();
    let d = match config.projection {
        ProjectionMode::Random => target_dimension(config.dim_multiplier, q, eps, delta_g),
        ProjectionMode::FixedDimension(d) => d,
        ProjectionMode::Identity => f.dim(),
    };
    let goodness = estimate_goodness(
        config.distribution,
        f.dim(),
        d,
        eps,
        q,
        config.goodness_trials,
        config.seed,
    )?;
    let delta_up = goodness.delta_upper();
    let rho_up = goodness.rho_upper();
    let band = (eps * q).exp();
    let spread = (delta_g + 1) as f64;

    let trials = (0..config.trials)
        .into_par_iter()
        .map(|t| -> Result<Theorem1Trial> {
            let projector_seed = derive_seed(config.seed, stream::PROJECTOR, t as u64);
            let p = projector_for(&config.projection, f.dim(), d, config.distribution, projector_seed)?;
            let fp = apply_projector(&p, f)?;
            let wp = weights_from_embedding(g, &fp, q)?;
            let mp = max_matching_exact(&wp)?;
            let (fracp, lpp) = fractional_matching(&wp);
            if lpp.status != LpStatus::Optimal {
                return Err(Error::Numerical(format!("projected LP in trial {t}")));
            }
            let hl = heavy_light_report(&w, f, &fp, eps, q, delta_up, rho_up, reference.matching)?;
            let pair_total = 2.0 * hl.pair_weight_proj;

            let mut violations = Vec::new();
            if hl.event_g {
                let slack = |x: f64| GUARANTEE_TOL * (1.0 + x.abs());
                let upper = (band + rho_up.sqrt() * spread) * reference.matching;
                if mp.value > upper + slack(upper) {
                    violations.push(format!("matching {} above {}", mp.value, upper));
                }
                let lower = (1.0 / band - delta_up.sqrt() * spread) * reference.matching;
                if mp.value < lower - slack(lower) {
                    violations.push(format!("matching {} below {}", mp.value, lower));
                }
                let upper = (band + rho_up.sqrt() * spread) * reference.fractional;
                if fracp.total_weight > upper + slack(upper) {
                    violations.push(format!("fractional {} above {}", fracp.total_weight, upper));
                }
                let lower = (1.0 / band - delta_up.sqrt() * spread) * reference.fractional;
                if fracp.total_weight < lower - slack(lower) {
                    violations.push(format!("fractional {} below {}", fracp.total_weight, lower));
                }
                let lower = (1.0 / band - delta_up.sqrt()) * reference.pair_total;
                if pair_total < lower - slack(lower) {
                    violations.push(format!("pair total {pair_total} below {lower}"));
                }
            }
            Ok(Theorem1Trial {
                trial: t,
                projector_seed,
                matching: mp.value,
                fractional: fracp.total_weight,
                pair_total,
                success_matching: in_band(mp.value, reference.matching, band),
                success_fractional: in_band(fracp.total_weight, reference.fractional, band),
                success_pair_total: in_band(pair_total, reference.pair_total, band),
                event_g: hl.event_g,
                heavy: hl.heavy.len(),
                light_edges: hl.light_edges.len(),
                light_pairs: hl.light_pairs.len(),
                diff_h: hl.diff_h,
                cost_l1: hl.cost_l1,
                cost_l2: hl.cost_l2,
                guarantee_violations: violations,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let total = trials.len() as f64;
    let freq = |pred: &dyn Fn(&Theorem1Trial) -> bool| trials.iter().filter(|t| pred(t)).count() as f64 / total;
    let success_all = freq(&|t| t.success_matching && t.success_fractional && t.success_pair_total);
    let failure = 1.0 - success_all;
    let failure_upper = if failure == 0.0 { 3.0 / total } else { failure };
    Ok(Theorem1Report {
        config: config.clone(),
        n: g.n(),
        edges: g.num_edges(),
        max_degree: delta_g,
        d,
        reference,
        delta_upper: delta_up,
        rho_upper: rho_up,
        success_matching: freq(&|t| t.success_matching),
        success_fractional: freq(&|t| t.success_fractional),
        success_pair_total: freq(&|t| t.success_pair_total),
        success_all,
        event_g_frequency: freq(&|t| t.event_g),
        event_g_floor: 1.0 - 3.0 * delta_up.max(rho_up).sqrt(),
        guarantee_violations: trials.iter().map(|t| t.guarantee_violations.len()).sum(),
        fitted_failure_decay: -failure_upper.ln() / (eps * eps * d as f64),
        goodness,
        trials,
    })
}

/// Outcome of scanning dimension multipliers from small to large.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub target: f64,
    /// `(multiplier, d, success_all)` for every multiplier tried.
    pub scanned: Vec<(f64, usize, f64)>,
    pub chosen_multiplier: Option<f64>,
    pub chosen: Option<Theorem1Report>,
}

/// Runs the experiment at each multiplier in ascending order and stops at the
/// first whose joint success frequency reaches `target`.
pub fn sweep_dim_multiplier(
    g: &Graph,
    f: &Embedding,
    config: &Theorem1Config,
    multipliers: &[f64],
    target: f64,
) -> Result<SweepReport> {
    let mut sorted = multipliers.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut scanned = Vec::new();
    for m in sorted {
        let cfg = Theorem1Config {
            dim_multiplier: m,
            projection: ProjectionMode::Random,
            ..config.clone()
        };
        let report = run_theorem1_experiment(g, f, &cfg)?;
        scanned.push((m, report.d, report.success_all));
        if report.success_all >= target {
            return Ok(SweepReport {
                target,
                scanned,
                chosen_multiplier: Some(m),
                chosen: Some(report),
            });
        }
    }
    Ok(SweepReport {
        target,
        scanned,
        chosen_multiplier: None,
        chosen: None,
    })
}
