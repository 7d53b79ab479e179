//! Sub-Gaussian random projections and distortion diagnostics.
//!
//! A projector is a `d × n` matrix with i.i.d. centred entries of variance
//! `1/d`. [`estimate_goodness`] measures, by Monte Carlo, how often a fixed
//! vector's length leaves the band `e^{±ε}` (`δ`) and the expected excess of
//! `ratio^q` above `e^{εq}` (`ρ`). [`heavy_light_report`] does the edge-level
//! accounting for one realised projection: heavy edges whose projected weight
//! grew by at least `e^{εq}`, light edges and light pairs that shrank by at
//! least `e^{-εq}`, and whether all three totals stay under their thresholds.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{ChiSquared, Distribution as _, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::graph::{Embedding, WeightedGraph};
use crate::rng::{rng_for, stream};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Distribution {
    /// `N(0, 1/d)` entries.
    Gaussian,
    /// `±1/√d` with equal probability.
    Rademacher,
}

impl FromStr for Distribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(Distribution::Gaussian),
            "rademacher" => Ok(Distribution::Rademacher),
            other => Err(Error::InvalidParameter(format!("unknown distribution {other:?}"))),
        }
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Distribution::Gaussian => "gaussian",
            Distribution::Rademacher => "rademacher",
        })
    }
}

/// A realised `d × n` projection matrix, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Projector {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
    /// `None` for the identity hook used in tests.
    distribution: Option<Distribution>,
    seed: u64,
}

impl Projector {
    /// The `n × n` identity, for zero-distortion checks.
    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1.0;
        }
        Projector {
            rows: n,
            cols: n,
            entries,
            distribution: None,
            seed: 0,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn distribution(&self) -> Option<Distribution> {
        self.distribution
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn apply_vec(&self, x: &[f64]) -> Vec<f64> {
        self.entries
            .chunks(self.cols)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }
}

fn fill_entries(rng: &mut impl Rng, dist: Distribution, len: usize, d: usize) -> Vec<f64> {
    let scale = 1.0 / (d as f64).sqrt();
    match dist {
        Distribution::Gaussian => (0..len)
            .map(|_| {
                let z: f64 = StandardNormal.sample(rng);
                z * scale
            })
            .collect(),
        Distribution::Rademacher => {
            let mut out = Vec::with_capacity(len);
            while out.len() < len {
                let bits: u64 = rng.random();
                let take = (len - out.len()).min(64);
                out.extend((0..take).map(|b| if bits >> b & 1 == 1 { scale } else { -scale }));
            }
            out
        }
    }
}

/// Deterministic in `(n, d, distribution, seed)`.
pub fn sample_projector(n: usize, d: usize, distribution: Distribution, seed: u64) -> Result<Projector> {
    if n == 0 || d == 0 {
        return Err(Error::InvalidParameter(format!(
            "projector dimensions must be positive, got {d} x {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let entries = fill_entries(&mut rng, distribution, d * n, d);
    Ok(Projector {
        rows: d,
        cols: n,
        entries,
        distribution: Some(distribution),
        seed,
    })
}

/// Returns `π ∘ f`.
pub fn apply_projector(p: &Projector, f: &Embedding) -> Result<Embedding> {
    if p.cols != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.cols,
            actual: f.dim(),
        });
    }
    let mut points = Vec::with_capacity(f.n() * p.rows);
    for v in 0..f.n() {
        points.extend(p.apply_vec(f.point(v)));
    }
    Embedding::new(f.n(), p.rows, points)
}

/// Monte-Carlo estimates of the two failure quantities of a random projector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoodnessEstimate {
    pub epsilon: f64,
    pub q: f64,
    pub d: usize,
    pub distribution: Distribution,
    pub trials: usize,
    /// Frequency of `‖πx‖/‖x‖ ∉ [e^{-ε}, e^{ε}]`.
    pub delta_hat: f64,
    /// Mean of `1{‖πx‖ ≥ e^ε‖x‖} (‖πx‖^q/‖x‖^q − e^{εq})`.
    pub rho_hat: f64,
    pub delta_se: f64,
    pub rho_se: f64,
    /// Number of trials in which the upper-tail event occurred.
    pub exceedances: usize,
}

impl GoodnessEstimate {
    /// Upper confidence bound on δ: `δ̂ + 2·se`, or `3/trials` when no failure
    /// was observed (rule of three).
    pub fn delta_upper(&self) -> f64 {
        if self.delta_hat == 0.0 {
            3.0 / self.trials as f64
        } else {
            (self.delta_hat + 2.0 * self.delta_se).min(1.0)
        }
    }

    /// Upper confidence bound on ρ: `ρ̂ + 2·se`; with no upper-tail event
    /// observed, `3/trials · e^{εq}`.
    pub fn rho_upper(&self) -> f64 {
        if self.exceedances == 0 {
            3.0 / self.trials as f64 * (self.epsilon * self.q).exp()
        } else {
            self.rho_hat + 2.0 * self.rho_se
        }
    }

    /// Decay constant `c` with `max(δ, ρ) = exp(−c ε² d)`, fitted from the
    /// upper bounds. Empirical, not a certified constant.
    pub fn fitted_decay_rate(&self) -> f64 {
        let worst = self.delta_upper().max(self.rho_upper());
        -worst.ln() / (self.epsilon * self.epsilon * self.d as f64)
    }
}

fn squared_ratio_sample(
    rng: &mut ChaCha8Rng,
    distribution: Distribution,
    n: usize,
    d: usize,
) -> f64 {
    match distribution {
        // ‖πx‖²/‖x‖² ~ χ²_d / d for every fixed x.
        Distribution::Gaussian => {
            let chi = ChiSquared::new(d as f64).expect("d >= 1");
            chi.sample(rng) / d as f64
        }
        Distribution::Rademacher => {
            let x: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
            let norm_sq: f64 = x.iter().map(|v| v * v).sum();
            let mut proj_sq = 0.0;
            for _ in 0..d {
                let row = fill_entries(rng, distribution, n, d);
                let y: f64 = row.iter().zip(&x).map(|(a, b)| a * b).sum();
                proj_sq += y * y;
            }
            proj_sq / norm_sq
        }
    }
}

/// Estimates δ and ρ for `d`-dimensional projections of `R^n` at distortion ε.
///
/// Gaussian projectors are rotation invariant, so one direction suffices and
/// the squared ratio is drawn from `χ²_d / d`. Rademacher projectors are
/// averaged over random directions, with a fresh matrix per trial.
pub fn estimate_goodness(
    distribution: Distribution,
    n: usize,
    d: usize,
    eps: f64,
    q: f64,
    trials: usize,
    seed: u64,
) -> Result<GoodnessEstimate> {
    if trials == 0 || n == 0 || d == 0 {
        return Err(Error::InvalidParameter(
            "goodness estimation needs n, d, trials >= 1".into(),
        ));
    }
    if !(eps > 0.0 && eps.is_finite()) || q < 1.0 {
        return Err(Error::InvalidParameter(format!("bad (eps, q) = ({eps}, {q})")));
    }
    let lo = (-2.0 * eps).exp();
    let hi = (2.0 * eps).exp();
    let cap = (eps * q).exp();
    let samples: Vec<(bool, bool, f64)> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = rng_for(seed, stream::GOODNESS, t);
            let r2 = squared_ratio_sample(&mut rng, distribution, n, d);
            let fail = r2 < lo || r2 > hi;
            let upper = r2 >= hi;
            let excess = if upper { r2.powf(q / 2.0) - cap } else { 0.0 };
            (fail, upper, excess)
        })
        .collect();
    let t = trials as f64;
    let failures = samples.iter().filter(|s| s.0).count();
    let exceedances = samples.iter().filter(|s| s.1).count();
    let delta_hat = failures as f64 / t;
    let rho_hat = samples.iter().map(|s| s.2).sum::<f64>() / t;
    let rho_var = if trials > 1 {
        samples.iter().map(|s| (s.2 - rho_hat).powi(2)).sum::<f64>() / (t - 1.0)
    } else {
        0.0
    };
    Ok(GoodnessEstimate {
        epsilon: eps,
        q,
        d,
        distribution,
        trials,
        delta_hat,
        rho_hat,
        delta_se: (delta_hat * (1.0 - delta_hat) / t).sqrt(),
        rho_se: (rho_var / t).sqrt(),
        exceedances,
    })
}

/// Threshold values used by the event-G test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    /// `√ρ (Δ+1) w(M)`.
    pub diff_h: f64,
    /// `√δ (Δ+1) w(M)`.
    pub cost_l1: f64,
    /// `√δ · Σ_{u<v} w̃(u,v)`.
    pub cost_l2: f64,
}

/// Heavy/light classification of one realised projection.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeavyLightReport {
    pub epsilon: f64,
    pub q: f64,
    /// Edges with `w_π ≥ e^{εq} w`.
    pub heavy: Vec<(usize, usize)>,
    /// Edges with `w_π ≤ e^{-εq} w`.
    pub light_edges: Vec<(usize, usize)>,
    /// Unordered pairs with `w̃_π ≤ e^{-εq} w̃`.
    pub light_pairs: Vec<(usize, usize)>,
    pub diff_h: f64,
    pub cost_l1: f64,
    pub cost_l2: f64,
    pub event_g: bool,
    #[serde(skip)]
    pub thresholds: Thresholds,
    /// Σ_{u<v} w̃(u,v) for the original embedding.
    #[serde(skip)]
    pub pair_weight_orig: f64,
    /// Σ_{u<v} w̃_π(u,v) for the projected embedding.
    #[serde(skip)]
    pub pair_weight_proj: f64,
}

/// Classifies edges and pairs and evaluates event G.
///
/// `delta` and `rho` are the (upper-bound) estimates to use in the thresholds
/// and `matching_weight` is `w(M)` for the original weights. Pairs with zero
/// original weight are skipped: a linear map sends them to zero as well.
#[allow(clippy::too_many_arguments)]
pub fn heavy_light_report(
    w_orig: &WeightedGraph,
    f_orig: &Embedding,
    f_proj: &Embedding,
    eps: f64,
    q: f64,
    delta: f64,
    rho: f64,
    matching_weight: f64,
) -> Result<HeavyLightReport> {
    let n = w_orig.graph().n();
    for f in [f_orig, f_proj] {
        if f.n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: f.n(),
            });
        }
    }
    let up = (eps * q).exp();
    let down = (-eps * q).exp();

    let mut heavy = Vec::new();
    let mut light_edges = Vec::new();
    let mut diff_h = 0.0;
    let mut cost_l1 = 0.0;
    for (&(u, v), &w) in w_orig.graph().edges().iter().zip(w_orig.weights()) {
        if w == 0.0 {
            continue;
        }
        let wp = f_proj.pair_weight(u, v, q);
        if wp >= up * w {
            heavy.push((u, v));
            diff_h += wp - up * w;
        } else if wp <= down * w {
            light_edges.push((u, v));
            cost_l1 += w;
        }
    }

    let mut light_pairs = Vec::new();
    let mut cost_l2 = 0.0;
    let mut pair_weight_orig = 0.0;
    let mut pair_weight_proj = 0.0;
    for u in 0..n {
        for v in u + 1..n {
            let w = f_orig.pair_weight(u, v, q);
            let wp = f_proj.pair_weight(u, v, q);
            pair_weight_orig += w;
            pair_weight_proj += wp;
            if w > 0.0 && wp <= down * w {
                light_pairs.push((u, v));
                cost_l2 += w;
            }
        }
    }

    let spread = (w_orig.graph().max_degree() + 1) as f64 * matching_weight;
    let thresholds = Thresholds {
        diff_h: rho.sqrt() * spread,
        cost_l1: delta.sqrt() * spread,
        cost_l2: delta.sqrt() * pair_weight_orig,
    };
    let event_g =
        diff_h <= thresholds.diff_h && cost_l1 <= thresholds.cost_l1 && cost_l2 <= thresholds.cost_l2;
    Ok(HeavyLightReport {
        epsilon: eps,
        q,
        heavy,
        light_edges,
        light_pairs,
        diff_h,
        cost_l1,
        cost_l2,
        event_g,
        thresholds,
        pair_weight_orig,
        pair_weight_proj,
    })
}
