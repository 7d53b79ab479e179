//! Projected subgradient descent on the SLEM over `M(G)`.

use std::io::Write;

use serde::{Deserialize, Serialize};

use super::jacobi::sym_eigen;
use super::markov::{MarkovMatrix, SpectralSummary};
use super::projection::FeasibleSetProjector;
use crate::graph::Graph;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FmmcConfig {
    pub max_iters: usize,
    /// Step at iteration `t` is `step_scale · μ(P₀) / √t`.
    pub step_scale: f64,
    /// Stop once the best SLEM improved by less than `improvement_tol` over
    /// this many consecutive iterations.
    pub patience: usize,
    pub improvement_tol: f64,
    /// Recorded for provenance; the iteration itself is deterministic.
    pub seed: u64,
}

impl Default for FmmcConfig {
    fn default() -> Self {
        FmmcConfig {
            max_iters: 5000,
            step_scale: 1.0,
            patience: 200,
            improvement_tol: 1e-7,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistoryRow {
    pub iter: usize,
    pub mu: f64,
    pub gap: f64,
    pub step: f64,
    /// Multiplicity of the eigenvalue attaining the SLEM.
    #[serde(skip)]
    pub multiplicity: usize,
}

#[derive(Debug, Clone)]
pub struct FmmcResult {
    /// Best iterate found.
    pub matrix: MarkovMatrix,
    pub summary: SpectralSummary,
    pub history: Vec<HistoryRow>,
    /// False when the iteration budget ran out before the stopping rule fired.
    pub converged: bool,
}

impl FmmcResult {
    /// Writes the `iter,mu,gap,step` history table.
    pub fn write_history_csv(&self, mut out: impl Write) -> std::io::Result<()> {
        writeln!(out, "iter,mu,gap,step")?;
        for row in &self.history {
            writeln!(out, "{},{:e},{:e},{:e}", row.iter, row.mu, row.gap, row.step)?;
        }
        Ok(())
    }
}

const TIE_TOL: f64 = 1e-10;

pub fn fmmc_solve(g: &Graph, config: &FmmcConfig) -> Result<FmmcResult> {
    if g.n() == 0 {
        return Err(Error::InvalidParameter("empty graph".into()));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.n();
    let projector = FeasibleSetProjector::new(g);
    let mut current = MarkovMatrix::max_degree_walk(g);
    let mut best: Option<(MarkovMatrix, SpectralSummary)> = None;
    let mut history = Vec::new();
    let mut initial_mu = None;
    let mut last_improvement_mu = f64::INFINITY;
    let mut since_improvement = 0usize;
    let mut converged = false;

    for iter in 0..config.max_iters {
        let eig = sym_eigen(current.entries())?;
        let summary = SpectralSummary::from_eigenvalues(eig.values.clone());
        let mu = summary.slem;
        let mu0 = *initial_mu.get_or_insert(mu);
        let step = if iter == 0 {
            0.0
        } else {
            config.step_scale * mu0 / (iter as f64).sqrt()
        };

        if best.as_ref().is_none_or(|(_, b)| mu < b.slem) {
            best = Some((current.clone(), summary.clone()));
        }
        let best_mu = best.as_ref().map(|(_, b)| b.slem).unwrap_or(mu);
        if last_improvement_mu - best_mu >= config.improvement_tol {
            last_improvement_mu = best_mu;
            since_improvement = 0;
        } else {
            since_improvement += 1;
        }

        // Which end of the spectrum attains μ, and with what multiplicity.
        let top = if n > 1 { eig.values[1] } else { 0.0 };
        let bottom = eig.values[n - 1];
        let use_top = n == 1 || top >= -bottom;
        let target = if use_top { top } else { bottom };
        let multiplicity = eig.values[1.min(n - 1)..]
            .iter()
            .filter(|l| (*l - target).abs() <= TIE_TOL)
            .count();
        history.push(HistoryRow {
            iter,
            mu,
            gap: 1.0 - mu,
            step,
            multiplicity,
        });

        if since_improvement >= config.patience || mu <= 0.0 {
            converged = true;
            break;
        }

        let next_step = config.step_scale * mu0 / ((iter + 1) as f64).sqrt();
        let index = if use_top {
            1
        } else {
            (1..n)
                .find(|&i| (eig.values[i] - bottom).abs() <= TIE_TOL)
                .unwrap_or(n - 1)
        };
        let v = eig.vectors.column(index);
        let outer = v * v.transpose();
        // ∂λ/∂P = vvᵀ; μ = λ₂ descends along −vvᵀ, μ = −λ_n along +vvᵀ.
        let sign = if use_top { -1.0 } else { 1.0 };
        let trial = current.entries() + outer * (sign * next_step);
        let projected = projector.project(&trial)?;
        current = projected.matrix;
    }

    let (matrix, summary) = best.expect("at least one iteration");
    Ok(FmmcResult {
        matrix,
        summary,
        history,
        converged,
    })
}
