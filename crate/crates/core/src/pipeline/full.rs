//! One-shot run of every component on a single graph.

use serde::{Deserialize, Serialize};

use super::embeddings::{build_embedding, EmbeddingSpec};
use super::theorem2::{run_theorem2_experiment, Theorem2Config, Theorem2Report};
use crate::conductance::{bound_chain_report_with, vertex_conductance_exact, BoundChainReport, ConductanceCertificate};
use crate::graph::Graph;
use crate::spectral::{fmmc_solve, FmmcConfig, MarkovMatrix, SpectralSummary};
use crate::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FullPipelineConfig {
    pub seed: u64,
    pub fmmc: FmmcConfig,
    pub embedding: EmbeddingSpec,
    /// `None` skips the λ experiment.
    pub theorem2: Option<Theorem2Config>,
}

impl Default for FullPipelineConfig {
    fn default() -> Self {
        FullPipelineConfig {
            seed: 0,
            fmmc: FmmcConfig::default(),
            embedding: EmbeddingSpec::Basis,
            theorem2: Some(Theorem2Config {
                trials: 20,
                ..Theorem2Config::default()
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ComponentStatus {
    Ok,
    Rejected { reason: String, exit_code: i32 },
    Skipped { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Component<T> {
    #[serde(flatten)]
    pub status: ComponentStatus,
    pub report: Option<T>,
}

impl<T> Component<T> {
    fn from_result(r: Result<T>) -> Self {
        match r {
            Ok(report) => Component {
                status: ComponentStatus::Ok,
                report: Some(report),
            },
            Err(e) => Component {
                status: ComponentStatus::Rejected {
                    exit_code: e.exit_code(),
                    reason: e.to_string(),
                },
                report: None,
            },
        }
    }

    fn skipped(reason: impl Into<String>) -> Self {
        Component {
            status: ComponentStatus::Skipped { reason: reason.into() },
            report: None,
        }
    }

    pub fn is_ok(&self) -> bool {
        self.status == ComponentStatus::Ok
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FmmcSummary {
    pub summary: SpectralSummary,
    pub iterations: usize,
    pub converged: bool,
    /// Off-diagonal entry `P(u, v)` per edge, in edge order.
    pub edge_values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FullPipelineReport {
    pub n: usize,
    pub edges: usize,
    pub max_degree: usize,
    pub connected: bool,
    pub config: FullPipelineConfig,
    pub conductance: Component<ConductanceCertificate>,
    pub fmmc: Component<FmmcSummary>,
    /// `"fmmc"` or `"max_degree_walk"`: which chain fed the bound chain.
    pub bound_chain_source: &'static str,
    pub bound_chain: Component<BoundChainReport>,
    pub theorem2: Component<Theorem2Report>,
}

pub fn run_full_pipeline(g: &Graph, config: &FullPipelineConfig) -> FullPipelineReport {
    let conductance = Component::from_result(vertex_conductance_exact(g));

    let fmmc_run = fmmc_solve(g, &FmmcConfig { seed: config.seed, ..config.fmmc });
    let (chain, bound_chain_source) = match &fmmc_run {
        Ok(r) => (r.matrix.clone(), "fmmc"),
        Err(_) => (MarkovMatrix::max_degree_walk(g), "max_degree_walk"),
    };
    let fmmc = Component::from_result(fmmc_run.map(|r| FmmcSummary {
        edge_values: r.matrix.edge_values(),
        summary: r.summary,
        iterations: r.history.len(),
        converged: r.converged,
    }));

    let bound_chain = match &conductance.report {
        Some(cert) => Component::from_result(bound_chain_report_with(g, cert.value(), &chain)),
        None => Component::skipped("conductance unavailable"),
    };

    let theorem2 = match &config.theorem2 {
        None => Component::skipped("not requested"),
        Some(_) if g.num_edges() == 0 => Component::skipped("graph has no edges"),
        Some(t2) => Component::from_result(
            build_embedding(g, &config.embedding, config.seed).and_then(|f| {
                run_theorem2_experiment(g, &f, &Theorem2Config { seed: config.seed, ..t2.clone() })
            }),
        ),
    };

    FullPipelineReport {
        n: g.n(),
        edges: g.num_edges(),
        max_degree: g.max_degree(),
        connected: g.is_connected(),
        config: config.clone(),
        conductance,
        fmmc,
        bound_chain_source,
        bound_chain,
        theorem2,
    }
}

impl FullPipelineReport {
    /// First rejection among the components, for exit-code purposes.
    pub fn first_error_code(&self) -> Option<i32> {
        [&self.conductance.status, &self.fmmc.status, &self.bound_chain.status, &self.theorem2.status]
            .into_iter()
            .find_map(|s| match s {
                ComponentStatus::Rejected { exit_code, .. } => Some(*exit_code),
                _ => None,
            })
    }
}
