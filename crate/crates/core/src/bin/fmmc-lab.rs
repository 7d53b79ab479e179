use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use fmmc_lab::conductance::vertex_conductance_exact;
use fmmc_lab::dimred::Distribution;
use fmmc_lab::graph::io::read_graph;
use fmmc_lab::graph::{gen_family, gen_star_union, Embedding, Family, Graph};
use fmmc_lab::pipeline::{
    build_embedding, run_full_pipeline, run_theorem1_experiment, run_theorem2_experiment,
    sweep_dim_multiplier, EmbeddingSpec, FullPipelineConfig, ProjectionMode, Theorem1Config,
    Theorem2Config,
};
use fmmc_lab::spectral::{fmmc_solve, FmmcConfig};
use fmmc_lab::{Error, Result};

const SWEEP: [f64; 7] = [0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0];

#[derive(Parser)]
#[command(name = "fmmc-lab", version, about = "Matching-preserving projections and fastest mixing chains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Random-projection experiment on matching numbers.
    Theorem1(Theorem1Args),
    /// Random-projection experiment on the normalised cover objective.
    Theorem2(Theorem2Args),
    /// Fastest mixing chain by projected subgradient.
    Fmmc(FmmcArgs),
    /// Exact vertex conductance.
    Conductance(CommonArgs),
    /// Every component on one graph.
    Pipeline(PipelineArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct GraphSource {
    /// Edge-list file: `n m` header then `u v` per line.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Generated family, `path:n`, `cycle:n`, `complete:n` or `hypercube:dim`.
    #[arg(long)]
    family: Option<String>,
    /// Disjoint stars, `delta:k`, with the standard-basis embedding.
    #[arg(long)]
    star_union: Option<String>,
}

#[derive(Args)]
struct CommonArgs {
    #[command(flatten)]
    source: GraphSource,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// `basis`, `spectral[:k]`, `gaussian[:dim]` or `csv:<path>`.
    #[arg(long)]
    embedding: Option<String>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    dim_multiplier: f64,
    /// Fixed target dimension, overriding the multiplier.
    #[arg(long)]
    dimension: Option<usize>,
    #[arg(long, default_value = "gaussian")]
    dist: Distribution,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, default_value_t = 10_000)]
    goodness_trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Per-trial table in CSV form.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct Theorem1Args {
    #[command(flatten)]
    common: CommonArgs,
    #[command(flatten)]
    exp: ExperimentArgs,
    #[arg(long, default_value_t = 2.0)]
    q: f64,
    /// Scan multipliers 1/8..8 and report the first reaching 95% joint success.
    #[arg(long)]
    sweep: bool,
}

#[derive(Args)]
struct Theorem2Args {
    #[command(flatten)]
    common: CommonArgs,
    #[command(flatten)]
    exp: ExperimentArgs,
}

#[derive(Args)]
struct FmmcArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, default_value_t = 5000)]
    max_iters: usize,
    #[arg(long, default_value_t = 1.0)]
    step_scale: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Iteration history as `iter,mu,gap,step`.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct PipelineArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    embedding: Option<String>,
    #[arg(long, default_value_t = 0.01)]
    eps: f64,
    #[arg(long, default_value_t = 1.0)]
    dim_multiplier: f64,
    #[arg(long, default_value = "gaussian")]
    dist: Distribution,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 10_000)]
    goodness_trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Skip the projection experiment.
    #[arg(long)]
    no_projection: bool,
    #[arg(long)]
    csv: Option<PathBuf>,
}

fn split_spec(s: &str) -> (&str, Option<&str>) {
    match s.split_once(':') {
        Some((a, b)) => (a, Some(b)),
        None => (s, None),
    }
}

fn parse_usize(s: &str, what: &str) -> Result<usize> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad {what} `{s}`")))
}

fn load_graph(src: &GraphSource) -> Result<(Graph, Option<Embedding>)> {
    if let Some(path) = &src.graph {
        return Ok((read_graph(path)?, None));
    }
    if let Some(spec) = &src.family {
        let (kind, size) = split_spec(spec);
        let size = size.ok_or_else(|| Error::Parse(format!("family `{spec}` needs a size")))?;
        let kind: Family = kind.parse()?;
        return Ok((gen_family(kind, parse_usize(size, "family size")?)?, None));
    }
    let spec = src.star_union.as_deref().unwrap_or_default();
    let (delta, k) = split_spec(spec);
    let k = k.ok_or_else(|| Error::Parse(format!("star union `{spec}` needs delta:k")))?;
    let (g, f) = gen_star_union(parse_usize(delta, "delta")?, parse_usize(k, "k")?)?;
    Ok((g, Some(f)))
}

fn embedding_spec(arg: Option<&str>, g: &Graph) -> Result<Option<EmbeddingSpec>> {
    let Some(arg) = arg else { return Ok(None) };
    let (kind, param) = split_spec(arg);
    let spec = match kind {
        "basis" => EmbeddingSpec::Basis,
        "spectral" => EmbeddingSpec::Spectral {
            k: param.map_or(Ok(g.n().saturating_sub(1).max(1)), |p| parse_usize(p, "k"))?,
        },
        "gaussian" => EmbeddingSpec::Gaussian {
            dim: param.map_or(Ok(g.n()), |p| parse_usize(p, "dimension"))?,
        },
        "csv" => EmbeddingSpec::File {
            path: param
                .ok_or_else(|| Error::Parse("csv embedding needs csv:<path>".into()))?
                .to_string(),
        },
        other => return Err(Error::Parse(format!("unknown embedding `{other}`"))),
    };
    Ok(Some(spec))
}

fn resolve_embedding(
    arg: Option<&str>,
    g: &Graph,
    generated: Option<Embedding>,
    seed: u64,
) -> Result<Embedding> {
    match (embedding_spec(arg, g)?, generated) {
        (Some(spec), _) => build_embedding(g, &spec, seed),
        (None, Some(f)) => Ok(f),
        (None, None) => build_embedding(g, &EmbeddingSpec::Basis, seed),
    }
}

fn projection(exp: &ExperimentArgs) -> ProjectionMode {
    exp.dimension.map_or(ProjectionMode::Random, ProjectionMode::FixedDimension)
}

fn emit(value: &impl Serialize, out: Option<&PathBuf>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match out {
        Some(path) => std::fs::write(path, text + "\n")?,
        None => writeln!(std::io::stdout().lock(), "{text}")?,
    }
    Ok(())
}

fn write_csv(path: &PathBuf, header: &str, rows: impl Iterator<Item = String>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "{header}")?;
    for row in rows {
        writeln!(w, "{row}")?;
    }
    w.flush()?;
    Ok(())
}

fn theorem1(args: Theorem1Args) -> Result<i32> {
    let (g, generated) = load_graph(&args.common.source)?;
    let exp = &args.exp;
    let f = resolve_embedding(exp.embedding.as_deref(), &g, generated, exp.seed)?;
    let config = Theorem1Config {
        q: args.q,
        eps: exp.eps.unwrap_or(0.09),
        dim_multiplier: exp.dim_multiplier,
        distribution: exp.dist,
        trials: exp.trials.unwrap_or(200),
        seed: exp.seed,
        goodness_trials: exp.goodness_trials,
        projection: projection(exp),
    };
    let report = if args.sweep {
        let sweep = sweep_dim_multiplier(&g, &f, &config, &SWEEP, 0.95)?;
        emit(&sweep, args.common.out.as_ref())?;
        match sweep.chosen {
            Some(r) => r,
            None => return Ok(0),
        }
    } else {
        let r = run_theorem1_experiment(&g, &f, &config)?;
        emit(&r, args.common.out.as_ref())?;
        r
    };
    if let Some(path) = &exp.csv {
        write_csv(
            path,
            "trial,matching,fractional,pair_total,success_matching,success_fractional,success_pair_total,event_g",
            report.trials.iter().map(|t| {
                format!(
                    "{},{:e},{:e},{:e},{},{},{},{}",
                    t.trial,
                    t.matching,
                    t.fractional,
                    t.pair_total,
                    t.success_matching,
                    t.success_fractional,
                    t.success_pair_total,
                    t.event_g
                )
            }),
        )?;
    }
    Ok(0)
}

fn theorem2(args: Theorem2Args) -> Result<i32> {
    let (g, generated) = load_graph(&args.common.source)?;
    let exp = &args.exp;
    let f = resolve_embedding(exp.embedding.as_deref(), &g, generated, exp.seed)?;
    let config = Theorem2Config {
        eps: exp.eps.unwrap_or(0.01),
        dim_multiplier: exp.dim_multiplier,
        distribution: exp.dist,
        trials: exp.trials.unwrap_or(100),
        seed: exp.seed,
        goodness_trials: exp.goodness_trials,
        projection: projection(exp),
    };
    let report = run_theorem2_experiment(&g, &f, &config)?;
    emit(&report, args.common.out.as_ref())?;
    if let Some(path) = &exp.csv {
        write_csv(
            path,
            "trial,lambda,ratio,within_factor_two,pair_total,event_g",
            report.trials.iter().map(|t| {
                format!(
                    "{},{:e},{:e},{},{:e},{}",
                    t.trial, t.lambda.value, t.ratio, t.within_factor_two, t.pair_total, t.event_g
                )
            }),
        )?;
    }
    Ok(0)
}

#[derive(Serialize)]
struct FmmcOutput<'a> {
    n: usize,
    edges: usize,
    config: FmmcConfig,
    summary: &'a fmmc_lab::spectral::SpectralSummary,
    iterations: usize,
    converged: bool,
    edge_values: Vec<f64>,
}

fn fmmc(args: FmmcArgs) -> Result<i32> {
    let (g, _) = load_graph(&args.common.source)?;
    let config = FmmcConfig {
        max_iters: args.max_iters,
        step_scale: args.step_scale,
        seed: args.seed,
        ..FmmcConfig::default()
    };
    let result = fmmc_solve(&g, &config)?;
    emit(
        &FmmcOutput {
            n: g.n(),
            edges: g.num_edges(),
            config,
            summary: &result.summary,
            iterations: result.history.len(),
            converged: result.converged,
            edge_values: result.matrix.edge_values(),
        },
        args.common.out.as_ref(),
    )?;
    if let Some(path) = &args.csv {
        let mut w = BufWriter::new(File::create(path)?);
        result.write_history_csv(&mut w)?;
        w.flush()?;
    }
    Ok(0)
}

fn conductance(args: CommonArgs) -> Result<i32> {
    let (g, _) = load_graph(&args.source)?;
    emit(&vertex_conductance_exact(&g)?, args.out.as_ref())?;
    Ok(0)
}

fn pipeline(args: PipelineArgs) -> Result<i32> {
    let (g, _) = load_graph(&args.common.source)?;
    let embedding = embedding_spec(args.embedding.as_deref(), &g)?.unwrap_or(EmbeddingSpec::Basis);
    let config = FullPipelineConfig {
        seed: args.seed,
        fmmc: FmmcConfig::default(),
        embedding,
        theorem2: (!args.no_projection).then_some(Theorem2Config {
            eps: args.eps,
            dim_multiplier: args.dim_multiplier,
            distribution: args.dist,
            trials: args.trials,
            seed: args.seed,
            goodness_trials: args.goodness_trials,
            projection: ProjectionMode::Random,
        }),
    };
    let report = run_full_pipeline(&g, &config);
    emit(&report, args.common.out.as_ref())?;
    if let Some(path) = &args.csv {
        if let Ok(result) = fmmc_solve(&g, &config.fmmc) {
            let mut w = BufWriter::new(File::create(path)?);
            result.write_history_csv(&mut w)?;
            w.flush()?;
        }
    }
    // Rejections other than the expected disconnection are surfaced in the exit code.
    Ok(report
        .first_error_code()
        .filter(|_| g.is_connected())
        .unwrap_or(0))
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var("FMMC_LAB_THREADS") else {
        return Ok(());
    };
    let threads = parse_usize(&value, "FMMC_LAB_THREADS")?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::InvalidParameter(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = configure_threads().and_then(|()| match cli.command {
        Command::Theorem1(a) => theorem1(a),
        Command::Theorem2(a) => theorem2(a),
        Command::Fmmc(a) => fmmc(a),
        Command::Conductance(a) => conductance(a),
        Command::Pipeline(a) => pipeline(a),
    });
    match outcome {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("fmmc-lab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
