//! Acceptance criteria. Runs as a plain binary and prints one line per
//! criterion; exits non-zero if any criterion fails.

mod common;

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use fmmc_lab::conductance::{bound_chain_report_with, vertex_conductance_exact};
use fmmc_lab::dimred::Distribution;
use fmmc_lab::graph::{gen_family, gen_star_union, Embedding, Family, Graph};
use fmmc_lab::matching::{
    fractional_matching, fractional_matching_oracle, max_matching_exact, min_vertex_cover_lp,
};
use fmmc_lab::pipeline::{
    run_theorem1_experiment, run_theorem2_experiment, sweep_dim_multiplier, ProjectionMode,
    SweepReport, Theorem1Config, Theorem2Config,
};
use fmmc_lab::spectral::{fmmc_solve, sym_eigen, FmmcConfig};
use nalgebra::DMatrix;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CORPUS_SEED: u64 = 0x5eed_0001;
const CORPUS_SIZE: usize = 200;
const SWEEP: [f64; 7] = [0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn within(elapsed: Duration, limit_secs: u64) -> bool {
    elapsed <= Duration::from_secs(limit_secs)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut worst_gap = 0.0_f64;
    let mut worst_oracle = 0.0_f64;
    for w in common::corpus(CORPUS_SEED, CORPUS_SIZE) {
        let (frac, report) = fractional_matching(&w);
        let (cover, _) = min_vertex_cover_lp(&w);
        let oracle = fractional_matching_oracle(&w).unwrap();
        let scale = 1.0 + frac.total_weight;
        worst_gap = worst_gap.max((frac.total_weight - cover.total).abs() / scale);
        worst_oracle = worst_oracle
            .max((frac.total_weight - oracle).abs() / scale)
            .max((cover.total - oracle).abs() / scale);
        if report.status != fmmc_lab::matching::LpStatus::Optimal {
            return outcome(false, "LP solve not certified optimal");
        }
    }
    let t = start.elapsed();
    outcome(
        worst_gap <= 1e-8 && worst_oracle <= 1e-8 && within(t, 30),
        format!("max duality gap {worst_gap:.2e}, max oracle gap {worst_oracle:.2e}, {t:.2?}"),
    )
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut mismatches = 0;
    let mut above_lp = 0;
    for w in common::corpus(CORPUS_SEED, CORPUS_SIZE) {
        let exact = max_matching_exact(&w).unwrap().value;
        if exact != common::brute_force_matching(&w) {
            mismatches += 1;
        }
        if exact > fractional_matching(&w).0.total_weight + 1e-8 {
            above_lp += 1;
        }
    }
    let t = start.elapsed();
    outcome(
        mismatches == 0 && above_lp == 0 && within(t, 60),
        format!("{mismatches} brute-force mismatches, {above_lp} above LP, {t:.2?}"),
    )
}

fn criterion_3() -> Outcome {
    let mut failures = 0;
    let mut tightest = f64::INFINITY;
    for w in common::corpus(CORPUS_SEED, CORPUS_SIZE) {
        let bound = w.total_edge_weight() / (w.graph().max_degree() + 1) as f64;
        let value = fractional_matching(&w).0.total_weight;
        if value < bound {
            failures += 1;
        }
        if bound > 0.0 {
            tightest = tightest.min(value / bound);
        }
    }
    outcome(failures == 0, format!("{failures} failures, min value/bound {tightest:.4}"))
}

fn theorem1_base() -> Theorem1Config {
    Theorem1Config {
        q: 2.0,
        eps: 0.09,
        dim_multiplier: 1.0,
        distribution: Distribution::Gaussian,
        trials: 200,
        seed: 2024,
        goodness_trials: 10_000,
        projection: ProjectionMode::Random,
    }
}

fn criterion_4(sweep: &SweepReport, elapsed: Duration) -> Outcome {
    let (g, f) = gen_star_union(64, 2).unwrap();
    let control = run_theorem1_experiment(
        &g,
        &f,
        &Theorem1Config {
            trials: 200,
            projection: ProjectionMode::FixedDimension(1),
            ..theorem1_base()
        },
    )
    .unwrap();
    let Some(chosen) = &sweep.chosen else {
        return outcome(false, format!("no multiplier <= 8 reached 0.95: {:?}", sweep.scanned));
    };
    let pass = chosen.success_matching >= 0.95
        && chosen.success_fractional >= 0.95
        && chosen.success_pair_total >= 0.95
        && chosen.success_all >= 0.95
        && control.success_fractional < 0.95
        && within(elapsed, 300);
    outcome(
        pass,
        format!(
            "multiplier {} (d = {}): matching {:.3}, fractional {:.3}, pair {:.3}, joint {:.3}; \
             d = 1 control fractional {:.3}; scanned {:?}; {elapsed:.2?}",
            sweep.chosen_multiplier.unwrap(),
            chosen.d,
            chosen.success_matching,
            chosen.success_fractional,
            chosen.success_pair_total,
            chosen.success_all,
            control.success_fractional,
            sweep.scanned,
        ),
    )
}

fn criterion_5(sweep: &SweepReport) -> Outcome {
    let Some(chosen) = &sweep.chosen else {
        return outcome(false, "criterion 4 produced no run");
    };
    let flagged = chosen.trials.iter().filter(|t| t.event_g).count();
    outcome(
        chosen.guarantee_violations == 0 && flagged > 0,
        format!(
            "{flagged} event-G trials, {} violations (δ̂ ≤ {:.2e}, ρ̂ ≤ {:.2e})",
            chosen.guarantee_violations, chosen.delta_upper, chosen.rho_upper
        ),
    )
}

fn timed_gap(g: &Graph) -> (f64, Duration) {
    let start = Instant::now();
    let r = fmmc_solve(g, &FmmcConfig::default()).unwrap();
    (r.summary.gap, start.elapsed())
}

fn criterion_6() -> Outcome {
    let p3 = gen_family(Family::Path, 3).unwrap();
    let k2 = gen_family(Family::Path, 2).unwrap();
    let k5 = gen_family(Family::Complete, 5).unwrap();
    let c4 = gen_family(Family::Cycle, 4).unwrap();
    // Edges (0,1), (0,3), (1,2), (2,3): opposite edges share a class.
    let class: Vec<usize> = c4
        .edges()
        .iter()
        .map(|&(u, v)| usize::from(!(u == 0 && v == 1 || u == 2 && v == 3)))
        .collect();
    let c4_oracle = common::two_class_grid_gap(&c4, &class, 1e-3);
    let p3_oracle = common::two_class_grid_gap(&p3, &[0, 1], 1e-3);

    let mut pass = true;
    let mut parts = Vec::new();
    for (name, g, target, tol) in [
        ("P3", &p3, 0.5, 1e-3),
        ("K2", &k2, 1.0, 1e-3),
        ("K5", &k5, 1.0, 1e-3),
        ("C4", &c4, c4_oracle, 2e-3),
    ] {
        let (gap, t) = timed_gap(g);
        pass &= (gap - target).abs() <= tol && within(t, 30);
        parts.push(format!("{name} {gap:.6} vs {target:.6} ({t:.2?})"));
    }
    pass &= (p3_oracle - 0.5).abs() <= 1e-3;
    parts.push(format!("P3 grid {p3_oracle:.6}"));
    outcome(pass, parts.join(", "))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let n = 30;
    let mut worst_trace = 0.0_f64;
    let mut worst_recon = 0.0_f64;
    for _ in 0..100 {
        let mut a = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let x = rng.random_range(-1.0..1.0);
                a[(i, j)] = x;
                a[(j, i)] = x;
            }
        }
        let e = sym_eigen(&a).unwrap();
        let sum: f64 = e.values.iter().sum();
        worst_trace = worst_trace.max((sum - a.trace()).abs());
        let lambda = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(e.values.clone()));
        let recon = &e.vectors * lambda * e.vectors.transpose();
        worst_recon = worst_recon.max((recon - &a).norm() / a.norm());
    }
    outcome(
        worst_trace <= 1e-8 * n as f64 && worst_recon <= 1e-8,
        format!("max |Σλ − tr| {worst_trace:.2e}, max reconstruction {worst_recon:.2e}"),
    )
}

fn criterion_8() -> Outcome {
    let c6 = gen_family(Family::Cycle, 6).unwrap();
    let k4 = gen_family(Family::Complete, 4).unwrap();
    let two_edges = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
    let values = [
        vertex_conductance_exact(&c6).unwrap().psi_star,
        vertex_conductance_exact(&k4).unwrap().psi_star,
        vertex_conductance_exact(&two_edges).unwrap().psi_star,
    ];
    let expected = [Ratio::new(2, 3), Ratio::new(1, 1), Ratio::new(0, 1)];

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let edges: Vec<(usize, usize)> = (0..20)
        .flat_map(|u| (u + 1..20).map(move |v| (u, v)))
        .filter(|_| rng.random_bool(0.25))
        .collect();
    let g20 = Graph::new(20, edges).unwrap();
    let start = Instant::now();
    let psi20 = vertex_conductance_exact(&g20).unwrap().psi_star;
    let t = start.elapsed();
    outcome(
        values == expected && within(t, 60),
        format!("C6 {}, K4 {}, 2K2 {}, n=20 random {} in {t:.2?}", values[0], values[1], values[2], psi20),
    )
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let g = gen_family(Family::Cycle, 8).unwrap();
    let f = Embedding::standard_basis(8);
    let report = run_theorem2_experiment(
        &g,
        &f,
        &Theorem2Config {
            eps: 0.01,
            dim_multiplier: 1.0,
            distribution: Distribution::Gaussian,
            trials: 100,
            seed: 2025,
            goodness_trials: 10_000,
            projection: ProjectionMode::Random,
        },
    )
    .unwrap();
    let t = start.elapsed();
    outcome(
        report.within_factor_two >= 0.95 && report.pair_total_violations_under_g == 0 && within(t, 300),
        format!(
            "d = {}, λ(F) = {:.6}, within factor two {:.3}, max ratio {:.4}, event G {:.3}, \
             pair-total violations under G {}, {t:.2?}",
            report.d,
            report.base.value,
            report.within_factor_two,
            report.max_ratio,
            report.event_g_frequency,
            report.pair_total_violations_under_g
        ),
    )
}

fn run_cli(args: &[&str], dir: &Path, threads: &str) -> Vec<Vec<u8>> {
    let status = Command::new(env!("CARGO_BIN_EXE_fmmc-lab"))
        .args(args)
        .current_dir(dir)
        .env("FMMC_LAB_THREADS", threads)
        .status()
        .expect("binary runs");
    assert!(status.success(), "fmmc-lab {args:?} failed");
    ["out.json", "out.csv"]
        .iter()
        .filter_map(|f| std::fs::read(dir.join(f)).ok())
        .collect()
}

fn criterion_10() -> Outcome {
    let invocations: [&[&str]; 5] = [
        &["conductance", "--family", "cycle:8", "--out", "out.json"],
        &["fmmc", "--family", "hypercube:3", "--out", "out.json", "--csv", "out.csv"],
        &[
            "theorem1", "--star-union", "4:2", "--trials", "20", "--goodness-trials", "500",
            "--seed", "9", "--out", "out.json", "--csv", "out.csv",
        ],
        &[
            "theorem2", "--family", "cycle:6", "--trials", "10", "--goodness-trials", "500",
            "--seed", "9", "--dimension", "200", "--out", "out.json", "--csv", "out.csv",
        ],
        &[
            "pipeline", "--family", "path:5", "--trials", "5", "--goodness-trials", "500",
            "--seed", "9", "--out", "out.json", "--csv", "out.csv",
        ],
    ];
    let mut identical = 0;
    for args in invocations {
        let runs: Vec<Vec<Vec<u8>>> = ["1", "1", "4"]
            .iter()
            .map(|threads| {
                let dir = tempfile::tempdir().unwrap();
                run_cli(args, dir.path(), threads)
            })
            .collect();
        if !runs[0].is_empty() && runs.iter().all(|r| *r == runs[0]) {
            identical += 1;
        }
    }
    outcome(
        identical == invocations.len(),
        format!("{identical}/{} invocations byte-identical across repeats and thread counts", invocations.len()),
    )
}

fn criterion_11() -> Outcome {
    let graphs = [
        ("C6", gen_family(Family::Cycle, 6).unwrap()),
        ("C8", gen_family(Family::Cycle, 8).unwrap()),
        ("K5", gen_family(Family::Complete, 5).unwrap()),
        ("Q3", gen_family(Family::Hypercube, 3).unwrap()),
        ("P6", gen_family(Family::Path, 6).unwrap()),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, g) in &graphs {
        let psi = vertex_conductance_exact(g).unwrap().value();
        let chain = fmmc_solve(g, &FmmcConfig::default()).unwrap().matrix;
        let r = bound_chain_report_with(g, psi, &chain).unwrap();
        let Some(c) = r.c_meas.filter(|c| c.is_finite() && *c > 0.0) else {
            pass = false;
            parts.push(format!("{name}: c_meas missing"));
            continue;
        };
        let lower = r.psi_star.powi(2) / (c * fmmc_lab::conductance::log_floor(r.delta as f64));
        pass &= r.gap_lower >= lower * (1.0 - 1e-12);
        parts.push(format!(
            "{name}: γ {:.4}, Ψ* {:.4}, c_meas {:.4}, γ/Ψ* {:.4}{}",
            r.gap_lower,
            r.psi_star,
            c,
            r.upper_ratio.unwrap_or(f64::NAN),
            if r.upper_anomaly { " (above 4Ψ*)" } else { "" }
        ));
    }
    outcome(pass, parts.join("; "))
}

fn main() {
    let start = Instant::now();
    let (g, f) = gen_star_union(8, 4).unwrap();
    let sweep_start = Instant::now();
    let sweep = sweep_dim_multiplier(&g, &f, &theorem1_base(), &SWEEP, 0.95).unwrap();
    let sweep_time = sweep_start.elapsed();

    let results = [
        ("1 LP duality and half-integral oracle", criterion_1()),
        ("2 exact matcher vs brute force", criterion_2()),
        ("3 matching decomposition bound", criterion_3()),
        ("4 projection preserves matchings", criterion_4(&sweep, sweep_time)),
        ("5 event-G conditional guarantee", criterion_5(&sweep)),
        ("6 FMMC vs grid oracles", criterion_6()),
        ("7 eigensolver", criterion_7()),
        ("8 exhaustive conductance", criterion_8()),
        ("9 λ ratio under projection", criterion_9()),
        ("10 CLI determinism", criterion_10()),
        ("11 bound-chain diagnostics", criterion_11()),
    ];
    let mut failed = 0;
    for (name, o) in &results {
        println!("criterion {name}: {} ({})", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.pass);
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.2?}",
        results.len() - failed,
        start.elapsed()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
