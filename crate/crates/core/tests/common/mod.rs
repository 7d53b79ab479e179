#![allow(dead_code)]

use fmmc_lab::graph::{Graph, WeightedGraph};
use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random weighted graphs with `n ≤ 12`, `|E| ≤ 13` and weights in (0, 1].
pub fn corpus(seed: u64, count: usize) -> Vec<WeightedGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.random_range(2..=12);
            let mut pairs: Vec<(usize, usize)> =
                (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            pairs.shuffle(&mut rng);
            let m = rng.random_range(0..=pairs.len().min(13));
            pairs.truncate(m);
            let weights = (0..m).map(|_| 1.0 - rng.random::<f64>()).collect();
            WeightedGraph::new(Graph::new(n, pairs).unwrap(), weights, 1.0).unwrap()
        })
        .collect()
}

/// Maximum matching weight by enumerating every edge subset.
pub fn brute_force_matching(w: &WeightedGraph) -> f64 {
    let edges = w.graph().edges();
    let m = edges.len();
    assert!(m <= 20);
    let mut best = 0.0;
    for mask in 0u32..(1 << m) {
        let mut used = 0u64;
        let mut ok = true;
        let mut value = 0.0;
        for (i, &(u, v)) in edges.iter().enumerate() {
            if mask >> i & 1 == 1 {
                if used >> u & 1 == 1 || used >> v & 1 == 1 {
                    ok = false;
                    break;
                }
                used |= 1 << u | 1 << v;
                value += w.weights()[i];
            }
        }
        if ok && value > best {
            best = value;
        }
    }
    best
}

/// SLEM of `I − Σ p_e (e_u − e_v)(e_u − e_v)ᵀ`, via nalgebra.
pub fn slem_of_edge_values(g: &Graph, values: &[f64]) -> f64 {
    let n = g.n();
    let mut p = DMatrix::<f64>::identity(n, n);
    for (&(u, v), &x) in g.edges().iter().zip(values) {
        p[(u, v)] += x;
        p[(v, u)] += x;
        p[(u, u)] -= x;
        p[(v, v)] -= x;
    }
    let mut eig: Vec<f64> = p.symmetric_eigen().eigenvalues.iter().copied().collect();
    eig.sort_by(|a, b| b.total_cmp(a));
    eig[1..].iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

/// Best spectral gap over a square grid of two edge classes: edges with
/// `class[e] == 0` get value `a`, the others `b`. Infeasible points (negative
/// diagonal) are skipped.
pub fn two_class_grid_gap(g: &Graph, class: &[usize], step: f64) -> f64 {
    let steps = (1.0 / step).round() as usize;
    let mut best = 0.0_f64;
    for i in 0..=steps {
        for j in 0..=steps {
            let (a, b) = (i as f64 * step, j as f64 * step);
            let values: Vec<f64> = class.iter().map(|&c| if c == 0 { a } else { b }).collect();
            let mut load = vec![0.0; g.n()];
            for (&(u, v), &x) in g.edges().iter().zip(&values) {
                load[u] += x;
                load[v] += x;
            }
            if load.iter().any(|&l| l > 1.0 + 1e-12) {
                continue;
            }
            best = best.max(1.0 - slem_of_edge_values(g, &values));
        }
    }
    best
}

/// Euclidean projection onto the feasible chains of `g` by enumerating active
/// sets of the nonnegativity constraints and solving each KKT system.
///
/// Variables are the diagonal entries followed by the edge values; edge values
/// carry weight 2 in the objective because they appear twice in the matrix.
pub fn active_set_projection(g: &Graph, m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = g.n();
    let edges = g.edges();
    let k = n + edges.len();
    let mut target = Vec::with_capacity(k);
    let mut cost = Vec::with_capacity(k);
    for v in 0..n {
        target.push(m[(v, v)]);
        cost.push(1.0);
    }
    for &(u, v) in edges {
        target.push(0.5 * (m[(u, v)] + m[(v, u)]));
        cost.push(2.0);
    }
    // Row-sum constraint matrix.
    let mut a = DMatrix::<f64>::zeros(n, k);
    for v in 0..n {
        a[(v, v)] = 1.0;
    }
    for (i, &(u, v)) in edges.iter().enumerate() {
        a[(u, n + i)] = 1.0;
        a[(v, n + i)] = 1.0;
    }

    let mut best: Option<(f64, Vec<f64>)> = None;
    for zero_mask in 0u32..(1 << k) {
        let free: Vec<usize> = (0..k).filter(|i| zero_mask >> i & 1 == 0).collect();
        let f = free.len();
        let mut kkt = DMatrix::<f64>::zeros(f + n, f + n);
        let mut rhs = DVector::<f64>::zeros(f + n);
        for (r, &i) in free.iter().enumerate() {
            kkt[(r, r)] = 2.0 * cost[i];
            rhs[r] = 2.0 * cost[i] * target[i];
            for c in 0..n {
                kkt[(r, f + c)] = a[(c, i)];
                kkt[(f + c, r)] = a[(c, i)];
            }
        }
        for c in 0..n {
            rhs[f + c] = 1.0;
        }
        let Some(sol) = kkt.lu().solve(&rhs) else { continue };
        if sol.iter().any(|x| !x.is_finite()) {
            continue;
        }
        let mut x = vec![0.0; k];
        for (r, &i) in free.iter().enumerate() {
            x[i] = sol[r];
        }
        let nu = sol.rows(f, n);
        let primal_ok = x.iter().all(|&v| v >= -1e-10)
            && (0..n).all(|c| ((0..k).map(|i| a[(c, i)] * x[i]).sum::<f64>() - 1.0).abs() < 1e-9);
        // Multipliers of the active bounds must be nonnegative.
        let dual_ok = (0..k).filter(|i| zero_mask >> i & 1 == 1).all(|i| {
            let grad = -2.0 * cost[i] * target[i];
            let mu = grad + (0..n).map(|c| a[(c, i)] * nu[c]).sum::<f64>();
            mu >= -1e-9
        });
        if !(primal_ok && dual_ok) {
            continue;
        }
        let obj: f64 = (0..k).map(|i| cost[i] * (x[i] - target[i]).powi(2)).sum();
        if best.as_ref().is_none_or(|(b, _)| obj < *b) {
            best = Some((obj, x));
        }
    }
    let (_, x) = best.expect("projection problem is feasible");
    let mut out = DMatrix::<f64>::zeros(n, n);
    for v in 0..n {
        out[(v, v)] = x[v];
    }
    for (i, &(u, v)) in edges.iter().enumerate() {
        out[(u, v)] = x[n + i];
        out[(v, u)] = x[n + i];
    }
    out
}
