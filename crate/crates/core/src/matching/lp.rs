use serde::{Deserialize, Serialize};

use super::simplex::{self, LinearProgram, Outcome, Row, RowKind};
use crate::graph::{FractionalMatching, VertexCover, WeightedGraph};

/// Relative duality-gap tolerance for declaring a solve optimal.
pub const DUALITY_TOL: f64 = 1e-8;
/// Relative feasibility tolerance for primal and dual certificates.
pub const FEASIBILITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LpStatus {
    Optimal,
    InfeasibleNumerics,
}

/// Duality certificate for one matching/cover LP solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpSolveReport {
    #[serde(rename = "primal")]
    pub primal_value: f64,
    #[serde(rename = "dual")]
    pub dual_value: f64,
    pub iterations: usize,
    pub status: LpStatus,
}

fn vertex_rows(w: &WeightedGraph) -> Vec<Row> {
    let g = w.graph();
    let mut rows: Vec<Row> = (0..g.n())
        .map(|_| Row {
            coeffs: vec![0.0; g.num_edges()],
            kind: RowKind::Le,
            rhs: 1.0,
        })
        .collect();
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        rows[u].coeffs[e] = 1.0;
        rows[v].coeffs[e] = 1.0;
    }
    rows
}

fn certify(
    w: &WeightedGraph,
    h: &FractionalMatching,
    g: &VertexCover,
    iterations: usize,
) -> LpSolveReport {
    let scale = 1.0 + w.weights().iter().fold(0.0f64, |m, x| m.max(*x));
    let feasible = h.max_violation(w.graph()) <= FEASIBILITY_TOL
        && g.max_violation(w) <= FEASIBILITY_TOL * scale;
    let gap_ok = (h.total_weight - g.total).abs() <= DUALITY_TOL * (1.0 + h.total_weight.abs());
    LpSolveReport {
        primal_value: h.total_weight,
        dual_value: g.total,
        iterations,
        status: if feasible && gap_ok {
            LpStatus::Optimal
        } else {
            LpStatus::InfeasibleNumerics
        },
    }
}

fn matching_from(w: &WeightedGraph, values: Vec<f64>) -> FractionalMatching {
    let values: Vec<f64> = values.into_iter().map(|h| h.clamp(0.0, 1.0)).collect();
    let total_weight = values.iter().zip(w.weights()).map(|(h, x)| h * x).sum();
    FractionalMatching {
        values,
        total_weight,
    }
}

fn cover_from(values: Vec<f64>) -> VertexCover {
    let values: Vec<f64> = values.into_iter().map(|g| g.max(0.0)).collect();
    let total = values.iter().sum();
    VertexCover { values, total }
}

fn failure(w: &WeightedGraph, iterations: usize) -> (FractionalMatching, VertexCover, LpSolveReport) {
    let m = w.graph().num_edges();
    let n = w.graph().n();
    (
        FractionalMatching {
            values: vec![0.0; m],
            total_weight: 0.0,
        },
        VertexCover {
            values: vec![0.0; n],
            total: 0.0,
        },
        LpSolveReport {
            primal_value: f64::NAN,
            dual_value: f64::NAN,
            iterations,
            status: LpStatus::InfeasibleNumerics,
        },
    )
}

/// Solves `max Σ h(e) w(e)` over fractional matchings; the simplex duals give
/// the vertex cover used as the optimality certificate.
pub(crate) fn solve_matching_primal(
    w: &WeightedGraph,
) -> (FractionalMatching, VertexCover, LpSolveReport) {
    let lp = LinearProgram {
        objective: w.weights().to_vec(),
        rows: vertex_rows(w),
    };
    match simplex::solve(&lp) {
        Outcome::Optimal(s) => {
            let h = matching_from(w, s.x);
            let g = cover_from(s.duals);
            let report = certify(w, &h, &g, s.iterations);
            (h, g, report)
        }
        Outcome::IterationLimit(it) => failure(w, it),
        Outcome::Infeasible | Outcome::Unbounded => failure(w, 0),
    }
}

/// Maximum-weight fractional matching: `h(e) ∈ [0,1]`, `Σ_{e∋v} h(e) ≤ 1`.
pub fn fractional_matching(w: &WeightedGraph) -> (FractionalMatching, LpSolveReport) {
    let (h, _, report) = solve_matching_primal(w);
    (h, report)
}

/// Minimum fractional vertex cover `min Σ g(u)` s.t. `g(u) + g(v) ≥ w(u,v)`,
/// `g ≥ 0`, solved as its own LP. The row multipliers recover a fractional
/// matching, which certifies the value by strong duality.
pub fn min_vertex_cover_lp(w: &WeightedGraph) -> (VertexCover, LpSolveReport) {
    let g = w.graph();
    let rows = g
        .edges()
        .iter()
        .zip(w.weights())
        .map(|(&(u, v), &wt)| {
            let mut coeffs = vec![0.0; g.n()];
            coeffs[u] = 1.0;
            coeffs[v] = 1.0;
            Row {
                coeffs,
                kind: RowKind::Ge,
                rhs: wt,
            }
        })
        .collect();
    let lp = LinearProgram {
        objective: vec![-1.0; g.n()],
        rows,
    };
    match simplex::solve(&lp) {
        Outcome::Optimal(s) => {
            let cover = cover_from(s.x);
            let h = matching_from(w, s.duals.iter().map(|y| -y).collect());
            let report = certify(w, &h, &cover, s.iterations);
            (cover, report)
        }
        Outcome::IterationLimit(it) => {
            let (_, c, r) = failure(w, it);
            (c, r)
        }
        Outcome::Infeasible | Outcome::Unbounded => {
            let (_, c, r) = failure(w, 0);
            (c, r)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_family, Family, Graph};

    fn unit(g: Graph) -> WeightedGraph {
        let m = g.num_edges();
        WeightedGraph::new(g, vec![1.0; m], 2.0).unwrap()
    }

    #[test]
    fn single_edge() {
        let w = unit(Graph::new(2, [(0, 1)]).unwrap());
        let (h, r) = fractional_matching(&w);
        assert_eq!(h.values, vec![1.0]);
        assert_eq!(r.status, LpStatus::Optimal);
        assert!((r.primal_value - 1.0).abs() < 1e-12);
        let (c, r) = min_vertex_cover_lp(&w);
        assert!((c.total - 1.0).abs() < 1e-12);
        assert_eq!(r.status, LpStatus::Optimal);
    }

    #[test]
    fn triangle_is_half_integral() {
        let w = unit(gen_family(Family::Cycle, 3).unwrap());
        let (h, r) = fractional_matching(&w);
        assert!((h.total_weight - 1.5).abs() < 1e-12);
        assert!(h.values.iter().all(|x| (x - 0.5).abs() < 1e-12));
        assert!((r.dual_value - 1.5).abs() < 1e-12);
        let (c, r) = min_vertex_cover_lp(&w);
        assert!(c.values.iter().all(|x| (x - 0.5).abs() < 1e-12));
        assert!((r.primal_value - 1.5).abs() < 1e-12);
    }

    #[test]
    fn star_is_capped_at_centre() {
        let w = unit(Graph::new(4, [(0, 1), (0, 2), (0, 3)]).unwrap());
        let (h, r) = fractional_matching(&w);
        assert!((h.total_weight - 1.0).abs() < 1e-12);
        assert_eq!(r.status, LpStatus::Optimal);
    }

    #[test]
    fn empty_and_zero_weight_graphs() {
        let w = unit(Graph::new(3, []).unwrap());
        let (c, r) = min_vertex_cover_lp(&w);
        assert_eq!(c.values, vec![0.0; 3]);
        assert_eq!(c.total, 0.0);
        assert_eq!(r.status, LpStatus::Optimal);

        let g = gen_family(Family::Complete, 4).unwrap();
        let w = WeightedGraph::new(g, vec![0.0; 6], 2.0).unwrap();
        assert_eq!(fractional_matching(&w).0.total_weight, 0.0);
        assert_eq!(min_vertex_cover_lp(&w).0.total, 0.0);
    }

    #[test]
    fn report_json_field_names() {
        let w = unit(Graph::new(2, [(0, 1)]).unwrap());
        let json = serde_json::to_value(fractional_matching(&w).1).unwrap();
        let keys: Vec<&str> = json.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(keys.len(), 4);
        for k in ["primal", "dual", "iterations", "status"] {
            assert!(keys.contains(&k), "missing {k}");
        }
        assert_eq!(json["status"], "optimal");
    }
}
