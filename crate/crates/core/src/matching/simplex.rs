//! Dense two-phase tableau simplex.
//!
//! Pricing is Dantzig (largest reduced cost, lowest index on ties) until a run
//! of degenerate pivots exceeds [`DEGENERATE_PIVOT_LIMIT`], after which the
//! phase continues under Bland's rule. The ratio test breaks ties by the
//! lowest basic variable index.

pub(crate) const REDUCED_COST_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-11;
const DEGENERATE_PIVOT_LIMIT: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum RowKind {
    Le,
    Ge,
}

#[derive(Debug, Clone)]
pub(crate) struct Row {
    pub coeffs: Vec<f64>,
    pub kind: RowKind,
    pub rhs: f64,
}

/// `maximize c·x` subject to the rows and `x ≥ 0`.
#[derive(Debug, Clone)]
pub(crate) struct LinearProgram {
    pub objective: Vec<f64>,
    pub rows: Vec<Row>,
}

#[derive(Debug, Clone)]
pub(crate) struct Solution {
    pub x: Vec<f64>,
    /// Multipliers for each row as written (the optimal dual solution).
    pub duals: Vec<f64>,
    pub iterations: usize,
}

#[derive(Debug, Clone)]
pub(crate) enum Outcome {
    Optimal(Solution),
    Infeasible,
    Unbounded,
    IterationLimit(usize),
}

struct Tableau {
    // m rows of width `cols + 1`; the last entry is the basic value.
    a: Vec<Vec<f64>>,
    basis: Vec<usize>,
    cols: usize,
    iterations: usize,
    limit: usize,
}

enum PhaseEnd {
    Optimal,
    Unbounded,
    Limit,
}

impl Tableau {
    fn reduced_costs(&self, cost: &[f64]) -> Vec<f64> {
        let mut r = cost.to_vec();
        for (row, &b) in self.a.iter().zip(&self.basis) {
            let cb = cost[b];
            if cb != 0.0 {
                for (rj, aj) in r.iter_mut().zip(row) {
                    *rj -= cb * aj;
                }
            }
        }
        r
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let width = self.cols + 1;
        let p = self.a[pr][pc];
        for j in 0..width {
            self.a[pr][j] /= p;
        }
        self.a[pr][pc] = 1.0;
        let pivot_row = self.a[pr].clone();
        for (i, row) in self.a.iter_mut().enumerate() {
            if i == pr {
                continue;
            }
            let f = row[pc];
            if f != 0.0 {
                for j in 0..width {
                    row[j] -= f * pivot_row[j];
                }
                row[pc] = 0.0;
            }
        }
        self.basis[pr] = pc;
    }

    fn run_phase(&mut self, cost: &[f64], allowed: &[bool]) -> PhaseEnd {
        let scale = cost.iter().fold(0.0f64, |m, c| m.max(c.abs())).max(f64::MIN_POSITIVE);
        let tol = REDUCED_COST_TOL * scale;
        let mut degenerate_run = 0usize;
        let mut bland = false;
        // Reduced costs are maintained incrementally as an extra tableau row.
        let mut r = self.reduced_costs(cost);
        loop {
            if self.iterations >= self.limit {
                return PhaseEnd::Limit;
            }
            let entering = if bland {
                (0..self.cols).find(|&j| allowed[j] && r[j] > tol)
            } else {
                let mut best: Option<usize> = None;
                for j in 0..self.cols {
                    if allowed[j] && r[j] > tol && best.is_none_or(|b| r[j] > r[b]) {
                        best = Some(j);
                    }
                }
                best
            };
            let Some(pc) = entering else {
                return PhaseEnd::Optimal;
            };
            let mut leave: Option<(usize, f64)> = None;
            for (i, row) in self.a.iter().enumerate() {
                let aij = row[pc];
                if aij > PIVOT_TOL {
                    let ratio = row[self.cols].max(0.0) / aij;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((k, best)) => {
                            let tie = (ratio - best).abs() <= 1e-12 * (1.0 + best.abs());
                            if (tie && self.basis[i] < self.basis[k]) || (!tie && ratio < best) {
                                Some((i, ratio))
                            } else {
                                Some((k, best))
                            }
                        }
                    };
                }
            }
            let Some((pr, step)) = leave else {
                return PhaseEnd::Unbounded;
            };
            if step <= 1e-14 {
                degenerate_run += 1;
                if degenerate_run > DEGENERATE_PIVOT_LIMIT {
                    bland = true;
                }
            } else {
                degenerate_run = 0;
            }
            let f = r[pc];
            self.pivot(pr, pc);
            for (rj, aj) in r.iter_mut().zip(&self.a[pr]) {
                *rj -= f * aj;
            }
            r[pc] = 0.0;
            self.iterations += 1;
        }
    }
}

pub(crate) fn solve(lp: &LinearProgram) -> Outcome {
    let n = lp.objective.len();
    let m = lp.rows.len();
    // Normalize to nonnegative right-hand sides.
    let mut negated = vec![false; m];
    let rows: Vec<Row> = lp
        .rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            if row.rhs < 0.0 {
                negated[i] = true;
                Row {
                    coeffs: row.coeffs.iter().map(|c| -c).collect(),
                    kind: match row.kind {
                        RowKind::Le => RowKind::Ge,
                        RowKind::Ge => RowKind::Le,
                    },
                    rhs: -row.rhs,
                }
            } else {
                row.clone()
            }
        })
        .collect();

    // Column layout: structural | one slack/surplus per row | artificials for Ge rows.
    let n_ge = rows.iter().filter(|r| r.kind == RowKind::Ge).count();
    let cols = n + m + n_ge;
    let mut a = vec![vec![0.0; cols + 1]; m];
    let mut basis = vec![0; m];
    let mut unit_col = vec![0; m];
    let mut next_art = n + m;
    for (i, row) in rows.iter().enumerate() {
        a[i][..n].copy_from_slice(&row.coeffs);
        a[i][cols] = row.rhs;
        match row.kind {
            RowKind::Le => {
                a[i][n + i] = 1.0;
                basis[i] = n + i;
                unit_col[i] = n + i;
            }
            RowKind::Ge => {
                a[i][n + i] = -1.0;
                a[i][next_art] = 1.0;
                basis[i] = next_art;
                unit_col[i] = next_art;
                next_art += 1;
            }
        }
    }
    let mut t = Tableau {
        a,
        basis,
        cols,
        iterations: 0,
        limit: 1000 + 50 * (m + cols),
    };
    let is_art = |j: usize| j >= n + m;

    if n_ge > 0 {
        let phase1_cost: Vec<f64> = (0..cols).map(|j| if is_art(j) { -1.0 } else { 0.0 }).collect();
        match t.run_phase(&phase1_cost, &vec![true; cols]) {
            PhaseEnd::Limit => return Outcome::IterationLimit(t.iterations),
            PhaseEnd::Unbounded => return Outcome::Infeasible,
            PhaseEnd::Optimal => {}
        }
        let rhs_scale = rows.iter().fold(1.0f64, |s, r| s.max(r.rhs));
        let infeasibility: f64 = t
            .a
            .iter()
            .zip(&t.basis)
            .filter(|(_, &b)| is_art(b))
            .map(|(row, _)| row[cols])
            .sum();
        if infeasibility > 1e-9 * rhs_scale {
            return Outcome::Infeasible;
        }
        // Drive zero-level artificials out of the basis where possible.
        for i in 0..m {
            if is_art(t.basis[i]) {
                if let Some(j) = (0..n + m).find(|&j| t.a[i][j].abs() > 1e-9) {
                    t.pivot(i, j);
                }
            }
        }
    }

    let mut cost = vec![0.0; cols];
    cost[..n].copy_from_slice(&lp.objective);
    let allowed: Vec<bool> = (0..cols).map(|j| !is_art(j)).collect();
    match t.run_phase(&cost, &allowed) {
        PhaseEnd::Limit => return Outcome::IterationLimit(t.iterations),
        PhaseEnd::Unbounded => return Outcome::Unbounded,
        PhaseEnd::Optimal => {}
    }

    let mut x = vec![0.0; n];
    for (row, &b) in t.a.iter().zip(&t.basis) {
        if b < n {
            x[b] = row[cols].max(0.0);
        }
    }
    let duals = (0..m)
        .map(|i| {
            let y: f64 = t
                .a
                .iter()
                .zip(&t.basis)
                .map(|(row, &b)| cost[b] * row[unit_col[i]])
                .sum();
            if negated[i] {
                -y
            } else {
                y
            }
        })
        .collect();
    Outcome::Optimal(Solution {
        x,
        duals,
        iterations: t.iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn le(coeffs: &[f64], rhs: f64) -> Row {
        Row {
            coeffs: coeffs.to_vec(),
            kind: RowKind::Le,
            rhs,
        }
    }

    fn ge(coeffs: &[f64], rhs: f64) -> Row {
        Row {
            coeffs: coeffs.to_vec(),
            kind: RowKind::Ge,
            rhs,
        }
    }

    fn objective(lp: &LinearProgram, s: &Solution) -> f64 {
        s.x.iter().zip(&lp.objective).map(|(x, c)| x * c).sum()
    }

    fn optimal(lp: &LinearProgram) -> Solution {
        match solve(lp) {
            Outcome::Optimal(s) => s,
            other => panic!("expected optimum, got {other:?}"),
        }
    }

    #[test]
    fn textbook_maximization() {
        // max 3x + 5y, x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18 → (2, 6), value 36, duals (0, 3/2, 1).
        let lp = LinearProgram {
            objective: vec![3.0, 5.0],
            rows: vec![le(&[1.0, 0.0], 4.0), le(&[0.0, 2.0], 12.0), le(&[3.0, 2.0], 18.0)],
        };
        let s = optimal(&lp);
        assert!((objective(&lp, &s) - 36.0).abs() < 1e-12);
        assert!((s.x[0] - 2.0).abs() < 1e-12 && (s.x[1] - 6.0).abs() < 1e-12);
        let expected = [0.0, 1.5, 1.0];
        for (d, e) in s.duals.iter().zip(expected) {
            assert!((d - e).abs() < 1e-12);
        }
    }

    #[test]
    fn two_phase_minimization() {
        // min x + y s.t. x + 2y ≥ 4, 3x + y ≥ 6 → (8/5, 6/5), value 14/5.
        let lp = LinearProgram {
            objective: vec![-1.0, -1.0],
            rows: vec![ge(&[1.0, 2.0], 4.0), ge(&[3.0, 1.0], 6.0)],
        };
        let s = optimal(&lp);
        assert!((objective(&lp, &s) + 2.8).abs() < 1e-12);
        assert!((s.x[0] - 1.6).abs() < 1e-12 && (s.x[1] - 1.2).abs() < 1e-12);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let lp = LinearProgram {
            objective: vec![1.0],
            rows: vec![le(&[1.0], 1.0), ge(&[1.0], 2.0)],
        };
        assert!(matches!(solve(&lp), Outcome::Infeasible));
        let lp = LinearProgram {
            objective: vec![1.0, 0.0],
            rows: vec![le(&[0.0, 1.0], 1.0)],
        };
        assert!(matches!(solve(&lp), Outcome::Unbounded));
    }

    #[test]
    fn negative_rhs_rows_are_flipped() {
        // max -x s.t. -x ≤ -3 → x = 3.
        let lp = LinearProgram {
            objective: vec![-1.0],
            rows: vec![le(&[-1.0], -3.0)],
        };
        let s = optimal(&lp);
        assert!((s.x[0] - 3.0).abs() < 1e-12);
        assert!((s.duals[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn highly_degenerate_problem_terminates() {
        // Many redundant constraints through the same vertex.
        let mut rows = Vec::new();
        for k in 1..40 {
            let k = k as f64;
            rows.push(le(&[k, 1.0, 1.0], k));
            rows.push(le(&[1.0, k, 1.0], k));
        }
        let lp = LinearProgram {
            objective: vec![1.0, 1.0, 1.0],
            rows,
        };
        let s = optimal(&lp);
        assert!(objective(&lp, &s) > 0.0);
    }
}
