//! Two-phase dense tableau simplex.
//!
//! Every variable is shifted or split so that the working problem is
//! `min c'ᵀx', A'x' = b', x' ≥ 0, b' ≥ 0`; finite upper bounds become explicit
//! rows. One artificial column per row starts the basis and is kept in the
//! tableau (barred from re-entering in phase two) so phase-one multipliers are
//! available for infeasibility certificates. Pricing is Dantzig's rule, which
//! falls back to Bland's rule after a run of degenerate pivots.
//!
//! The final basis is re-factorized from the original data to refine both the
//! primal point and the row duals before they are mapped back.

use super::dense;
use super::{Certificate, Limit, LpError, LpSolution, LpStatus, StandardLp};

const PIVOT_TOL: f64 = 1e-10;
const PRICE_TOL: f64 = 1e-10;
const MAX_ITERATIONS: usize = 50_000;
const DEGENERATE_STREAK_FOR_BLAND: usize = 30;

#[derive(Debug, Clone, Copy)]
enum RowOrigin {
    Eq(usize),
    Ineq(usize),
    UpperBound,
}

/// Original variable `j` equals `offset + Σ sign·x'[col]`.
#[derive(Debug, Clone)]
struct VarMap {
    offset: f64,
    cols: Vec<(usize, f64)>,
}

struct Standardized {
    /// Structural columns (shifted variables and slacks), artificials excluded.
    ncols: usize,
    matrix: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    cost: Vec<f64>,
    origin: Vec<RowOrigin>,
    row_sign: Vec<f64>,
    vars: Vec<VarMap>,
}

impl Standardized {
    fn from_lp(lp: &StandardLp) -> Self {
        let n = lp.num_vars();
        let mut ncols = 0usize;
        let mut vars = Vec::with_capacity(n);
        let mut cost = Vec::new();
        // (column, width) pairs for upper-bound rows: x'[col] + s = width
        let mut upper_rows = Vec::new();

        for (j, b) in lp.bounds.iter().enumerate() {
            let c = lp.objective[j];
            let map = match (b.lower, b.upper) {
                (Limit::Finite(lo), upper) => {
                    let col = ncols;
                    ncols += 1;
                    cost.push(c);
                    if let Limit::Finite(hi) = upper {
                        upper_rows.push((col, hi - lo));
                    }
                    VarMap {
                        offset: lo,
                        cols: vec![(col, 1.0)],
                    }
                }
                (Limit::Unbounded, Limit::Finite(hi)) => {
                    let col = ncols;
                    ncols += 1;
                    cost.push(-c);
                    VarMap {
                        offset: hi,
                        cols: vec![(col, -1.0)],
                    }
                }
                (Limit::Unbounded, Limit::Unbounded) => {
                    let col = ncols;
                    ncols += 2;
                    cost.push(c);
                    cost.push(-c);
                    VarMap {
                        offset: 0.0,
                        cols: vec![(col, 1.0), (col + 1, -1.0)],
                    }
                }
            };
            vars.push(map);
        }

        let slack_count = lp.ineq_rhs.len() + upper_rows.len();
        let total_cols = ncols + slack_count;
        cost.resize(total_cols, 0.0);

        let mut matrix = Vec::new();
        let mut rhs = Vec::new();
        let mut origin = Vec::new();

        let expand = |row: &[f64], rhs: f64| -> (Vec<f64>, f64) {
            let mut dense = vec![0.0; total_cols];
            let mut shifted = rhs;
            for (j, a) in row.iter().enumerate() {
                if *a == 0.0 {
                    continue;
                }
                shifted -= a * vars[j].offset;
                for &(col, sign) in &vars[j].cols {
                    dense[col] += a * sign;
                }
            }
            (dense, shifted)
        };

        for (r, row) in lp.eq_matrix.iter().enumerate() {
            let (dense, b) = expand(row, lp.eq_rhs[r]);
            matrix.push(dense);
            rhs.push(b);
            origin.push(RowOrigin::Eq(r));
        }
        let mut slack = ncols;
        for (r, row) in lp.ineq_matrix.iter().enumerate() {
            let (mut dense, b) = expand(row, lp.ineq_rhs[r]);
            dense[slack] = 1.0;
            slack += 1;
            matrix.push(dense);
            rhs.push(b);
            origin.push(RowOrigin::Ineq(r));
        }
        for (col, width) in upper_rows {
            let mut dense = vec![0.0; total_cols];
            dense[col] = 1.0;
            dense[slack] = 1.0;
            slack += 1;
            matrix.push(dense);
            rhs.push(width);
            origin.push(RowOrigin::UpperBound);
        }

        let mut row_sign = vec![1.0; rhs.len()];
        for (i, b) in rhs.iter_mut().enumerate() {
            if *b < 0.0 {
                *b = -*b;
                row_sign[i] = -1.0;
                for a in matrix[i].iter_mut() {
                    *a = -*a;
                }
            }
        }

        Standardized {
            ncols: total_cols,
            matrix,
            rhs,
            cost,
            origin,
            row_sign,
            vars,
        }
    }

    fn rows(&self) -> usize {
        self.rhs.len()
    }

    /// Column `j` of `[A' | I]`.
    fn column(&self, j: usize) -> Vec<f64> {
        if j < self.ncols {
            self.matrix.iter().map(|row| row[j]).collect()
        } else {
            let mut e = vec![0.0; self.rows()];
            e[j - self.ncols] = 1.0;
            e
        }
    }

    fn to_original(&self, x_std: &[f64], with_offset: bool) -> Vec<f64> {
        self.vars
            .iter()
            .map(|m| {
                let base = if with_offset { m.offset } else { 0.0 };
                base + m.cols.iter().map(|&(c, s)| s * x_std[c]).sum::<f64>()
            })
            .collect()
    }

    /// Splits standardized row multipliers into (eq, ineq) multipliers on the
    /// original rows using the sign convention of the module docs.
    fn split_row_duals(&self, y: &[f64], lp: &StandardLp) -> (Vec<f64>, Vec<f64>) {
        let mut dual_eq = vec![0.0; lp.eq_rhs.len()];
        let mut dual_ineq = vec![0.0; lp.ineq_rhs.len()];
        for (i, origin) in self.origin.iter().enumerate() {
            let v = self.row_sign[i] * y[i];
            match *origin {
                RowOrigin::Eq(r) => dual_eq[r] = v,
                RowOrigin::Ineq(r) => dual_ineq[r] = -v,
                RowOrigin::UpperBound => {}
            }
        }
        (dual_eq, dual_ineq)
    }
}

enum PhaseOutcome {
    Optimal,
    Unbounded { entering: usize },
}

struct Tableau {
    /// `m × (ncols + m + 1)`; the last column is the right-hand side.
    t: Vec<Vec<f64>>,
    basis: Vec<usize>,
    ncols: usize,
    iterations: usize,
}

impl Tableau {
    fn new(std: &Standardized) -> Self {
        let m = std.rows();
        let width = std.ncols + m + 1;
        let t = (0..m)
            .map(|i| {
                let mut row = Vec::with_capacity(width);
                row.extend_from_slice(&std.matrix[i]);
                row.extend((0..m).map(|k| if k == i { 1.0 } else { 0.0 }));
                row.push(std.rhs[i]);
                row
            })
            .collect();
        Tableau {
            t,
            basis: (0..m).map(|i| std.ncols + i).collect(),
            ncols: std.ncols,
            iterations: 0,
        }
    }

    fn width(&self) -> usize {
        self.ncols + self.basis.len()
    }

    fn rhs(&self, i: usize) -> f64 {
        self.t[i][self.width()]
    }

    fn reduced_costs(&self, cost: &[f64]) -> Vec<f64> {
        let mut d = cost.to_vec();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = cost[b];
            if cb == 0.0 {
                continue;
            }
            for (j, dj) in d.iter_mut().enumerate() {
                *dj -= cb * self.t[i][j];
            }
        }
        d
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let width = self.width() + 1;
        let p = self.t[row][col];
        for c in 0..width {
            self.t[row][c] /= p;
        }
        self.t[row][col] = 1.0;
        let pivot_row = self.t[row].clone();
        for (i, r) in self.t.iter_mut().enumerate() {
            if i == row {
                continue;
            }
            let factor = r[col];
            if factor == 0.0 {
                continue;
            }
            for c in 0..width {
                r[c] -= factor * pivot_row[c];
            }
            r[col] = 0.0;
        }
        self.basis[row] = col;
        self.iterations += 1;
    }

    fn run(&mut self, cost: &[f64], allow_entering: usize) -> Result<PhaseOutcome, LpError> {
        let mut degenerate_streak = 0usize;
        loop {
            if self.iterations >= MAX_ITERATIONS {
                return Err(LpError::IterationLimit(MAX_ITERATIONS));
            }
            let d = self.reduced_costs(cost);
            let bland = degenerate_streak >= DEGENERATE_STREAK_FOR_BLAND;
            let candidates = (0..allow_entering).filter(|&j| d[j] < -PRICE_TOL);
            let entering = if bland {
                candidates.min()
            } else {
                candidates.min_by(|&a, &b| d[a].total_cmp(&d[b]).then(a.cmp(&b)))
            };
            let Some(e) = entering else {
                return Ok(PhaseOutcome::Optimal);
            };

            let mut leaving: Option<(usize, f64)> = None;
            for i in 0..self.basis.len() {
                let a = self.t[i][e];
                if a <= PIVOT_TOL {
                    continue;
                }
                let ratio = self.rhs(i).max(0.0) / a;
                leaving = match leaving {
                    None => Some((i, ratio)),
                    Some((k, best)) => {
                        let tie = (ratio - best).abs() <= 1e-12 * (1.0 + best.abs());
                        let better = if tie {
                            if bland {
                                self.basis[i] < self.basis[k]
                            } else {
                                a > self.t[k][e]
                            }
                        } else {
                            ratio < best
                        };
                        if better {
                            Some((i, ratio))
                        } else {
                            Some((k, best))
                        }
                    }
                };
            }
            let Some((row, step)) = leaving else {
                return Ok(PhaseOutcome::Unbounded { entering: e });
            };
            if step <= 1e-12 {
                degenerate_streak += 1;
            } else {
                degenerate_streak = 0;
            }
            self.pivot(row, e);
        }
    }

    fn primal(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.width()];
        for (i, &b) in self.basis.iter().enumerate() {
            x[b] = self.rhs(i);
        }
        x
    }
}

/// Solves `lp` to optimality or proves it infeasible/unbounded.
///
/// Dimension and bound errors are reported as `Err`; infeasibility and
/// unboundedness are statuses of an `Ok` solution carrying a certificate.
pub fn solve(lp: &StandardLp) -> Result<LpSolution, LpError> {
    lp.validate()?;
    let std = Standardized::from_lp(lp);
    let m = std.rows();
    let ncols = std.ncols;
    let mut tab = Tableau::new(&std);

    // Phase one: minimize the sum of artificials.
    let mut phase_one_cost = vec![0.0; ncols + m];
    for c in phase_one_cost.iter_mut().skip(ncols) {
        *c = 1.0;
    }
    tab.run(&phase_one_cost, ncols + m)?;
    let infeasibility: f64 = tab
        .basis
        .iter()
        .enumerate()
        .filter(|(_, &b)| b >= ncols)
        .map(|(i, _)| tab.rhs(i))
        .sum();
    let scale = std.rhs.iter().fold(1.0f64, |acc, b| acc.max(b.abs()));
    if infeasibility > 1e-9 * scale {
        let d = tab.reduced_costs(&phase_one_cost);
        let y: Vec<f64> = (0..m).map(|i| 1.0 - d[ncols + i]).collect();
        let (eq_multipliers, ineq_multipliers) = std.split_row_duals(&y, lp);
        return Ok(LpSolution {
            status: LpStatus::Infeasible,
            primal: Vec::new(),
            dual_eq: Vec::new(),
            dual_ineq: Vec::new(),
            reduced_costs: Vec::new(),
            objective_value: f64::NAN,
            certificate: Some(Certificate::Infeasible {
                eq_multipliers,
                ineq_multipliers,
                phase_one_objective: infeasibility,
            }),
            iterations: tab.iterations,
        });
    }

    // Drive zero-level artificials out of the basis where possible. Rows
    // where no structural pivot exists are redundant and keep their artificial.
    for i in 0..m {
        if tab.basis[i] < ncols {
            continue;
        }
        let pivot_col = (0..ncols)
            .filter(|&j| tab.t[i][j].abs() > 1e-9)
            .max_by(|&a, &b| tab.t[i][a].abs().total_cmp(&tab.t[i][b].abs()));
        if let Some(j) = pivot_col {
            tab.pivot(i, j);
        }
    }

    // Phase two on the true costs; artificials may not re-enter.
    let mut cost = std.cost.clone();
    cost.resize(ncols + m, 0.0);
    match tab.run(&cost, ncols)? {
        PhaseOutcome::Unbounded { entering } => {
            let x_std = tab.primal();
            let mut dir = vec![0.0; ncols + m];
            dir[entering] = 1.0;
            for (i, &b) in tab.basis.iter().enumerate() {
                dir[b] = -tab.t[i][entering];
            }
            let point = std.to_original(&x_std, true);
            let ray = std.to_original(&dir, false);
            return Ok(LpSolution {
                status: LpStatus::Unbounded,
                primal: point.clone(),
                dual_eq: Vec::new(),
                dual_ineq: Vec::new(),
                reduced_costs: Vec::new(),
                objective_value: f64::NEG_INFINITY,
                certificate: Some(Certificate::Unbounded { point, ray }),
                iterations: tab.iterations,
            });
        }
        PhaseOutcome::Optimal => {}
    }

    // Refine from the original data on the final basis.
    let basis_cols: Vec<Vec<f64>> = tab.basis.iter().map(|&b| std.column(b)).collect();
    let b_matrix = dense::transpose(&basis_cols);
    let mut x_std = vec![0.0; ncols + m];
    match dense::solve(b_matrix, std.rhs.clone()) {
        Some(x_b) => {
            for (i, &b) in tab.basis.iter().enumerate() {
                let v = x_b[i];
                x_std[b] = if (-1e-9..0.0).contains(&v) { 0.0 } else { v };
            }
        }
        None => x_std = tab.primal(),
    }
    let c_b: Vec<f64> = tab.basis.iter().map(|&b| cost[b]).collect();
    let y = match dense::solve(basis_cols, c_b) {
        Some(y) => y,
        None => {
            let d = tab.reduced_costs(&cost);
            (0..m).map(|i| -d[ncols + i]).collect()
        }
    };

    let primal = std.to_original(&x_std, true);
    let (dual_eq, dual_ineq) = std.split_row_duals(&y, lp);
    let reduced_costs = reduced_costs(lp, &dual_eq, &dual_ineq);
    let objective_value = lp.objective.iter().zip(&primal).map(|(c, x)| c * x).sum();

    Ok(LpSolution {
        status: LpStatus::Optimal,
        primal,
        dual_eq,
        dual_ineq,
        reduced_costs,
        objective_value,
        certificate: None,
        iterations: tab.iterations,
    })
}

/// `c − A_eqᵀ·λ + A_inᵀ·μ`, i.e. the bound multipliers implied by row duals.
pub(crate) fn reduced_costs(lp: &StandardLp, dual_eq: &[f64], dual_ineq: &[f64]) -> Vec<f64> {
    let mut z = lp.objective.clone();
    for (row, &l) in lp.eq_matrix.iter().zip(dual_eq) {
        for (zj, a) in z.iter_mut().zip(row) {
            *zj -= a * l;
        }
    }
    for (row, &mu) in lp.ineq_matrix.iter().zip(dual_ineq) {
        for (zj, a) in z.iter_mut().zip(row) {
            *zj += a * mu;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::super::{verify_optimality, VarBounds};
    use super::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn single_active_lower_bound() {
        let mut lp = StandardLp::new(1);
        lp.objective = vec![1.0];
        lp.bounds[0] = VarBounds::between(3.0, 10.0);
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_close(sol.primal[0], 3.0, 1e-12);
        assert_close(sol.objective_value, 3.0, 1e-12);
        assert_close(sol.reduced_costs[0], 1.0, 1e-12);
    }

    #[test]
    fn single_active_lower_bound_as_rows() {
        let mut lp = StandardLp::new(1);
        lp.objective = vec![1.0];
        lp.bounds[0] = VarBounds::FREE;
        let lo = lp.add_ge(vec![1.0], 3.0);
        let hi = lp.add_le(vec![1.0], 10.0);
        let sol = solve(&lp).unwrap();
        assert_close(sol.primal[0], 3.0, 1e-12);
        assert_close(sol.dual_ineq[lo], 1.0, 1e-12);
        assert_close(sol.dual_ineq[hi], 0.0, 1e-12);
    }

    #[test]
    fn two_unit_merit_order() {
        // vertices of {a + b = 60, a ∈ [0,100], b ∈ [0,500]}: (60,0) cost 1200, (0,60) cost 3000
        let mut lp = StandardLp::new(2);
        lp.objective = vec![20.0, 50.0];
        lp.bounds = vec![VarBounds::between(0.0, 100.0), VarBounds::between(0.0, 500.0)];
        lp.add_eq(vec![1.0, 1.0], 60.0);
        let sol = solve(&lp).unwrap();
        assert_close(sol.primal[0], 60.0, 1e-10);
        assert_close(sol.primal[1], 0.0, 1e-10);
        assert_close(sol.dual_eq[0], 20.0, 1e-10);
        assert_close(sol.objective_value, 1200.0, 1e-9);
        assert!(verify_optimality(&lp, &sol).pass);
    }

    #[test]
    fn empty_feasible_set_is_infeasible() {
        let mut lp = StandardLp::new(1);
        lp.objective = vec![1.0];
        lp.add_le(vec![1.0], -1.0);
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Infeasible);
        match sol.certificate {
            Some(Certificate::Infeasible {
                phase_one_objective, ..
            }) => assert_close(phase_one_objective, 1.0, 1e-12),
            other => panic!("unexpected certificate {other:?}"),
        }
    }

    #[test]
    fn unbounded_reports_improving_ray() {
        let mut lp = StandardLp::new(2);
        lp.objective = vec![-1.0, 0.0];
        lp.add_le(vec![-1.0, 1.0], 1.0);
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Unbounded);
        let Some(Certificate::Unbounded { ray, .. }) = sol.certificate else {
            panic!("missing ray");
        };
        let slope: f64 = lp.objective.iter().zip(&ray).map(|(c, d)| c * d).sum();
        assert!(slope < 0.0);
        assert!(ray.iter().all(|d| *d >= -1e-12));
    }

    #[test]
    fn free_and_upper_only_variables() {
        // min x - y  s.t. x + y = 1, x free, y ≤ 4  →  x = -3, y = 4
        let mut lp = StandardLp::new(2);
        lp.objective = vec![1.0, -1.0];
        lp.bounds = vec![VarBounds::FREE, VarBounds::at_most(4.0)];
        lp.add_eq(vec![1.0, 1.0], 1.0);
        let sol = solve(&lp).unwrap();
        assert_close(sol.primal[0], -3.0, 1e-10);
        assert_close(sol.primal[1], 4.0, 1e-10);
        assert_close(sol.dual_eq[0], 1.0, 1e-10);
        assert_close(sol.reduced_costs[1], -2.0, 1e-10);
        assert!(verify_optimality(&lp, &sol).pass);
    }

    #[test]
    fn redundant_equalities_keep_duals_consistent() {
        let mut lp = StandardLp::new(2);
        lp.objective = vec![1.0, 2.0];
        lp.add_eq(vec![1.0, 1.0], 2.0);
        lp.add_eq(vec![2.0, 2.0], 4.0);
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_close(sol.objective_value, 2.0, 1e-10);
        assert!(verify_optimality(&lp, &sol).pass);
    }

    #[test]
    fn resolve_is_bit_identical() {
        let mut lp = StandardLp::new(3);
        lp.objective = vec![3.0, 1.0, 2.0];
        lp.add_ge(vec![1.0, 1.0, 1.0], 7.5);
        lp.add_le(vec![0.0, 1.0, 0.0], 2.25);
        lp.add_eq(vec![1.0, -1.0, 0.5], 1.0);
        let a = solve(&lp).unwrap();
        let b = solve(&lp).unwrap();
        assert_eq!(a.objective_value.to_bits(), b.objective_value.to_bits());
        assert_eq!(a.primal, b.primal);
    }

    #[test]
    fn malformed_input_is_an_error_not_a_status() {
        let mut lp = StandardLp::new(2);
        lp.objective.pop();
        assert!(solve(&lp).is_err());
    }
}
