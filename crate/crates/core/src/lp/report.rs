use serde::{Deserialize, Serialize};

use super::{simplex::reduced_costs, LpSolution, StandardLp, DUAL_FEASIBILITY_TOL, FEASIBILITY_TOL, GAP_TOL};

/// KKT certificate for a claimed optimal solution.
///
/// All residuals are computed from the problem data and the solution's primal
/// and row duals; the reduced costs carried by the solution are recomputed
/// rather than trusted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimalityReport {
    /// Max row or bound violation, each scaled by `max(1, |rhs|)`.
    pub primal_residual: f64,
    /// Max of negative inequality duals and reduced costs pointing at a
    /// missing bound.
    pub dual_infeasibility: f64,
    /// Max product of a multiplier and its constraint's slack, scaled like
    /// the primal residual.
    pub complementarity: f64,
    /// `|cᵀx − dual objective| / max(1, |cᵀx|)`.
    pub duality_gap: f64,
    pub primal_objective: f64,
    pub dual_objective: f64,
    pub pass: bool,
}

pub fn verify_optimality(lp: &StandardLp, sol: &LpSolution) -> OptimalityReport {
    let x = &sol.primal;
    let n = lp.num_vars();
    let complete = x.len() == n && sol.dual_eq.len() == lp.eq_rhs.len() && sol.dual_ineq.len() == lp.ineq_rhs.len();
    if !complete {
        return OptimalityReport {
            primal_residual: f64::INFINITY,
            dual_infeasibility: f64::INFINITY,
            complementarity: f64::INFINITY,
            duality_gap: f64::INFINITY,
            primal_objective: f64::NAN,
            dual_objective: f64::NAN,
            pass: false,
        };
    }

    let dot = |row: &[f64]| row.iter().zip(x).map(|(a, v)| a * v).sum::<f64>();
    let scaled = |v: f64, rhs: f64| v / rhs.abs().max(1.0);

    let mut primal_residual = 0.0f64;
    let mut complementarity = 0.0f64;
    let mut dual_infeasibility = 0.0f64;

    for (row, &b) in lp.eq_matrix.iter().zip(&lp.eq_rhs) {
        primal_residual = primal_residual.max(scaled((dot(row) - b).abs(), b));
    }
    for ((row, &b), &mu) in lp.ineq_matrix.iter().zip(&lp.ineq_rhs).zip(&sol.dual_ineq) {
        let slack = b - dot(row);
        primal_residual = primal_residual.max(scaled((-slack).max(0.0), b));
        dual_infeasibility = dual_infeasibility.max(-mu);
        complementarity = complementarity.max(scaled((mu.max(0.0) * slack).abs(), b));
    }

    let z = reduced_costs(lp, &sol.dual_eq, &sol.dual_ineq);
    let mut dual_objective = lp.eq_rhs.iter().zip(&sol.dual_eq).map(|(b, l)| b * l).sum::<f64>()
        - lp.ineq_rhs.iter().zip(&sol.dual_ineq).map(|(b, m)| b * m).sum::<f64>();
    for (j, bounds) in lp.bounds.iter().enumerate() {
        let (z_lo, z_hi) = (z[j].max(0.0), (-z[j]).max(0.0));
        match bounds.lower.finite() {
            Some(lo) => {
                primal_residual = primal_residual.max(scaled((lo - x[j]).max(0.0), lo));
                complementarity = complementarity.max(scaled((z_lo * (x[j] - lo)).abs(), lo));
                dual_objective += z_lo * lo;
            }
            None => dual_infeasibility = dual_infeasibility.max(z_lo),
        }
        match bounds.upper.finite() {
            Some(hi) => {
                primal_residual = primal_residual.max(scaled((x[j] - hi).max(0.0), hi));
                complementarity = complementarity.max(scaled((z_hi * (hi - x[j])).abs(), hi));
                dual_objective -= z_hi * hi;
            }
            None => dual_infeasibility = dual_infeasibility.max(z_hi),
        }
    }

    let primal_objective = dot(&lp.objective);
    let duality_gap = (primal_objective - dual_objective).abs() / primal_objective.abs().max(1.0);
    let pass = primal_residual <= FEASIBILITY_TOL
        && dual_infeasibility <= DUAL_FEASIBILITY_TOL
        && complementarity <= GAP_TOL
        && duality_gap <= GAP_TOL;

    OptimalityReport {
        primal_residual,
        dual_infeasibility,
        complementarity,
        duality_gap,
        primal_objective,
        dual_objective,
        pass,
    }
}
