//! Dense linear programming with full dual extraction.
//!
//! Problems are stated as
//!
//! ```text
//! minimize    cᵀx
//! subject to  A_eq x  = b_eq
//!             A_in x ≤ b_in
//!             l ≤ x ≤ u        (either side may be unbounded)
//! ```
//!
//! and solved by a two-phase primal simplex on a dense tableau. The sign
//! convention for the returned multipliers is
//!
//! ```text
//! c − A_eqᵀ·dual_eq + A_inᵀ·dual_ineq − reduced_costs = 0,   dual_ineq ≥ 0
//! ```
//!
//! so `dual_eq[r]` is the derivative of the optimal objective with respect to
//! `b_eq[r]` and `dual_ineq[r]` is the (nonnegative) cost of tightening
//! inequality `r` by one unit. A positive reduced cost prices an active lower
//! bound, a negative one an active upper bound.

mod dense;
mod report;
mod simplex;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use report::{verify_optimality, OptimalityReport};
pub use simplex::solve;

/// Primal feasibility tolerance (per row, scaled by `max(1, |rhs|)`).
pub const FEASIBILITY_TOL: f64 = 1e-8;
/// Dual feasibility tolerance.
pub const DUAL_FEASIBILITY_TOL: f64 = 1e-9;
/// Relative duality gap and complementary slackness tolerance.
pub const GAP_TOL: f64 = 1e-7;

/// One side of a variable bound. `Unbounded` is kept distinct from any finite
/// number so that no big-M value ever enters the tableau.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Limit {
    Finite(f64),
    Unbounded,
}

impl Limit {
    pub fn finite(self) -> Option<f64> {
        match self {
            Limit::Finite(v) => Some(v),
            Limit::Unbounded => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarBounds {
    pub lower: Limit,
    pub upper: Limit,
}

impl VarBounds {
    pub const FREE: VarBounds = VarBounds {
        lower: Limit::Unbounded,
        upper: Limit::Unbounded,
    };
    pub const NONNEGATIVE: VarBounds = VarBounds {
        lower: Limit::Finite(0.0),
        upper: Limit::Unbounded,
    };

    pub fn between(lower: f64, upper: f64) -> Self {
        VarBounds {
            lower: Limit::Finite(lower),
            upper: Limit::Finite(upper),
        }
    }

    pub fn at_least(lower: f64) -> Self {
        VarBounds {
            lower: Limit::Finite(lower),
            upper: Limit::Unbounded,
        }
    }

    pub fn at_most(upper: f64) -> Self {
        VarBounds {
            lower: Limit::Unbounded,
            upper: Limit::Finite(upper),
        }
    }
}

/// A dense linear program in the form described in the module docs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StandardLp {
    pub objective: Vec<f64>,
    pub eq_matrix: Vec<Vec<f64>>,
    pub eq_rhs: Vec<f64>,
    pub ineq_matrix: Vec<Vec<f64>>,
    pub ineq_rhs: Vec<f64>,
    pub bounds: Vec<VarBounds>,
    pub variable_names: Option<Vec<String>>,
}

impl StandardLp {
    /// An empty problem over `n` nonnegative variables with zero cost.
    pub fn new(n: usize) -> Self {
        StandardLp {
            objective: vec![0.0; n],
            eq_matrix: Vec::new(),
            eq_rhs: Vec::new(),
            ineq_matrix: Vec::new(),
            ineq_rhs: Vec::new(),
            bounds: vec![VarBounds::NONNEGATIVE; n],
            variable_names: None,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    /// Appends `row·x = rhs` and returns its equality-row index.
    pub fn add_eq(&mut self, row: Vec<f64>, rhs: f64) -> usize {
        self.eq_matrix.push(row);
        self.eq_rhs.push(rhs);
        self.eq_rhs.len() - 1
    }

    /// Appends `row·x ≤ rhs` and returns its inequality-row index.
    pub fn add_le(&mut self, row: Vec<f64>, rhs: f64) -> usize {
        self.ineq_matrix.push(row);
        self.ineq_rhs.push(rhs);
        self.ineq_rhs.len() - 1
    }

    /// Appends `row·x ≥ rhs`, stored negated as an inequality row.
    pub fn add_ge(&mut self, row: Vec<f64>, rhs: f64) -> usize {
        self.add_le(row.into_iter().map(|a| -a).collect(), -rhs)
    }

    pub fn validate(&self) -> Result<(), LpError> {
        let n = self.num_vars();
        if self.bounds.len() != n {
            return Err(LpError::DimensionMismatch {
                what: "bounds".into(),
                expected: n,
                found: self.bounds.len(),
            });
        }
        if let Some(names) = &self.variable_names {
            if names.len() != n {
                return Err(LpError::DimensionMismatch {
                    what: "variable_names".into(),
                    expected: n,
                    found: names.len(),
                });
            }
        }
        if self.eq_matrix.len() != self.eq_rhs.len() {
            return Err(LpError::DimensionMismatch {
                what: "eq_rhs".into(),
                expected: self.eq_matrix.len(),
                found: self.eq_rhs.len(),
            });
        }
        if self.ineq_matrix.len() != self.ineq_rhs.len() {
            return Err(LpError::DimensionMismatch {
                what: "ineq_rhs".into(),
                expected: self.ineq_matrix.len(),
                found: self.ineq_rhs.len(),
            });
        }
        for (kind, rows) in [("eq", &self.eq_matrix), ("ineq", &self.ineq_matrix)] {
            for (r, row) in rows.iter().enumerate() {
                if row.len() != n {
                    return Err(LpError::DimensionMismatch {
                        what: format!("{kind} row {r}"),
                        expected: n,
                        found: row.len(),
                    });
                }
            }
        }
        let all_finite = self
            .objective
            .iter()
            .chain(self.eq_rhs.iter())
            .chain(self.ineq_rhs.iter())
            .chain(self.eq_matrix.iter().flatten())
            .chain(self.ineq_matrix.iter().flatten())
            .all(|v| v.is_finite());
        if !all_finite {
            return Err(LpError::NonFinite);
        }
        for (j, b) in self.bounds.iter().enumerate() {
            for limit in [b.lower, b.upper] {
                if let Limit::Finite(v) = limit {
                    if !v.is_finite() {
                        return Err(LpError::NonFinite);
                    }
                }
            }
            if let (Limit::Finite(lo), Limit::Finite(hi)) = (b.lower, b.upper) {
                if lo > hi {
                    return Err(LpError::InvertedBounds {
                        var: j,
                        lower: lo,
                        upper: hi,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn variable_label(&self, j: usize) -> String {
        self.variable_names
            .as_ref()
            .and_then(|names| names.get(j).cloned())
            .unwrap_or_else(|| format!("x{j}"))
    }
}

/// Plain-text matrix listing, intended for bug reports.
impl fmt::Display for StandardLp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.num_vars();
        writeln!(
            f,
            "LP: {} vars, {} eq rows, {} ineq rows",
            n,
            self.eq_rhs.len(),
            self.ineq_rhs.len()
        )?;
        write!(f, "min")?;
        for (j, c) in self.objective.iter().enumerate() {
            if *c != 0.0 {
                write!(f, " {:+}*{}", c, self.variable_label(j))?;
            }
        }
        writeln!(f)?;
        let write_row = |f: &mut fmt::Formatter<'_>, tag: String, row: &[f64], sense: &str, rhs: f64| {
            write!(f, "{tag}:")?;
            for (j, a) in row.iter().enumerate() {
                if *a != 0.0 {
                    write!(f, " {:+}*{}", a, self.variable_label(j))?;
                }
            }
            writeln!(f, " {sense} {rhs}")
        };
        for (r, row) in self.eq_matrix.iter().enumerate() {
            write_row(f, format!("e{r}"), row, "=", self.eq_rhs[r])?;
        }
        for (r, row) in self.ineq_matrix.iter().enumerate() {
            write_row(f, format!("i{r}"), row, "<=", self.ineq_rhs[r])?;
        }
        for (j, b) in self.bounds.iter().enumerate() {
            let lo = b.lower.finite().map_or("-inf".to_string(), |v| v.to_string());
            let hi = b.upper.finite().map_or("+inf".to_string(), |v| v.to_string());
            writeln!(f, "{lo} <= {} <= {hi}", self.variable_label(j))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Evidence accompanying a non-optimal status.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Certificate {
    /// Phase-one multipliers on the original rows; `phase_one_objective` is
    /// the minimum total constraint violation found (> 0).
    Infeasible {
        eq_multipliers: Vec<f64>,
        ineq_multipliers: Vec<f64>,
        phase_one_objective: f64,
    },
    /// A feasible point plus a direction `d` with `cᵀd < 0` that stays feasible.
    Unbounded { point: Vec<f64>, ray: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpSolution {
    pub status: LpStatus,
    pub primal: Vec<f64>,
    pub dual_eq: Vec<f64>,
    pub dual_ineq: Vec<f64>,
    pub reduced_costs: Vec<f64>,
    pub objective_value: f64,
    pub certificate: Option<Certificate>,
    pub iterations: usize,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: String,
        expected: usize,
        found: usize,
    },
    #[error("variable {var} has lower bound {lower} above upper bound {upper}")]
    InvertedBounds { var: usize, lower: f64, upper: f64 },
    #[error("non-finite coefficient in problem data")]
    NonFinite,
    #[error("singular basis encountered during refinement")]
    SingularBasis,
    #[error("iteration limit {0} reached")]
    IterationLimit(usize),
}
