//! FRP price diagnostics: stationarity residuals, symmetric-binding
//! detection and finite-difference shadow prices.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::market::{solve_window, MarketError, SystemSpec, WindowInput, WindowSolution};

/// Default finite-difference step, MW.
pub const DEFAULT_FD_STEP: f64 = 1e-4;
/// Objective changes up to this many ulps count as unchanged in finite differences.
const OBJECTIVE_ULPS: f64 = 16.0;
/// Allocations above this level count as interior.
const INTERIOR_TOL: f64 = 1e-9;
/// Relative primal slack under which a row counts as active.
pub const ACTIVITY_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "FRU")]
    Up,
    #[serde(rename = "FRD")]
    Down,
}

impl Direction {
    pub fn label(self) -> &'static str {
        match self {
            Direction::Up => "FRU",
            Direction::Down => "FRD",
        }
    }
}

/// One generator pinned at a capacity limit and another pinned at a ramp
/// limit, in the same interval and direction, under a positive FRP price.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BindingPattern {
    pub interval: usize,
    pub direction: Direction,
    pub capacity_bound_units: Vec<String>,
    pub ramp_bound_units: Vec<String>,
    pub price: f64,
}

/// Largest violation of `φ = ν + ρ` over units holding an interior FRP
/// allocation. Units at `r = 0` are skipped: there the bound multiplier on
/// `r ≥ 0` legitimately absorbs the difference.
pub fn kkt_frp_residual(sol: &WindowSolution) -> f64 {
    let mut worst = 0.0f64;
    for k in 0..sol.horizon.len() {
        for i in 0..sol.generator_ids.len() {
            if sol.fru_alloc[k][i] > INTERIOR_TOL {
                let r = -sol.price_fru[k] + sol.mult_cap_hi[k][i] + sol.mult_ramp_hi[k][i];
                worst = worst.max(r.abs());
            }
            if sol.frd_alloc[k][i] > INTERIOR_TOL {
                let r = -sol.price_frd[k] + sol.mult_cap_lo[k][i] + sol.mult_ramp_lo[k][i];
                worst = worst.max(r.abs());
            }
        }
    }
    worst
}

fn active(slack: f64, rhs: f64) -> bool {
    slack <= ACTIVITY_TOL * rhs.abs().max(1.0)
}

/// Reports every advisory interval and direction whose price exceeds `tol`
/// and where distinct units sit on a capacity limit and on a ramp limit.
/// Activity is read from primal slacks, which stay meaningful when the duals
/// are degenerate.
pub fn detect_transfer(sol: &WindowSolution, tol: f64) -> Vec<BindingPattern> {
    let mut out = Vec::new();
    for k in 1..sol.horizon.len() {
        for direction in [Direction::Up, Direction::Down] {
            let price = match direction {
                Direction::Up => sol.price_fru[k],
                Direction::Down => sol.price_frd[k],
            };
            if price <= tol {
                continue;
            }
            let (cap_slack, cap_rhs, ramp_slack, ramp_rhs) = match direction {
                Direction::Up => (&sol.slack_cap_hi, &sol.rhs_cap_hi, &sol.slack_ramp_hi, &sol.rhs_ramp_hi),
                Direction::Down => (&sol.slack_cap_lo, &sol.rhs_cap_lo, &sol.slack_ramp_lo, &sol.rhs_ramp_lo),
            };
            let units = 0..sol.generator_ids.len();
            let on_cap: Vec<usize> = units
                .clone()
                .filter(|&i| active(cap_slack[k][i], cap_rhs[k][i]))
                .collect();
            let on_ramp: Vec<usize> = units.filter(|&i| active(ramp_slack[k][i], ramp_rhs[k][i])).collect();
            let distinct = on_cap.iter().any(|i| on_ramp.iter().any(|j| i != j));
            if !distinct {
                continue;
            }
            let names = |v: &[usize]| v.iter().map(|&i| sol.generator_ids[i].clone()).collect();
            out.push(BindingPattern {
                interval: sol.horizon[k],
                direction,
                capacity_bound_units: names(&on_cap),
                ramp_bound_units: names(&on_ramp),
                price,
            });
        }
    }
    out
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiagnosticsError {
    #[error("step must be positive and finite, got {0}")]
    InvalidStep(f64),
    #[error("horizon position {0} is not an advisory interval of this window")]
    NotAdvisory(usize),
    #[error("base window: {0}")]
    Base(MarketError),
    #[error("raising {direction:?} at interval {interval} by {step} MW hits a hard flexibility limit")]
    FlexibilityLimit {
        direction: Direction,
        interval: usize,
        step: f64,
    },
}

/// Right-directional derivative of the window's hourly-rate objective with
/// respect to one FRP requirement, by two solves.
pub fn shadow_price_fd(
    spec: &SystemSpec,
    win: &WindowInput,
    direction: Direction,
    position: usize,
    step: f64,
) -> Result<f64, DiagnosticsError> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(DiagnosticsError::InvalidStep(step));
    }
    if position == 0 || position >= win.horizon.len() {
        return Err(DiagnosticsError::NotAdvisory(position));
    }
    let base = solve_window(spec, win).map_err(DiagnosticsError::Base)?;
    let mut bumped = win.clone();
    match direction {
        Direction::Up => bumped.frp_req[position].fru += step,
        Direction::Down => bumped.frp_req[position].frd += step,
    }
    let raised = solve_window(spec, &bumped).map_err(|e| match e {
        MarketError::Infeasible { .. } => DiagnosticsError::FlexibilityLimit {
            direction,
            interval: win.horizon[position],
            step,
        },
        other => DiagnosticsError::Base(other),
    })?;
    let change = raised.objective_value - base.objective_value;
    // changes within a few ulps of the objective are roundoff, not a price
    let floor = OBJECTIVE_ULPS * f64::EPSILON * base.objective_value.abs().max(raised.objective_value.abs()).max(1.0);
    if change.abs() <= floor {
        return Ok(0.0);
    }
    Ok(change / step)
}
