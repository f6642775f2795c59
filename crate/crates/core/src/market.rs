//! Energy and flexible-ramping co-optimization for one rolling window.
//!
//! For a window with horizon `τ ∈ {t, …, t+W−1}` the LP is
//!
//! ```text
//! min  Σ_τ Σ_i C_i·g_iτ + Σ_τ Σ_l C_l·shed_lτ                 ($/h rates)
//! s.t. Σ_i g_iτ + Σ_l shed_lτ = Σ_l d_lτ − V_τ                  λ_τ
//!      Σ_i rU_iτ ≥ R^U_τ                                         φ^U_τ
//!      Σ_i rD_iτ ≥ R^D_τ                                         φ^D_τ
//!      g_iτ − rD_iτ ≥ Pmin_i,   g_iτ + rU_iτ ≤ Pmax_i            ν_lo, ν_hi
//!      g_iτ − g_i,τ−1 − rD_iτ ≥ −ramp_down_i                     ρ_lo
//!      g_iτ − g_i,τ−1 + rU_iτ ≤ ramp_up_i                        ρ_hi
//!      0 ≤ shed_lτ ≤ d_lτ,  rU, rD ≥ 0                           γ_lo, γ_hi
//! ```
//!
//! where `g_i,t−1` is the window's initial dispatch and the shed penalty sums
//! over the same horizon as generation. Requirement rows are `≥` rather than
//! `=`: ramping capacity has no offer cost, so the optimum meets a binding
//! requirement exactly and its price is a nonnegative multiplier.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lp::{self, LpError, LpSolution, LpStatus, OptimalityReport, StandardLp, VarBounds};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub id: String,
    /// $/MWh
    pub energy_cost: f64,
    pub p_min: f64,
    pub p_max: f64,
    /// MW per interval, stored as a nonnegative magnitude.
    pub ramp_down: f64,
    pub ramp_up: f64,
    /// tCO₂/MWh
    pub emission_factor: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoadSpec {
    pub id: String,
    /// $/MWh of unserved load.
    pub shed_penalty: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerKind {
    Wind,
    Solar,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerUnit {
    pub id: String,
    pub kind: VerKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    pub generators: Vec<GeneratorSpec>,
    pub loads: Vec<LoadSpec>,
    pub ver_units: Vec<VerUnit>,
    /// Hours per dispatch interval.
    pub interval_hours: f64,
    /// Intervals per window.
    pub window_length: usize,
}

impl SystemSpec {
    pub fn validate(&self) -> Result<(), MarketError> {
        let bad = |msg: String| Err(MarketError::InvalidSpec(msg));
        if self.generators.is_empty() {
            return bad("at least one generator is required".into());
        }
        if self.window_length < 2 {
            return bad(format!("window_length must be >= 2, got {}", self.window_length));
        }
        if !(self.interval_hours > 0.0 && self.interval_hours.is_finite()) {
            return bad(format!("interval_hours must be positive, got {}", self.interval_hours));
        }
        for g in &self.generators {
            let values = [
                g.energy_cost,
                g.p_min,
                g.p_max,
                g.ramp_down,
                g.ramp_up,
                g.emission_factor,
            ];
            if values.iter().any(|v| !v.is_finite()) {
                return bad(format!("generator {}: non-finite parameter", g.id));
            }
            if g.p_min < 0.0 || g.p_min > g.p_max {
                return bad(format!("generator {}: need 0 <= p_min <= p_max", g.id));
            }
            if g.ramp_down < 0.0 || g.ramp_up < 0.0 {
                return bad(format!("generator {}: ramp magnitudes must be >= 0", g.id));
            }
            if g.emission_factor < 0.0 {
                return bad(format!("generator {}: emission_factor must be >= 0", g.id));
            }
        }
        for l in &self.loads {
            if !(l.shed_penalty >= 0.0 && l.shed_penalty.is_finite()) {
                return bad(format!("load {}: shed_penalty must be >= 0", l.id));
            }
        }
        Ok(())
    }
}

/// Upward and downward flexible ramping requirement for one interval, MW.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrpRequirement {
    pub fru: f64,
    pub frd: f64,
}

impl FrpRequirement {
    pub const ZERO: FrpRequirement = FrpRequirement { fru: 0.0, frd: 0.0 };

    pub fn new(fru: f64, frd: f64) -> Self {
        FrpRequirement { fru, frd }
    }
}

/// Right-hand data of one window LP. Vectors are indexed by horizon position.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowInput {
    pub start_interval: usize,
    pub horizon: Vec<usize>,
    /// `load_forecast[k][l]`, MW.
    pub load_forecast: Vec<Vec<f64>>,
    /// Aggregate VER injection per interval after mode rules, MW.
    pub ver_total: Vec<f64>,
    pub frp_req: Vec<FrpRequirement>,
    /// Dispatch in the interval preceding the window, per generator.
    pub initial_dispatch: Vec<f64>,
}

impl WindowInput {
    pub fn validate(&self, spec: &SystemSpec) -> Result<(), MarketError> {
        let bad = |msg: String| {
            Err(MarketError::InvalidWindow {
                start: self.start_interval,
                msg,
            })
        };
        let w = self.horizon.len();
        if w == 0 {
            return bad("empty horizon".into());
        }
        if self.horizon[0] != self.start_interval {
            return bad("horizon must begin at start_interval".into());
        }
        if self.load_forecast.len() != w || self.ver_total.len() != w || self.frp_req.len() != w {
            return bad("per-interval vectors must match the horizon length".into());
        }
        if self.initial_dispatch.len() != spec.generators.len() {
            return bad(format!(
                "initial_dispatch has {} entries for {} generators",
                self.initial_dispatch.len(),
                spec.generators.len()
            ));
        }
        if self.load_forecast.iter().any(|row| row.len() != spec.loads.len()) {
            return bad("load_forecast rows must have one entry per load".into());
        }
        if self
            .load_forecast
            .iter()
            .flatten()
            .any(|d| !(*d >= 0.0 && d.is_finite()))
        {
            return bad("load forecasts must be finite and >= 0".into());
        }
        if self.ver_total.iter().any(|v| !(*v >= 0.0 && v.is_finite())) {
            return bad("ver_total must be finite and >= 0".into());
        }
        if self
            .frp_req
            .iter()
            .any(|r| !(r.fru >= 0.0 && r.frd >= 0.0 && r.fru.is_finite() && r.frd.is_finite()))
        {
            return bad("FRP requirements must be finite and >= 0".into());
        }
        if self.frp_req[0] != FrpRequirement::ZERO {
            return bad("the binding interval carries no FRP requirement".into());
        }
        if self.initial_dispatch.iter().any(|g| !g.is_finite()) {
            return bad("initial_dispatch must be finite".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GenQuantity {
    Dispatch,
    RampUp,
    RampDown,
}

/// An LP column, named by what it represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Column {
    Gen { k: usize, unit: usize, q: GenQuantity },
    Shed { k: usize, load: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IneqRow {
    FruSum { k: usize },
    FrdSum { k: usize },
    CapLo { k: usize, unit: usize },
    CapHi { k: usize, unit: usize },
    RampDown { k: usize, unit: usize },
    RampUp { k: usize, unit: usize },
}

/// Bijection between named window quantities and LP indices. `k` is the
/// position within the horizon (0 = binding interval).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexMap {
    pub generators: usize,
    pub loads: usize,
    pub intervals: usize,
}

impl IndexMap {
    fn col_block(&self) -> usize {
        3 * self.generators + self.loads
    }

    fn row_block(&self) -> usize {
        2 + 4 * self.generators
    }

    pub fn num_columns(&self) -> usize {
        self.intervals * self.col_block()
    }

    pub fn num_ineq_rows(&self) -> usize {
        self.intervals * self.row_block()
    }

    pub fn column(&self, c: Column) -> usize {
        match c {
            Column::Gen { k, unit, q } => {
                let offset = match q {
                    GenQuantity::Dispatch => 0,
                    GenQuantity::RampUp => 1,
                    GenQuantity::RampDown => 2,
                };
                k * self.col_block() + 3 * unit + offset
            }
            Column::Shed { k, load } => k * self.col_block() + 3 * self.generators + load,
        }
    }

    pub fn column_of(&self, j: usize) -> Column {
        let (k, r) = (j / self.col_block(), j % self.col_block());
        if r < 3 * self.generators {
            let q = match r % 3 {
                0 => GenQuantity::Dispatch,
                1 => GenQuantity::RampUp,
                _ => GenQuantity::RampDown,
            };
            Column::Gen { k, unit: r / 3, q }
        } else {
            Column::Shed {
                k,
                load: r - 3 * self.generators,
            }
        }
    }

    /// Power balance row for horizon position `k`.
    pub fn balance_row(&self, k: usize) -> usize {
        k
    }

    pub fn ineq_row(&self, row: IneqRow) -> usize {
        let base = |k: usize| k * self.row_block();
        match row {
            IneqRow::FruSum { k } => base(k),
            IneqRow::FrdSum { k } => base(k) + 1,
            IneqRow::CapLo { k, unit } => base(k) + 2 + 4 * unit,
            IneqRow::CapHi { k, unit } => base(k) + 3 + 4 * unit,
            IneqRow::RampDown { k, unit } => base(k) + 4 + 4 * unit,
            IneqRow::RampUp { k, unit } => base(k) + 5 + 4 * unit,
        }
    }

    pub fn ineq_row_of(&self, r: usize) -> IneqRow {
        let (k, r) = (r / self.row_block(), r % self.row_block());
        match r {
            0 => IneqRow::FruSum { k },
            1 => IneqRow::FrdSum { k },
            _ => {
                let unit = (r - 2) / 4;
                match (r - 2) % 4 {
                    0 => IneqRow::CapLo { k, unit },
                    1 => IneqRow::CapHi { k, unit },
                    2 => IneqRow::RampDown { k, unit },
                    _ => IneqRow::RampUp { k, unit },
                }
            }
        }
    }
}

pub fn build_window_lp(spec: &SystemSpec, win: &WindowInput) -> Result<(StandardLp, IndexMap), MarketError> {
    spec.validate()?;
    win.validate(spec)?;
    let map = IndexMap {
        generators: spec.generators.len(),
        loads: spec.loads.len(),
        intervals: win.horizon.len(),
    };
    let n = map.num_columns();
    let mut lp = StandardLp::new(n);
    let mut names = vec![String::new(); n];

    for k in 0..map.intervals {
        let tau = win.horizon[k];
        for (i, g) in spec.generators.iter().enumerate() {
            for (q, tag) in [
                (GenQuantity::Dispatch, "g"),
                (GenQuantity::RampUp, "rU"),
                (GenQuantity::RampDown, "rD"),
            ] {
                let j = map.column(Column::Gen { k, unit: i, q });
                names[j] = format!("{tag}[{},{tau}]", g.id);
                lp.bounds[j] = if q == GenQuantity::Dispatch {
                    VarBounds::FREE
                } else {
                    VarBounds::NONNEGATIVE
                };
            }
            lp.objective[map.column(Column::Gen {
                k,
                unit: i,
                q: GenQuantity::Dispatch,
            })] = g.energy_cost;
        }
        for (l, load) in spec.loads.iter().enumerate() {
            let j = map.column(Column::Shed { k, load: l });
            names[j] = format!("shed[{},{tau}]", load.id);
            lp.objective[j] = load.shed_penalty;
            lp.bounds[j] = VarBounds::between(0.0, win.load_forecast[k][l]);
        }
    }
    lp.variable_names = Some(names);

    let col = |c: Column| map.column(c);
    let gcol = |k, unit, q| col(Column::Gen { k, unit, q });

    for k in 0..map.intervals {
        let mut row = vec![0.0; n];
        for i in 0..map.generators {
            row[gcol(k, i, GenQuantity::Dispatch)] = 1.0;
        }
        for l in 0..map.loads {
            row[col(Column::Shed { k, load: l })] = 1.0;
        }
        let demand: f64 = win.load_forecast[k].iter().sum();
        let r = lp.add_eq(row, demand - win.ver_total[k]);
        debug_assert_eq!(r, map.balance_row(k));
    }

    for k in 0..map.intervals {
        let req = win.frp_req[k];
        for (q, need) in [(GenQuantity::RampUp, req.fru), (GenQuantity::RampDown, req.frd)] {
            let mut row = vec![0.0; n];
            for i in 0..map.generators {
                row[gcol(k, i, q)] = 1.0;
            }
            lp.add_ge(row, need);
        }
        for (i, g) in spec.generators.iter().enumerate() {
            let (gc, up, dn) = (
                gcol(k, i, GenQuantity::Dispatch),
                gcol(k, i, GenQuantity::RampUp),
                gcol(k, i, GenQuantity::RampDown),
            );
            let prev = (k > 0).then(|| gcol(k - 1, i, GenQuantity::Dispatch));
            let initial = if k == 0 { win.initial_dispatch[i] } else { 0.0 };

            let mut row = vec![0.0; n];
            row[gc] = 1.0;
            row[dn] = -1.0;
            lp.add_ge(row, g.p_min);

            let mut row = vec![0.0; n];
            row[gc] = 1.0;
            row[up] = 1.0;
            lp.add_le(row, g.p_max);

            let mut row = vec![0.0; n];
            row[gc] = 1.0;
            row[dn] = -1.0;
            if let Some(p) = prev {
                row[p] = -1.0;
            }
            lp.add_ge(row, -g.ramp_down + initial);

            let mut row = vec![0.0; n];
            row[gc] = 1.0;
            row[up] = 1.0;
            if let Some(p) = prev {
                row[p] = -1.0;
            }
            lp.add_le(row, g.ramp_up + initial);
        }
    }
    debug_assert_eq!(lp.ineq_rhs.len(), map.num_ineq_rows());
    Ok((lp, map))
}

/// Primal values, multipliers and constraint slacks of a solved window.
/// Every per-interval vector is indexed by horizon position; inner vectors by
/// generator (or load).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowSolution {
    pub start_interval: usize,
    pub horizon: Vec<usize>,
    pub generator_ids: Vec<String>,
    pub dispatch: Vec<Vec<f64>>,
    pub fru_alloc: Vec<Vec<f64>>,
    pub frd_alloc: Vec<Vec<f64>>,
    pub shed: Vec<Vec<f64>>,
    pub price_energy: Vec<f64>,
    pub price_fru: Vec<f64>,
    pub price_frd: Vec<f64>,
    pub mult_cap_lo: Vec<Vec<f64>>,
    pub mult_cap_hi: Vec<Vec<f64>>,
    pub mult_ramp_lo: Vec<Vec<f64>>,
    pub mult_ramp_hi: Vec<Vec<f64>>,
    pub mult_shed_lo: Vec<Vec<f64>>,
    pub mult_shed_hi: Vec<Vec<f64>>,
    /// Bound multipliers on `rU ≥ 0` and `rD ≥ 0`.
    pub mult_fru_nonneg: Vec<Vec<f64>>,
    pub mult_frd_nonneg: Vec<Vec<f64>>,
    /// Row slacks (`≥ 0` when feasible) and right-hand sides used to judge activity.
    pub slack_cap_lo: Vec<Vec<f64>>,
    pub slack_cap_hi: Vec<Vec<f64>>,
    pub slack_ramp_lo: Vec<Vec<f64>>,
    pub slack_ramp_hi: Vec<Vec<f64>>,
    pub rhs_cap_lo: Vec<Vec<f64>>,
    pub rhs_cap_hi: Vec<Vec<f64>>,
    pub rhs_ramp_lo: Vec<Vec<f64>>,
    pub rhs_ramp_hi: Vec<Vec<f64>>,
    pub frp_req: Vec<FrpRequirement>,
    /// Hourly-rate objective, $/h.
    pub objective_value: f64,
    /// KKT certificate of the underlying LP solve, recomputed from the model data.
    pub optimality: OptimalityReport,
}

impl WindowSolution {
    pub fn binding_dispatch(&self) -> &[f64] {
        &self.dispatch[0]
    }

    pub fn binding_shed(&self) -> &[f64] {
        &self.shed[0]
    }
}

/// Solves one window and maps the LP result back to named quantities.
pub fn solve_window(spec: &SystemSpec, win: &WindowInput) -> Result<WindowSolution, MarketError> {
    let (lp, map) = build_window_lp(spec, win)?;
    let sol = lp::solve(&lp)?;
    match sol.status {
        LpStatus::Optimal => Ok(map_solution(spec, win, &lp, &map, &sol)),
        LpStatus::Infeasible => Err(MarketError::Infeasible {
            window_start: win.start_interval,
        }),
        LpStatus::Unbounded => Err(MarketError::Unbounded {
            window_start: win.start_interval,
        }),
    }
}

fn map_solution(
    spec: &SystemSpec,
    win: &WindowInput,
    lp: &StandardLp,
    map: &IndexMap,
    sol: &LpSolution,
) -> WindowSolution {
    let w = map.intervals;
    let per_gen = |f: &dyn Fn(usize, usize) -> f64| -> Vec<Vec<f64>> {
        (0..w).map(|k| (0..map.generators).map(|i| f(k, i)).collect()).collect()
    };
    let per_load = |f: &dyn Fn(usize, usize) -> f64| -> Vec<Vec<f64>> {
        (0..w).map(|k| (0..map.loads).map(|l| f(k, l)).collect()).collect()
    };
    let x = |c: Column| sol.primal[map.column(c)];
    let z = |c: Column| sol.reduced_costs[map.column(c)];
    let gen = |k, unit, q| Column::Gen { k, unit, q };
    // `+ 0.0` turns a signed zero from the pivoting into a plain zero
    let mu = |r: IneqRow| sol.dual_ineq[map.ineq_row(r)] + 0.0;
    let slack = |r: IneqRow| {
        let idx = map.ineq_row(r);
        let lhs: f64 = lp.ineq_matrix[idx].iter().zip(&sol.primal).map(|(a, v)| a * v).sum();
        lp.ineq_rhs[idx] - lhs
    };
    // `≥` rows are stored negated; report their rhs in the original orientation
    let rhs_ge = |r: IneqRow| -lp.ineq_rhs[map.ineq_row(r)];
    let rhs_le = |r: IneqRow| lp.ineq_rhs[map.ineq_row(r)];

    WindowSolution {
        start_interval: win.start_interval,
        horizon: win.horizon.clone(),
        generator_ids: spec.generators.iter().map(|g| g.id.clone()).collect(),
        dispatch: per_gen(&|k, i| x(gen(k, i, GenQuantity::Dispatch))),
        fru_alloc: per_gen(&|k, i| x(gen(k, i, GenQuantity::RampUp))),
        frd_alloc: per_gen(&|k, i| x(gen(k, i, GenQuantity::RampDown))),
        shed: per_load(&|k, l| x(Column::Shed { k, load: l })),
        price_energy: (0..w).map(|k| sol.dual_eq[map.balance_row(k)] + 0.0).collect(),
        price_fru: (0..w).map(|k| mu(IneqRow::FruSum { k })).collect(),
        price_frd: (0..w).map(|k| mu(IneqRow::FrdSum { k })).collect(),
        mult_cap_lo: per_gen(&|k, unit| mu(IneqRow::CapLo { k, unit })),
        mult_cap_hi: per_gen(&|k, unit| mu(IneqRow::CapHi { k, unit })),
        mult_ramp_lo: per_gen(&|k, unit| mu(IneqRow::RampDown { k, unit })),
        mult_ramp_hi: per_gen(&|k, unit| mu(IneqRow::RampUp { k, unit })),
        mult_shed_lo: per_load(&|k, l| z(Column::Shed { k, load: l }).max(0.0)),
        mult_shed_hi: per_load(&|k, l| (-z(Column::Shed { k, load: l })).max(0.0)),
        mult_fru_nonneg: per_gen(&|k, i| z(gen(k, i, GenQuantity::RampUp))),
        mult_frd_nonneg: per_gen(&|k, i| z(gen(k, i, GenQuantity::RampDown))),
        slack_cap_lo: per_gen(&|k, unit| slack(IneqRow::CapLo { k, unit })),
        slack_cap_hi: per_gen(&|k, unit| slack(IneqRow::CapHi { k, unit })),
        slack_ramp_lo: per_gen(&|k, unit| slack(IneqRow::RampDown { k, unit })),
        slack_ramp_hi: per_gen(&|k, unit| slack(IneqRow::RampUp { k, unit })),
        rhs_cap_lo: per_gen(&|k, unit| rhs_ge(IneqRow::CapLo { k, unit })),
        rhs_cap_hi: per_gen(&|k, unit| rhs_le(IneqRow::CapHi { k, unit })),
        rhs_ramp_lo: per_gen(&|k, unit| rhs_ge(IneqRow::RampDown { k, unit })),
        rhs_ramp_hi: per_gen(&|k, unit| rhs_le(IneqRow::RampUp { k, unit })),
        frp_req: win.frp_req.clone(),
        objective_value: sol.objective_value,
        optimality: lp::verify_optimality(lp, sol),
    }
}

/// Cost of one executed interval in currency: hourly rates times `Δt`.
pub fn interval_cost(spec: &SystemSpec, dispatch: &[f64], shed: &[f64]) -> f64 {
    let energy: f64 = spec
        .generators
        .iter()
        .zip(dispatch)
        .map(|(g, p)| g.energy_cost * p)
        .sum();
    let penalty: f64 = spec.loads.iter().zip(shed).map(|(l, s)| l.shed_penalty * s).sum();
    (energy + penalty) * spec.interval_hours
}

/// Emissions of one executed interval, tCO₂.
pub fn interval_emissions(spec: &SystemSpec, dispatch: &[f64]) -> f64 {
    spec.generators
        .iter()
        .zip(dispatch)
        .map(|(g, p)| g.emission_factor * p)
        .sum::<f64>()
        * spec.interval_hours
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MarketError {
    #[error("invalid system: {0}")]
    InvalidSpec(String),
    #[error("invalid window starting at interval {start}: {msg}")]
    InvalidWindow { start: usize, msg: String },
    #[error("window starting at interval {window_start} is infeasible")]
    Infeasible { window_start: usize },
    #[error("window starting at interval {window_start} is unbounded")]
    Unbounded { window_start: usize },
    #[error(transparent)]
    Lp(#[from] LpError),
}

impl MarketError {
    pub fn is_infeasible(&self) -> bool {
        matches!(self, MarketError::Infeasible { .. })
    }
}
