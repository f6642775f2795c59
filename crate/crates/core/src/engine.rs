//! Cascaded rolling-window simulation and Monte Carlo ensembles.
//!
//! Each window is solved once; only its first (binding) interval is executed
//! and that dispatch becomes the next window's initial condition. Under the
//! capped mode advisory VER totals are reduced by the cap profile, and the
//! binding total is limited by the capped total the previous window scheduled
//! for the same interval.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::diagnostics::{detect_transfer, BindingPattern};
use crate::frp::{requirements_from_samples, FrpError, SampleSet};
use crate::market::{
    interval_cost, interval_emissions, solve_window, FrpRequirement, MarketError, SystemSpec, WindowInput,
    WindowSolution,
};
use crate::rng;
use crate::uncertainty::{
    apply_cap, binding_ver_total, net_load_delta_fbd, net_load_delta_rfbd, sample_realization, CapProfile,
    ForecastSeries, Realization,
};

/// Price level above which a binding pattern is reported.
pub const TRANSFER_PRICE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeKind {
    Fbd,
    Rfbd,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DispatchMode {
    pub name: String,
    pub kind: ModeKind,
    pub caps: Option<CapProfile>,
    /// Apply a cap to the very first binding interval as if a predecessor
    /// window had scheduled it with the same cap profile.
    pub first_window_binding_cap: bool,
}

impl DispatchMode {
    pub fn fbd() -> Self {
        DispatchMode {
            name: "FBD".into(),
            kind: ModeKind::Fbd,
            caps: None,
            first_window_binding_cap: false,
        }
    }

    pub fn rfbd(caps: CapProfile, first_window_binding_cap: bool) -> Self {
        let name = match caps.per_unit.first() {
            Some(d) if caps.per_interval.is_empty() && caps.per_unit.iter().all(|c| c == d) => format!("Cap-{d}"),
            _ => "RFBD".into(),
        };
        DispatchMode {
            name,
            kind: ModeKind::Rfbd,
            caps: Some(caps),
            first_window_binding_cap,
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn validate(&self, ver_units: usize) -> Result<(), EngineError> {
        match (self.kind, &self.caps) {
            (ModeKind::Fbd, Some(_)) => Err(EngineError::InvalidInput(format!(
                "mode {}: FBD carries no caps",
                self.name
            ))),
            (ModeKind::Rfbd, None) => Err(EngineError::InvalidInput(format!(
                "mode {}: RFBD needs a cap profile",
                self.name
            ))),
            (ModeKind::Rfbd, Some(c)) => c
                .validate(ver_units)
                .map_err(|e| EngineError::InvalidInput(format!("mode {}: {e}", self.name))),
            (ModeKind::Fbd, None) => Ok(()),
        }
    }

    fn caps_at(&self, interval: usize) -> Option<&[f64]> {
        self.caps.as_ref().map(|c| c.at(interval))
    }

    fn scheduled_advisory_total(&self, forecast: &[f64], interval: usize) -> f64 {
        match self.caps_at(interval) {
            Some(caps) => apply_cap(forecast, caps).iter().sum(),
            None => forecast.iter().sum(),
        }
    }
}

/// FRP requirement per window and horizon position.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RequirementSchedule {
    pub per_window: Vec<Vec<FrpRequirement>>,
}

impl RequirementSchedule {
    /// Zero at every binding interval, `req` at every advisory interval.
    pub fn uniform(forecasts: &ForecastSeries, req: FrpRequirement) -> Self {
        RequirementSchedule {
            per_window: forecasts
                .windows
                .iter()
                .map(|w| {
                    (0..w.intervals.len())
                        .map(|k| if k == 0 { FrpRequirement::ZERO } else { req })
                        .collect()
                })
                .collect(),
        }
    }
}

/// Results of one executed binding interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BindingRecord {
    pub interval: usize,
    pub dispatch: Vec<f64>,
    pub shed: Vec<f64>,
    pub cost: f64,
    pub emissions: f64,
    pub ver_total: f64,
    pub price_energy: f64,
    /// FRP prices of the window's advisory intervals, in horizon order.
    pub advisory_price_fru: Vec<f64>,
    pub advisory_price_frd: Vec<f64>,
    pub transfers: Vec<BindingPattern>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RollingTrajectory {
    pub mode: String,
    pub initial_dispatch: Vec<f64>,
    pub records: Vec<BindingRecord>,
    pub windows: Vec<WindowSolution>,
}

impl RollingTrajectory {
    pub fn total_cost(&self) -> f64 {
        self.records.iter().map(|r| r.cost).sum()
    }

    pub fn total_emissions(&self) -> f64 {
        self.records.iter().map(|r| r.emissions).sum()
    }

    /// Largest directional ramp violation along the executed path (≤ 0 when feasible).
    pub fn max_ramp_violation(&self, spec: &SystemSpec) -> f64 {
        let mut prev = self.initial_dispatch.as_slice();
        let mut worst = f64::NEG_INFINITY;
        for rec in &self.records {
            for (i, g) in spec.generators.iter().enumerate() {
                let step = rec.dispatch[i] - prev[i];
                worst = worst.max(step - g.ramp_up).max(-step - g.ramp_down);
            }
            prev = &rec.dispatch;
        }
        worst
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EngineError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("window {window} (start interval {start}): {source}")]
    Window {
        window: usize,
        start: usize,
        #[source]
        source: MarketError,
    },
    #[error("all {0} Monte Carlo trials were infeasible")]
    AllTrialsInfeasible(usize),
    #[error(transparent)]
    Frp(#[from] FrpError),
}

impl EngineError {
    pub fn is_infeasible(&self) -> bool {
        matches!(self, EngineError::Window { source, .. } if source.is_infeasible())
    }
}

/// Prior-window advisory VER forecast for `interval`, if the window before
/// `w` scheduled it.
fn prior_advisory(forecasts: &ForecastSeries, w: usize, interval: usize) -> Option<&[f64]> {
    let prev = forecasts.windows.get(w.checked_sub(1)?)?;
    prev.intervals
        .iter()
        .skip(1)
        .find(|f| f.interval == interval)
        .and_then(|f| f.ver.as_deref())
}

fn validate_inputs(
    spec: &SystemSpec,
    mode: &DispatchMode,
    forecasts: &ForecastSeries,
    requirements: &RequirementSchedule,
    initial_dispatch: &[f64],
) -> Result<(), EngineError> {
    spec.validate().map_err(|e| EngineError::InvalidInput(e.to_string()))?;
    mode.validate(spec.ver_units.len())?;
    forecasts
        .validate(spec.loads.len(), spec.ver_units.len())
        .map_err(EngineError::InvalidInput)?;
    if requirements.per_window.len() != forecasts.windows.len() {
        return Err(EngineError::InvalidInput(format!(
            "requirements cover {} windows, forecasts {}",
            requirements.per_window.len(),
            forecasts.windows.len()
        )));
    }
    if initial_dispatch.len() != spec.generators.len() {
        return Err(EngineError::InvalidInput(
            "initial_dispatch needs one value per generator".into(),
        ));
    }
    Ok(())
}

/// Runs the rolling cascade once for a fixed realization.
pub fn run_rolling(
    spec: &SystemSpec,
    mode: &DispatchMode,
    forecasts: &ForecastSeries,
    realization: &Realization,
    requirements: &RequirementSchedule,
    initial_dispatch: &[f64],
) -> Result<RollingTrajectory, EngineError> {
    validate_inputs(spec, mode, forecasts, requirements, initial_dispatch)?;
    let mut carried = initial_dispatch.to_vec();
    let mut records = Vec::with_capacity(forecasts.windows.len());
    let mut windows = Vec::with_capacity(forecasts.windows.len());

    for (w, window) in forecasts.windows.iter().enumerate() {
        let horizon_len = window.intervals.len().min(spec.window_length);
        let intervals = &window.intervals[..horizon_len];
        let start = window.origin;
        let reqs = &requirements.per_window[w];
        if reqs.len() < horizon_len {
            return Err(EngineError::InvalidInput(format!(
                "window {w}: {} requirements for {horizon_len} intervals",
                reqs.len()
            )));
        }

        let prior = prior_advisory(forecasts, w, start);
        let realized: Vec<f64> = match (realization.ver.get(&start), intervals[0].ver.as_ref(), prior) {
            (Some(r), _, _) | (None, Some(r), _) => r.clone(),
            (None, None, Some(p)) => p.to_vec(),
            (None, None, None) => {
                return Err(EngineError::InvalidInput(format!(
                    "window {w}: no realized VER output for binding interval {start}"
                )))
            }
        };
        if realized.len() != spec.ver_units.len() {
            return Err(EngineError::InvalidInput(format!(
                "realization for interval {start} needs {} values",
                spec.ver_units.len()
            )));
        }

        let binding_total = match mode.caps_at(start) {
            None => binding_ver_total(&realized, None),
            Some(caps) => {
                let inherited = match prior {
                    Some(p) => Some(apply_cap(p, caps)),
                    None if w == 0 && mode.first_window_binding_cap => {
                        intervals[0].ver.as_deref().map(|own| apply_cap(own, caps))
                    }
                    None => None,
                };
                binding_ver_total(&realized, inherited.as_deref())
            }
        };

        let mut ver_total = vec![binding_total];
        for f in &intervals[1..] {
            let forecast = f.ver.as_deref().unwrap_or_default();
            ver_total.push(mode.scheduled_advisory_total(forecast, f.interval));
        }

        let input = WindowInput {
            start_interval: start,
            horizon: intervals.iter().map(|f| f.interval).collect(),
            load_forecast: intervals.iter().map(|f| f.load.clone()).collect(),
            ver_total,
            frp_req: reqs[..horizon_len].to_vec(),
            initial_dispatch: carried.clone(),
        };
        let sol = solve_window(spec, &input).map_err(|source| EngineError::Window {
            window: w,
            start,
            source,
        })?;

        let dispatch = sol.binding_dispatch().to_vec();
        let shed = sol.binding_shed().to_vec();
        records.push(BindingRecord {
            interval: start,
            cost: interval_cost(spec, &dispatch, &shed),
            emissions: interval_emissions(spec, &dispatch),
            ver_total: input.ver_total[0],
            price_energy: sol.price_energy[0],
            advisory_price_fru: sol.price_fru[1..].to_vec(),
            advisory_price_frd: sol.price_frd[1..].to_vec(),
            transfers: detect_transfer(&sol, TRANSFER_PRICE_TOL),
            dispatch: dispatch.clone(),
            shed,
        });
        windows.push(sol);
        carried = dispatch;
    }

    Ok(RollingTrajectory {
        mode: mode.name.clone(),
        initial_dispatch: initial_dispatch.to_vec(),
        records,
        windows,
    })
}

/// How Monte Carlo trials are evaluated. Without the `parallel` feature both
/// variants run sequentially.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

fn map_trials<T, F>(n: usize, execution: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match execution {
        #[cfg(feature = "parallel")]
        Execution::Parallel => (0..n).into_par_iter().map(f).collect(),
        _ => (0..n).map(f).collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McSettings {
    pub trials: usize,
    pub master_seed: u64,
    /// Standard deviation of each VER unit's realization as a fraction of its forecast.
    pub error_fraction: f64,
    pub execution: Execution,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McSummary {
    pub mode: String,
    pub trials: usize,
    pub master_seed: u64,
    /// Binding intervals, aligned with the statistic vectors below.
    pub intervals: Vec<usize>,
    pub mean_cost: Vec<f64>,
    pub sd_cost: Vec<f64>,
    pub mean_emissions: Vec<f64>,
    pub sd_emissions: Vec<f64>,
    /// False when fewer than two feasible trials exist; the sd fields then read 0.
    pub sd_defined: bool,
    pub requirements: RequirementSchedule,
    pub infeasible_trial_count: usize,
}

impl McSummary {
    pub fn feasible_trials(&self) -> usize {
        self.trials - self.infeasible_trial_count
    }

    pub fn total_cost(&self) -> f64 {
        self.mean_cost.iter().sum()
    }

    pub fn total_emissions(&self) -> f64 {
        self.mean_emissions.iter().sum()
    }
}

/// Samples binding realizations for every window after the first: each unit
/// is drawn around the advisory forecast the previous window held for it.
pub fn sample_trial_realization(
    forecasts: &ForecastSeries,
    error_fraction: f64,
    master_seed: u64,
    trial: usize,
) -> Realization {
    let mut rng = rng::trial_rng(master_seed, trial);
    let mut out = Realization::default();
    for (w, window) in forecasts.windows.iter().enumerate().skip(1) {
        if let Some(mean) = prior_advisory(forecasts, w, window.origin) {
            out.ver
                .insert(window.origin, sample_realization(mean, error_fraction, &mut rng));
        }
    }
    out
}

fn mean_sd(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Runs `settings.trials` independent cascades and aggregates binding-interval
/// cost and emissions. Infeasible trials are counted and left out of the
/// statistics; reduction is in trial order so results do not depend on
/// `settings.execution`.
pub fn monte_carlo(
    spec: &SystemSpec,
    mode: &DispatchMode,
    forecasts: &ForecastSeries,
    requirements: &RequirementSchedule,
    initial_dispatch: &[f64],
    settings: &McSettings,
) -> Result<McSummary, EngineError> {
    if settings.trials == 0 {
        return Err(EngineError::InvalidInput("at least one trial is required".into()));
    }
    if !(settings.error_fraction >= 0.0 && settings.error_fraction.is_finite()) {
        return Err(EngineError::InvalidInput("error_fraction must be >= 0".into()));
    }
    validate_inputs(spec, mode, forecasts, requirements, initial_dispatch)?;

    let outcomes = map_trials(settings.trials, settings.execution, |j| {
        let realization = sample_trial_realization(forecasts, settings.error_fraction, settings.master_seed, j);
        run_rolling(spec, mode, forecasts, &realization, requirements, initial_dispatch)
    });

    let mut costs: Vec<Vec<f64>> = Vec::new();
    let mut emissions: Vec<Vec<f64>> = Vec::new();
    let mut intervals = Vec::new();
    let mut infeasible = 0usize;
    for outcome in outcomes {
        match outcome {
            Ok(traj) => {
                if intervals.is_empty() {
                    intervals = traj.records.iter().map(|r| r.interval).collect();
                    costs = vec![Vec::with_capacity(settings.trials); intervals.len()];
                    emissions = vec![Vec::with_capacity(settings.trials); intervals.len()];
                }
                for (b, rec) in traj.records.iter().enumerate() {
                    costs[b].push(rec.cost);
                    emissions[b].push(rec.emissions);
                }
            }
            Err(e) if e.is_infeasible() => infeasible += 1,
            Err(e) => return Err(e),
        }
    }
    if infeasible == settings.trials {
        return Err(EngineError::AllTrialsInfeasible(settings.trials));
    }

    let (mean_cost, sd_cost): (Vec<f64>, Vec<f64>) = costs.iter().map(|c| mean_sd(c)).unzip();
    let (mean_emissions, sd_emissions): (Vec<f64>, Vec<f64>) = emissions.iter().map(|e| mean_sd(e)).unzip();
    Ok(McSummary {
        mode: mode.name.clone(),
        trials: settings.trials,
        master_seed: settings.master_seed,
        intervals,
        mean_cost,
        sd_cost,
        mean_emissions,
        sd_emissions,
        sd_defined: settings.trials - infeasible >= 2,
        requirements: requirements.clone(),
        infeasible_trial_count: infeasible,
    })
}

/// Realizations drawn once and shared by every mode when estimating FRP
/// requirements, so mode-to-mode differences reflect the caps alone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RequirementStudy {
    /// Advisory interval whose forecast revision is sampled.
    pub interval: usize,
    pub advisory: Vec<f64>,
    pub realizations: Vec<Vec<f64>>,
}

impl RequirementStudy {
    /// Draws `n` realizations of the first advisory interval of the first window.
    pub fn draw(
        forecasts: &ForecastSeries,
        error_fraction: f64,
        n: usize,
        master_seed: u64,
    ) -> Result<Self, EngineError> {
        let first = forecasts
            .windows
            .first()
            .and_then(|w| w.intervals.get(1))
            .ok_or_else(|| EngineError::InvalidInput("first window has no advisory interval".into()))?;
        let advisory = first
            .ver
            .clone()
            .ok_or_else(|| EngineError::InvalidInput("advisory VER forecast missing".into()))?;
        if !(error_fraction >= 0.0 && error_fraction.is_finite()) {
            return Err(EngineError::InvalidInput("error_fraction must be >= 0".into()));
        }
        let mut rng = rng::requirement_rng(master_seed);
        let realizations = (0..n)
            .map(|_| sample_realization(&advisory, error_fraction, &mut rng))
            .collect();
        Ok(RequirementStudy {
            interval: first.interval,
            advisory,
            realizations,
        })
    }

    /// Net-load forecast-error samples as `mode` would experience them.
    pub fn sample_set(&self, mode: &DispatchMode) -> SampleSet {
        let samples = match mode.caps_at(self.interval) {
            None => self
                .realizations
                .iter()
                .map(|r| net_load_delta_fbd(r, &self.advisory, 0.0))
                .collect(),
            Some(caps) => {
                let capped: f64 = apply_cap(&self.advisory, caps).iter().sum();
                self.realizations
                    .iter()
                    .map(|r| net_load_delta_rfbd(r, capped))
                    .collect()
            }
        };
        SampleSet::new(mode.name.clone(), samples)
    }

    pub fn requirement(&self, mode: &DispatchMode) -> Result<FrpRequirement, EngineError> {
        Ok(requirements_from_samples(&self.sample_set(mode))?)
    }
}

/// Summed binding-interval cost and emissions of one mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeTotals {
    pub mode: String,
    pub cost: f64,
    pub emissions: f64,
}

pub fn totals_report(summaries: &[McSummary]) -> Vec<ModeTotals> {
    summaries
        .iter()
        .map(|s| ModeTotals {
            mode: s.mode.clone(),
            cost: s.total_cost(),
            emissions: s.total_emissions(),
        })
        .collect()
}

pub fn trajectory_totals(trajectories: &[RollingTrajectory]) -> Vec<ModeTotals> {
    trajectories
        .iter()
        .map(|t| ModeTotals {
            mode: t.mode.clone(),
            cost: t.total_cost(),
            emissions: t.total_emissions(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::case_study;
    use crate::uncertainty::{IntervalForecast, WindowForecast};

    fn cap_mode(delta: f64) -> DispatchMode {
        DispatchMode::rfbd(CapProfile::uniform(delta, 2), false)
    }

    #[test]
    fn mode_validation() {
        let mut m = DispatchMode::fbd();
        m.caps = Some(CapProfile::uniform(1.0, 2));
        assert!(m.validate(2).is_err());
        assert!(cap_mode(1.0).validate(2).is_ok());
        assert!(cap_mode(1.0).validate(3).is_err());
        assert_eq!(cap_mode(1.0).name, "Cap-1");
    }

    #[test]
    fn capped_first_window_executes_sixty_megawatts() {
        let spec = case_study::system();
        let fc = case_study::forecasts();
        let reqs = RequirementSchedule::uniform(&fc, FrpRequirement::new(5.6451, 0.0));
        let traj = run_rolling(&spec, &cap_mode(0.0), &fc, &Realization::perfect(), &reqs, &[60.0, 0.0]).unwrap();
        assert_eq!(traj.records.len(), 2);
        assert!((traj.records[0].dispatch[0] - 60.0).abs() < 1e-9);
        assert!((traj.records[0].cost - 100.0).abs() < 1e-9);
        assert!(traj.max_ramp_violation(&spec) <= 1e-8);
    }

    #[test]
    fn inherited_first_window_cap_raises_g1() {
        let spec = case_study::system();
        let fc = case_study::forecasts();
        let reqs = RequirementSchedule::uniform(&fc, FrpRequirement::new(3.6451, 0.0));
        let mode = DispatchMode::rfbd(CapProfile::uniform(1.0, 2), true);
        let traj = run_rolling(&spec, &mode, &fc, &Realization::perfect(), &reqs, &[62.0, 0.0]).unwrap();
        assert!((traj.records[0].dispatch[0] - 62.0).abs() < 1e-9);
        assert!((traj.records[0].cost - 62.0 * 20.0 / 12.0).abs() < 1e-9);
    }

    #[test]
    fn truncated_single_interval_window_is_merit_order() {
        let spec = case_study::system();
        let fc = ForecastSeries {
            windows: vec![WindowForecast {
                origin: 4,
                intervals: vec![IntervalForecast {
                    interval: 4,
                    load: vec![90.0],
                    ver: Some(vec![10.0, 5.0]),
                }],
            }],
        };
        let reqs = RequirementSchedule::uniform(&fc, FrpRequirement::ZERO);
        let traj = run_rolling(
            &spec,
            &DispatchMode::fbd(),
            &fc,
            &Realization::perfect(),
            &reqs,
            &[70.0, 0.0],
        )
        .unwrap();
        assert_eq!(traj.records.len(), 1);
        assert!((traj.records[0].dispatch[0] - 75.0).abs() < 1e-9);
        assert!(traj.records[0].dispatch[1].abs() < 1e-9);
    }

    #[test]
    fn infeasible_window_is_identified() {
        let spec = case_study::system();
        let fc = case_study::forecasts();
        let reqs = RequirementSchedule::uniform(&fc, FrpRequirement::ZERO);
        let mut realization = Realization::default();
        // 55 MW of VER at t+1 leaves 30 MW of net load, below G1's ramp floor of 45
        realization.ver.insert(1, vec![30.0, 25.0]);
        let err = run_rolling(&spec, &DispatchMode::fbd(), &fc, &realization, &reqs, &[60.0, 0.0]).unwrap_err();
        assert!(err.is_infeasible());
        assert!(matches!(
            err,
            EngineError::Window {
                window: 1,
                start: 1,
                ..
            }
        ));
    }

    #[test]
    fn zero_error_fraction_gives_identical_trials() {
        let spec = case_study::system();
        let fc = case_study::forecasts();
        let reqs = RequirementSchedule::uniform(&fc, FrpRequirement::new(5.6451, 0.0));
        let settings = McSettings {
            trials: 16,
            master_seed: 3,
            error_fraction: 0.0,
            execution: Execution::Sequential,
        };
        let s = monte_carlo(&spec, &cap_mode(0.0), &fc, &reqs, &[60.0, 0.0], &settings).unwrap();
        assert!(s.sd_cost.iter().all(|sd| *sd == 0.0));
        assert!((s.mean_cost[1] - 75.0).abs() < 1e-9);
        assert_eq!(s.infeasible_trial_count, 0);
    }

    #[test]
    fn single_trial_flags_undefined_sd() {
        let spec = case_study::system();
        let fc = case_study::forecasts();
        let reqs = RequirementSchedule::uniform(&fc, FrpRequirement::ZERO);
        let settings = McSettings {
            trials: 1,
            master_seed: 11,
            error_fraction: 0.1,
            execution: Execution::Parallel,
        };
        let s = monte_carlo(&spec, &DispatchMode::fbd(), &fc, &reqs, &[60.0, 0.0], &settings).unwrap();
        assert!(!s.sd_defined);
        assert_eq!(s.sd_cost, vec![0.0, 0.0]);
    }

    #[test]
    fn zero_trials_rejected() {
        let spec = case_study::system();
        let fc = case_study::forecasts();
        let reqs = RequirementSchedule::uniform(&fc, FrpRequirement::ZERO);
        let settings = McSettings {
            trials: 0,
            master_seed: 0,
            error_fraction: 0.1,
            execution: Execution::Sequential,
        };
        assert!(monte_carlo(&spec, &DispatchMode::fbd(), &fc, &reqs, &[60.0, 0.0], &settings).is_err());
    }

    #[test]
    fn empty_totals() {
        assert!(totals_report(&[]).is_empty());
        let t = RollingTrajectory {
            mode: "x".into(),
            initial_dispatch: vec![],
            records: vec![],
            windows: vec![],
        };
        assert_eq!(t.total_cost(), 0.0);
        assert_eq!(t.total_emissions(), 0.0);
    }

    #[test]
    fn zero_error_requirements_vanish() {
        let study = RequirementStudy::draw(&case_study::forecasts(), 0.0, 50, 1).unwrap();
        for (mode, _) in case_study::modes() {
            assert_eq!(study.requirement(&mode).unwrap(), FrpRequirement::ZERO);
        }
    }
}
