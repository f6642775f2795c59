//! Experiment commands. Each returns the files it wrote.

use std::path::{Path, PathBuf};

use rfbd_core::engine::{
    monte_carlo, run_rolling, sample_trial_realization, totals_report, trajectory_totals, Execution, McSettings,
    McSummary, RequirementSchedule, RequirementStudy, RollingTrajectory,
};
use rfbd_core::frp::{build_histogram, Histogram};
use rfbd_core::market::FrpRequirement;
use rfbd_core::uncertainty::Realization;

use crate::config::{ModeConfig, RunConfig};
use crate::output::{self, RequirementRow};
use crate::CliError;

/// Requirement for one mode and where it came from.
pub struct ModeRequirement {
    pub mode: String,
    pub interval: usize,
    pub requirement: FrpRequirement,
    pub fixed: bool,
    pub histogram: Histogram,
}

fn study(cfg: &RunConfig) -> Result<RequirementStudy, CliError> {
    let s = &cfg.sampling;
    RequirementStudy::draw(&cfg.forecasts, s.error_fraction, s.requirement_samples, s.master_seed)
        .map_err(|e| CliError::Config(format!("requirement sampling: {e}")))
}

pub fn compute_requirements(cfg: &RunConfig) -> Result<Vec<ModeRequirement>, CliError> {
    let study = study(cfg)?;
    cfg.modes
        .iter()
        .map(|m| {
            let mode = m.dispatch_mode();
            let set = study.sample_set(&mode);
            let histogram = build_histogram(&set, cfg.sampling.bin_width).map_err(CliError::runtime)?;
            let (requirement, fixed) = match m.requirement {
                Some(r) => (r, true),
                None => (study.requirement(&mode).map_err(CliError::runtime)?, false),
            };
            Ok(ModeRequirement {
                mode: m.name.clone(),
                interval: study.interval,
                requirement,
                fixed,
                histogram,
            })
        })
        .collect()
}

fn schedule(cfg: &RunConfig, req: FrpRequirement) -> RequirementSchedule {
    RequirementSchedule::uniform(&cfg.forecasts, req)
}

fn requirement_for(cfg: &RunConfig, mode: &ModeConfig) -> Result<FrpRequirement, CliError> {
    match mode.requirement {
        Some(r) => Ok(r),
        None => study(cfg)?
            .requirement(&mode.dispatch_mode())
            .map_err(CliError::runtime),
    }
}

/// One deterministic cascade; with a seed the binding VER output is drawn as
/// trial 0 of that seed instead of taken from the forecasts.
pub fn compute_run(cfg: &RunConfig, mode: &ModeConfig, seed: Option<u64>) -> Result<RollingTrajectory, CliError> {
    let req = requirement_for(cfg, mode)?;
    let realization = match seed {
        Some(s) => sample_trial_realization(&cfg.forecasts, cfg.sampling.error_fraction, s, 0),
        None => Realization::perfect(),
    };
    run_rolling(
        &cfg.system,
        &mode.dispatch_mode(),
        &cfg.forecasts,
        &realization,
        &schedule(cfg, req),
        &mode.initial_dispatch,
    )
    .map_err(CliError::runtime)
}

pub fn compute_mc(cfg: &RunConfig) -> Result<Vec<McSummary>, CliError> {
    let reqs = compute_requirements(cfg)?;
    let settings = McSettings {
        trials: cfg.sampling.mc_trials,
        master_seed: cfg.sampling.master_seed,
        error_fraction: cfg.sampling.error_fraction,
        execution: Execution::Parallel,
    };
    cfg.modes
        .iter()
        .zip(&reqs)
        .map(|(m, r)| {
            monte_carlo(
                &cfg.system,
                &m.dispatch_mode(),
                &cfg.forecasts,
                &schedule(cfg, r.requirement),
                &m.initial_dispatch,
                &settings,
            )
            .map_err(|e| CliError::Runtime(format!("mode {}: {e}", m.name)))
        })
        .collect()
}

pub fn requirements(cfg: &RunConfig, out: &Path) -> Result<Vec<PathBuf>, CliError> {
    let reqs = compute_requirements(cfg)?;
    let rows: Vec<RequirementRow> = reqs
        .iter()
        .map(|r| RequirementRow {
            mode: &r.mode,
            interval: r.interval,
            requirement: r.requirement,
            source: if r.fixed { "fixed" } else { "sampled" },
        })
        .collect();
    let hists: Vec<(&str, &Histogram)> = reqs.iter().map(|r| (r.mode.as_str(), &r.histogram)).collect();
    Ok(vec![
        output::write_requirements(out, &rows)?,
        output::write_histograms(out, &hists)?,
    ])
}

pub fn run(cfg: &RunConfig, mode: &str, seed: Option<u64>, out: &Path) -> Result<Vec<PathBuf>, CliError> {
    let mode = cfg.mode(mode)?;
    let traj = compute_run(cfg, mode, seed)?;
    Ok(vec![output::write_binding_dispatch(out, &cfg.system, &[traj])?])
}

pub fn mc(cfg: &RunConfig, out: &Path) -> Result<Vec<PathBuf>, CliError> {
    let summaries = compute_mc(cfg)?;
    Ok(vec![
        output::write_mc_summary(out, &summaries)?,
        output::write_totals(out, &totals_report(&summaries))?,
    ])
}

/// Everything at once, plus a plain-text digest on stdout.
pub fn report(cfg: &RunConfig, out: &Path) -> Result<Vec<PathBuf>, CliError> {
    let mut files = requirements(cfg, out)?;
    let reqs = compute_requirements(cfg)?;

    let mut trajectories = Vec::new();
    for m in &cfg.modes {
        trajectories.push(compute_run(cfg, m, None)?);
    }
    files.push(output::write_binding_dispatch(out, &cfg.system, &trajectories)?);

    let summaries = compute_mc(cfg)?;
    let totals = totals_report(&summaries);
    files.push(output::write_mc_summary(out, &summaries)?);
    files.push(output::write_totals(out, &totals)?);

    println!(
        "FRP requirements at interval {} (MW)",
        reqs.first().map_or(0, |r| r.interval)
    );
    println!("{:<12} {:>10} {:>10}", "mode", "R_U", "R_D");
    for r in &reqs {
        println!("{:<12} {:>10.4} {:>10.4}", r.mode, r.requirement.fru, r.requirement.frd);
    }
    println!();
    println!("First binding interval (forecast realization)");
    println!(
        "{:<12} {:>10} {:>10} {:>10} {:>10} {:>8} {:>8}",
        "mode", "g1", "g2", "cost", "emis", "phiU", "phiD"
    );
    for t in &trajectories {
        let r = &t.records[0];
        let g = |i: usize| r.dispatch.get(i).copied().unwrap_or(f64::NAN);
        let p = |v: &[f64]| v.first().copied().unwrap_or(0.0);
        println!(
            "{:<12} {:>10.4} {:>10.4} {:>10.4} {:>10.4} {:>8.2} {:>8.2}",
            t.mode,
            g(0),
            g(1),
            r.cost,
            r.emissions,
            p(&r.advisory_price_fru),
            p(&r.advisory_price_frd)
        );
    }
    println!();
    println!("Monte Carlo means over {} trials", cfg.sampling.mc_trials);
    println!(
        "{:<12} {:>9} {:>10} {:>10} {:>11}",
        "mode", "interval", "cost", "emis", "infeasible"
    );
    for s in &summaries {
        for (b, interval) in s.intervals.iter().enumerate() {
            println!(
                "{:<12} {:>9} {:>10.4} {:>10.4} {:>11}",
                s.mode, interval, s.mean_cost[b], s.mean_emissions[b], s.infeasible_trial_count
            );
        }
    }
    println!();
    println!("Totals across binding intervals (Monte Carlo)");
    for t in &totals {
        println!("{:<12} cost {:>10.4}  emissions {:>8.4}", t.mode, t.cost, t.emissions);
    }
    let deterministic = trajectory_totals(&trajectories);
    println!();
    println!("Totals across binding intervals (forecast realization)");
    for t in &deterministic {
        println!("{:<12} cost {:>10.4}  emissions {:>8.4}", t.mode, t.cost, t.emissions);
    }
    Ok(files)
}
