//! CSV writers. Comma separated, header row, LF endings, numbers with at most
//! six fractional digits.

use std::path::{Path, PathBuf};

use rfbd_core::diagnostics::BindingPattern;
use rfbd_core::engine::{McSummary, ModeTotals, RollingTrajectory};
use rfbd_core::frp::Histogram;
use rfbd_core::market::{FrpRequirement, SystemSpec};

use crate::CliError;

pub const REQUIREMENTS_FILE: &str = "frp_requirements.csv";
pub const HISTOGRAM_FILE: &str = "histogram.csv";
pub const DISPATCH_FILE: &str = "binding_dispatch.csv";
pub const MC_SUMMARY_FILE: &str = "mc_summary.csv";
pub const TOTALS_FILE: &str = "totals.csv";

/// Fixed-point with up to six fractional digits, trailing zeros dropped.
pub fn num(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

/// `FRD@1 cap=G2 ramp=G1 price=30`, patterns joined by `;`.
pub fn patterns(list: &[BindingPattern]) -> String {
    list.iter()
        .map(|p| {
            format!(
                "{}@{} cap={} ramp={} price={}",
                p.direction.label(),
                p.interval,
                p.capacity_bound_units.join("+"),
                p.ramp_bound_units.join("+"),
                num(p.price)
            )
        })
        .collect::<Vec<_>>()
        .join(";")
}

fn write(dir: &Path, name: &str, header: &[&str], rows: Vec<Vec<String>>) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    let io = |e: csv::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(&path)
        .map_err(io)?;
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(&row).map_err(io)?;
    }
    w.flush()
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(path)
}

pub struct RequirementRow<'a> {
    pub mode: &'a str,
    pub interval: usize,
    pub requirement: FrpRequirement,
    pub source: &'a str,
}

pub fn write_requirements(dir: &Path, rows: &[RequirementRow]) -> Result<PathBuf, CliError> {
    let body = rows
        .iter()
        .map(|r| {
            vec![
                r.mode.to_string(),
                r.interval.to_string(),
                num(r.requirement.fru),
                num(r.requirement.frd),
                r.source.to_string(),
            ]
        })
        .collect();
    write(
        dir,
        REQUIREMENTS_FILE,
        &["mode", "interval", "R_U", "R_D", "source"],
        body,
    )
}

pub fn write_histograms(dir: &Path, hists: &[(&str, &Histogram)]) -> Result<PathBuf, CliError> {
    let mut body = Vec::new();
    for (mode, h) in hists {
        for (start, end, count) in h.bins() {
            body.push(vec![mode.to_string(), num(start), num(end), count.to_string()]);
        }
    }
    write(dir, HISTOGRAM_FILE, &["mode", "bin_start", "bin_end", "count"], body)
}

pub fn write_binding_dispatch(
    dir: &Path,
    spec: &SystemSpec,
    trajectories: &[RollingTrajectory],
) -> Result<PathBuf, CliError> {
    let mut body = Vec::new();
    for t in trajectories {
        for rec in &t.records {
            let first = |v: &[f64]| v.first().map_or_else(String::new, |p| num(*p));
            let shed: f64 = rec.shed.iter().sum();
            for (g, mw) in spec.generators.iter().zip(&rec.dispatch) {
                body.push(vec![
                    t.mode.clone(),
                    rec.interval.to_string(),
                    g.id.clone(),
                    num(*mw),
                    num(shed),
                    num(rec.cost),
                    num(rec.emissions),
                    num(rec.price_energy),
                    first(&rec.advisory_price_fru),
                    first(&rec.advisory_price_frd),
                    patterns(&rec.transfers),
                ]);
            }
        }
    }
    write(
        dir,
        DISPATCH_FILE,
        &[
            "mode",
            "interval",
            "unit",
            "mw",
            "shed_mw",
            "cost",
            "emissions",
            "lambda",
            "phi_up_next",
            "phi_down_next",
            "transfers",
        ],
        body,
    )
}

pub fn write_mc_summary(dir: &Path, summaries: &[McSummary]) -> Result<PathBuf, CliError> {
    let mut body = Vec::new();
    for s in summaries {
        for (b, interval) in s.intervals.iter().enumerate() {
            body.push(vec![
                s.mode.clone(),
                s.trials.to_string(),
                interval.to_string(),
                num(s.mean_cost[b]),
                num(s.sd_cost[b]),
                num(s.mean_emissions[b]),
                num(s.sd_emissions[b]),
                s.infeasible_trial_count.to_string(),
                s.sd_defined.to_string(),
            ]);
        }
    }
    write(
        dir,
        MC_SUMMARY_FILE,
        &[
            "mode",
            "trials",
            "interval",
            "mean_cost",
            "sd_cost",
            "mean_emissions",
            "sd_emissions",
            "infeasible_count",
            "sd_defined",
        ],
        body,
    )
}

pub fn write_totals(dir: &Path, totals: &[ModeTotals]) -> Result<PathBuf, CliError> {
    let body = totals
        .iter()
        .map(|t| vec![t.mode.clone(), num(t.cost), num(t.emissions)])
        .collect();
    write(dir, TOTALS_FILE, &["mode", "total_cost", "total_emissions"], body)
}
