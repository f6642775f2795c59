//! VER forecasts, capping, binding-interval realizations and net-load
//! forecast-error samples.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

/// Forecast data for one interval as seen from a window origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntervalForecast {
    pub interval: usize,
    /// MW per load.
    pub load: Vec<f64>,
    /// MW per VER unit. `None` is only meaningful for a window's binding
    /// interval and defers to the realization (or the prior advisory value).
    pub ver: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowForecast {
    pub origin: usize,
    pub intervals: Vec<IntervalForecast>,
}

impl WindowForecast {
    pub fn at(&self, interval: usize) -> Option<&IntervalForecast> {
        self.intervals.iter().find(|f| f.interval == interval)
    }
}

/// Forecasts for every window of a rolling study, in execution order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForecastSeries {
    pub windows: Vec<WindowForecast>,
}

impl ForecastSeries {
    pub fn validate(&self, loads: usize, ver_units: usize) -> Result<(), String> {
        for (w, win) in self.windows.iter().enumerate() {
            if win.intervals.is_empty() {
                return Err(format!("window {w} has no intervals"));
            }
            if win.intervals[0].interval != win.origin {
                return Err(format!("window {w} must start at its origin {}", win.origin));
            }
            if w > 0 && win.origin <= self.windows[w - 1].origin {
                return Err(format!("window {w} origin must increase"));
            }
            for (k, f) in win.intervals.iter().enumerate() {
                if k > 0 && f.interval != win.intervals[k - 1].interval + 1 {
                    return Err(format!("window {w} intervals must be consecutive"));
                }
                if f.load.len() != loads {
                    return Err(format!("window {w} interval {}: expected {loads} loads", f.interval));
                }
                if f.load.iter().any(|d| !(*d >= 0.0 && d.is_finite())) {
                    return Err(format!("window {w} interval {}: loads must be >= 0", f.interval));
                }
                match &f.ver {
                    Some(v) if v.len() != ver_units => {
                        return Err(format!(
                            "window {w} interval {}: expected {ver_units} VER values",
                            f.interval
                        ))
                    }
                    Some(v) if v.iter().any(|x| !(*x >= 0.0 && x.is_finite())) => {
                        return Err(format!(
                            "window {w} interval {}: VER forecasts must be >= 0",
                            f.interval
                        ))
                    }
                    None if k > 0 => {
                        return Err(format!(
                            "window {w} interval {}: advisory VER forecast missing",
                            f.interval
                        ))
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }
}

/// Per-unit cap amounts. `per_unit` applies to every interval unless an
/// interval-specific override is present.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CapProfile {
    pub per_unit: Vec<f64>,
    #[serde(default)]
    pub per_interval: BTreeMap<usize, Vec<f64>>,
}

impl CapProfile {
    pub fn uniform(delta: f64, units: usize) -> Self {
        CapProfile {
            per_unit: vec![delta; units],
            per_interval: BTreeMap::new(),
        }
    }

    pub fn at(&self, interval: usize) -> &[f64] {
        self.per_interval.get(&interval).unwrap_or(&self.per_unit)
    }

    pub fn total_at(&self, interval: usize) -> f64 {
        self.at(interval).iter().sum()
    }

    pub fn validate(&self, units: usize) -> Result<(), String> {
        let rows = std::iter::once(&self.per_unit).chain(self.per_interval.values());
        for caps in rows {
            if caps.len() != units {
                return Err(format!("cap profile needs {units} entries, got {}", caps.len()));
            }
            if caps.iter().any(|c| !(*c >= 0.0 && c.is_finite())) {
                return Err("caps must be finite and >= 0".into());
            }
        }
        Ok(())
    }
}

/// Realized binding VER output per interval and unit. Intervals absent from
/// the map take their forecast value.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Realization {
    pub ver: BTreeMap<usize, Vec<f64>>,
}

impl Realization {
    pub fn perfect() -> Self {
        Realization::default()
    }
}

/// Capped advisory forecast per unit, `max(0, v̂ − Δ)`.
pub fn apply_cap(forecast: &[f64], caps: &[f64]) -> Vec<f64> {
    debug_assert_eq!(forecast.len(), caps.len());
    forecast.iter().zip(caps).map(|(v, c)| (v - c).max(0.0)).collect()
}

/// Aggregate VER injection scheduled in an advisory interval.
pub fn advisory_ver_total(capped: &[f64]) -> f64 {
    capped.iter().sum()
}

/// Aggregate VER injection in a binding interval. With an inherited cap the
/// total is limited by the capped total, so one unit's surplus can cover
/// another's shortfall.
pub fn binding_ver_total(realized: &[f64], prior_caps: Option<&[f64]>) -> f64 {
    let total: f64 = realized.iter().sum();
    match prior_caps {
        Some(caps) => total.min(caps.iter().sum()),
        None => total,
    }
}

/// Draws each unit from `Normal(v̂, (fraction·v̂)²)`, clamped at zero.
/// One normal variate is consumed per unit regardless of the fraction.
pub fn sample_realization<R: Rng + ?Sized>(forecast: &[f64], error_fraction: f64, rng: &mut R) -> Vec<f64> {
    forecast
        .iter()
        .map(|&mean| {
            let z: f64 = rng.sample(rand_distr::StandardNormal);
            (mean + error_fraction * mean * z).max(0.0)
        })
        .collect()
}

/// Net-load forecast error under raw-forecast dispatch:
/// `Σ(advisory − realized)` over VER units plus any load revision.
pub fn net_load_delta_fbd(realized: &[f64], advisory: &[f64], load_delta: f64) -> f64 {
    let ver: f64 = advisory.iter().zip(realized).map(|(a, r)| a - r).sum();
    ver + load_delta
}

/// Net-load forecast error under capped dispatch: the capped advisory total
/// minus the binding total it limits. Never negative.
pub fn net_load_delta_rfbd(realized: &[f64], capped_advisory_total: f64) -> f64 {
    let binding = binding_ver_total(realized, None).min(capped_advisory_total);
    capped_advisory_total - binding
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use proptest::prelude::*;

    #[test]
    fn cap_examples() {
        assert_eq!(apply_cap(&[20.0, 20.0], &[1.0, 1.0]), vec![19.0, 19.0]);
        assert_eq!(apply_cap(&[20.0, 20.0], &[0.0, 0.0]), vec![20.0, 20.0]);
        assert_eq!(apply_cap(&[0.5, 20.0], &[1.0, 1.0]), vec![0.0, 19.0]);
    }

    #[test]
    fn advisory_totals() {
        assert_eq!(advisory_ver_total(&[19.0, 19.0]), 38.0);
        assert_eq!(advisory_ver_total(&[]), 0.0);
        assert_eq!(advisory_ver_total(&[20.0, 20.0]), 40.0);
    }

    #[test]
    fn binding_totals_cross_feed() {
        assert_eq!(binding_ver_total(&[22.0, 15.0], Some(&[19.0, 19.0])), 37.0);
        assert_eq!(binding_ver_total(&[20.0, 20.0], Some(&[19.0, 19.0])), 38.0);
        assert_eq!(binding_ver_total(&[20.0, 20.0], None), 40.0);
    }

    #[test]
    fn zero_fraction_reproduces_forecast() {
        let mut r = rng::trial_rng(9, 0);
        assert_eq!(sample_realization(&[20.0, 7.5], 0.0, &mut r), vec![20.0, 7.5]);
    }

    #[test]
    fn sampled_moments_match_declared_distribution() {
        let mut r = rng::trial_rng(2024, 3);
        let n = 100_000;
        let xs: Vec<f64> = (0..n).map(|_| sample_realization(&[20.0], 0.1, &mut r)[0]).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!((mean - 20.0).abs() < 0.05, "mean {mean}");
        assert!((var.sqrt() - 2.0).abs() < 0.05, "sd {}", var.sqrt());
    }

    #[test]
    fn delta_examples() {
        assert_eq!(net_load_delta_fbd(&[18.0, 19.0], &[20.0, 20.0], 0.0), 3.0);
        assert_eq!(net_load_delta_fbd(&[20.0, 20.0], &[20.0, 20.0], 0.0), 0.0);
        assert_eq!(net_load_delta_fbd(&[22.0, 21.0], &[20.0, 20.0], 0.0), -3.0);
        assert_eq!(net_load_delta_fbd(&[20.0], &[20.0], 1.5), 1.5);
        assert_eq!(net_load_delta_rfbd(&[20.0, 15.0], 38.0), 3.0);
        assert_eq!(net_load_delta_rfbd(&[21.0, 20.0], 38.0), 0.0);
    }

    #[test]
    fn cap_profile_override() {
        let mut caps = CapProfile::uniform(1.0, 2);
        caps.per_interval.insert(5, vec![0.0, 3.0]);
        assert_eq!(caps.at(4), &[1.0, 1.0]);
        assert_eq!(caps.at(5), &[0.0, 3.0]);
        assert_eq!(caps.total_at(5), 3.0);
        assert!(caps.validate(2).is_ok());
        assert!(caps.validate(3).is_err());
    }

    proptest! {
        #[test]
        fn capping_is_monotone(v in 0.0f64..50.0, a in 0.0f64..10.0, b in 0.0f64..10.0) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(apply_cap(&[v], &[hi])[0] <= apply_cap(&[v], &[lo])[0]);
        }

        #[test]
        fn binding_total_respects_inherited_cap(
            r1 in 0.0f64..40.0, r2 in 0.0f64..40.0, c1 in 0.0f64..30.0, c2 in 0.0f64..30.0,
        ) {
            let total = binding_ver_total(&[r1, r2], Some(&[c1, c2]));
            prop_assert!(total <= c1 + c2);
            if r1 + r2 <= c1 + c2 {
                prop_assert_eq!(total, r1 + r2);
            }
        }

        #[test]
        fn rfbd_delta_is_clipped_fbd_delta(
            r1 in 0.0f64..40.0, r2 in 0.0f64..40.0, delta in 0.0f64..5.0,
        ) {
            let advisory = [20.0, 20.0];
            let capped = advisory_ver_total(&apply_cap(&advisory, &[delta, delta]));
            let rfbd = net_load_delta_rfbd(&[r1, r2], capped);
            let fbd = net_load_delta_fbd(&[r1, r2], &advisory, 0.0);
            prop_assert!(rfbd >= 0.0);
            prop_assert!((rfbd - (fbd - 2.0 * delta).max(0.0)).abs() <= 1e-12);
        }
    }
}
