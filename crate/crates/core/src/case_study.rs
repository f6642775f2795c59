//! The two-generator, two-VER reference system and its forecast windows.
//!
//! Useful as a fixture and as the default experiment of the command-line tool.

use crate::engine::DispatchMode;
use crate::market::{FrpRequirement, GeneratorSpec, LoadSpec, SystemSpec, VerKind, VerUnit};
use crate::uncertainty::{CapProfile, ForecastSeries, IntervalForecast, WindowForecast};

/// Five-minute intervals.
pub const INTERVAL_HOURS: f64 = 1.0 / 12.0;
pub const ERROR_FRACTION: f64 = 0.1;
pub const REQUIREMENT_SAMPLES: usize = 1000;
pub const MC_TRIALS: usize = 1000;
pub const BIN_WIDTH: f64 = 0.5;
/// Seed used by the shipped example configuration.
pub const MASTER_SEED: u64 = 2024;

/// Reference 1000-sample FBD requirement at the first advisory interval.
pub const REPORTED_FBD_REQUIREMENT: FrpRequirement = FrpRequirement {
    fru: 5.6451,
    frd: 5.7503,
};

pub fn system() -> SystemSpec {
    SystemSpec {
        generators: vec![
            GeneratorSpec {
                id: "G1".into(),
                energy_cost: 20.0,
                p_min: 0.0,
                p_max: 100.0,
                ramp_down: 15.0,
                ramp_up: 15.0,
                emission_factor: 0.214,
            },
            GeneratorSpec {
                id: "G2".into(),
                energy_cost: 50.0,
                p_min: 0.0,
                p_max: 500.0,
                ramp_down: 50.0,
                ramp_up: 50.0,
                emission_factor: 0.428,
            },
        ],
        loads: vec![LoadSpec {
            id: "D".into(),
            shed_penalty: 200.0,
        }],
        ver_units: vec![
            VerUnit {
                id: "W1".into(),
                kind: VerKind::Wind,
            },
            VerUnit {
                id: "S1".into(),
                kind: VerKind::Solar,
            },
        ],
        interval_hours: INTERVAL_HOURS,
        window_length: 2,
    }
}

/// Windows `{t, t+1}` and `{t+1, t+2}` with `t = 0`. The binding VER values of
/// the second window are left to the realization sampler.
pub fn forecasts() -> ForecastSeries {
    let interval = |interval, load: f64, ver: Option<[f64; 2]>| IntervalForecast {
        interval,
        load: vec![load],
        ver: ver.map(|v| v.to_vec()),
    };
    ForecastSeries {
        windows: vec![
            WindowForecast {
                origin: 0,
                intervals: vec![
                    interval(0, 100.0, Some([20.0, 20.0])),
                    interval(1, 85.0, Some([20.0, 20.0])),
                ],
            },
            WindowForecast {
                origin: 1,
                intervals: vec![interval(1, 85.0, None), interval(2, 85.0, Some([20.0, 20.0]))],
            },
        ],
    }
}

/// `g_{i,t−1}` for a mode with uniform per-unit cap `delta` (0 for FBD):
/// G1 starts at `60 + 2·delta`, G2 at zero.
pub fn initial_dispatch(delta: f64) -> Vec<f64> {
    vec![60.0 + 2.0 * delta, 0.0]
}

/// FBD plus the three capped modes with per-unit cap 0, 1 and 2 MW.
pub fn modes() -> Vec<(DispatchMode, Vec<f64>)> {
    let mut out = vec![(DispatchMode::fbd(), initial_dispatch(0.0))];
    for delta in [0.0, 1.0, 2.0] {
        out.push((
            DispatchMode::rfbd(CapProfile::uniform(delta, 2), false),
            initial_dispatch(delta),
        ));
    }
    out
}
