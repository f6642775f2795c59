//! Run configuration: one JSON document describing the system, the forecast
//! windows, the dispatch modes and the sampling settings.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use rfbd_core::case_study;
use rfbd_core::engine::{DispatchMode, ModeKind};
use rfbd_core::market::{FrpRequirement, SystemSpec};
use rfbd_core::uncertainty::{CapProfile, ForecastSeries};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub system: SystemSpec,
    pub forecasts: ForecastSeries,
    pub modes: Vec<ModeConfig>,
    pub sampling: Sampling,
    /// Directory for CSV outputs, relative to the working directory.
    pub output_dir: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeConfig {
    pub name: String,
    pub kind: ModeKind,
    /// Per-unit VER caps; required for `rfbd`, forbidden for `fbd`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub caps: Option<CapProfile>,
    /// Generator output just before the first binding interval, MW.
    pub initial_dispatch: Vec<f64>,
    #[serde(default)]
    pub first_window_binding_cap: bool,
    /// Fixed advisory requirement; when absent it is estimated from the
    /// shared sample set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub requirement: Option<FrpRequirement>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sampling {
    /// Standard deviation of each VER realization as a fraction of its forecast.
    pub error_fraction: f64,
    pub requirement_samples: usize,
    pub mc_trials: usize,
    pub master_seed: u64,
    /// Histogram bin width, MW.
    pub bin_width: f64,
}

impl ModeConfig {
    pub fn dispatch_mode(&self) -> DispatchMode {
        DispatchMode {
            name: self.name.clone(),
            kind: self.kind,
            caps: self.caps.clone(),
            first_window_binding_cap: self.first_window_binding_cap,
        }
    }
}

impl RunConfig {
    /// The reference two-generator study with its four dispatch modes.
    pub fn case_study() -> Self {
        let modes = case_study::modes()
            .into_iter()
            .map(|(mode, initial_dispatch)| ModeConfig {
                name: mode.name,
                kind: mode.kind,
                caps: mode.caps,
                initial_dispatch,
                first_window_binding_cap: mode.first_window_binding_cap,
                requirement: None,
            })
            .collect();
        RunConfig {
            system: case_study::system(),
            forecasts: case_study::forecasts(),
            modes,
            sampling: Sampling {
                error_fraction: case_study::ERROR_FRACTION,
                requirement_samples: case_study::REQUIREMENT_SAMPLES,
                mc_trials: case_study::MC_TRIALS,
                master_seed: case_study::MASTER_SEED,
                bin_width: case_study::BIN_WIDTH,
            },
            output_dir: PathBuf::from("out"),
        }
    }

    /// Parses and validates. Syntax errors carry the line and column.
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("configuration serializes")
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Config(msg));
        self.system
            .validate()
            .map_err(|e| CliError::Config(format!("system: {e}")))?;
        self.forecasts
            .validate(self.system.loads.len(), self.system.ver_units.len())
            .map_err(|e| CliError::Config(format!("forecasts: {e}")))?;
        if self.forecasts.windows.is_empty() {
            return bad("forecasts: at least one window is required".into());
        }
        if self.modes.is_empty() {
            return bad("modes: at least one mode is required".into());
        }
        let mut names = BTreeSet::new();
        for (m, mode) in self.modes.iter().enumerate() {
            if mode.name.is_empty() || mode.name.contains([',', '"', '\n', '\r']) {
                return bad(format!(
                    "modes[{m}].name must be non-empty without commas, quotes or newlines"
                ));
            }
            if !names.insert(mode.name.as_str()) {
                return bad(format!("modes[{m}].name {:?} is duplicated", mode.name));
            }
            mode.dispatch_mode()
                .validate(self.system.ver_units.len())
                .map_err(|e| CliError::Config(format!("modes[{m}]: {e}")))?;
            if mode.initial_dispatch.len() != self.system.generators.len()
                || mode.initial_dispatch.iter().any(|v| !v.is_finite())
            {
                return bad(format!(
                    "modes[{m}].initial_dispatch needs {} finite values",
                    self.system.generators.len()
                ));
            }
            if let Some(r) = mode.requirement {
                if !(r.fru >= 0.0 && r.frd >= 0.0 && r.fru.is_finite() && r.frd.is_finite()) {
                    return bad(format!("modes[{m}].requirement must be finite and >= 0"));
                }
            }
        }
        let s = &self.sampling;
        if !(s.error_fraction >= 0.0 && s.error_fraction.is_finite()) {
            return bad("sampling.error_fraction must be finite and >= 0".into());
        }
        if s.requirement_samples == 0 {
            return bad("sampling.requirement_samples must be >= 1".into());
        }
        if s.mc_trials == 0 {
            return bad("sampling.mc_trials must be >= 1".into());
        }
        if !(s.bin_width > 0.0 && s.bin_width.is_finite()) {
            return bad("sampling.bin_width must be positive".into());
        }
        Ok(())
    }

    pub fn mode(&self, name: &str) -> Result<&ModeConfig, CliError> {
        self.modes.iter().find(|m| m.name == name).ok_or_else(|| {
            let known: Vec<&str> = self.modes.iter().map(|m| m.name.as_str()).collect();
            CliError::Usage(format!("unknown mode {name:?}; configured modes: {}", known.join(", ")))
        })
    }
}
