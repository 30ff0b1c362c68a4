//! Run configuration read from a TOML file with dotted keys.

use std::f64::consts::PI;
use std::path::Path;

use isw_coherent::approx::ValidityThresholds;
use isw_coherent::states::DEFAULT_TAIL_TOL;
use isw_coherent::{GcsParams, GecsParams, StateSpec, TimeGrid, WellParams};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub well: WellSection,
    pub state: StateSection,
    pub time: TimeSection,
    pub space: SpaceSection,
    pub tolerance: ToleranceSection,
    pub validity: ValiditySection,
    pub output: OutputSection,
    /// Snapshot time for `density` and `wavefunction`.
    pub t: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            well: WellSection::default(),
            state: StateSection::default(),
            time: TimeSection::default(),
            space: SpaceSection::default(),
            tolerance: ToleranceSection::default(),
            validity: ValiditySection::default(),
            output: OutputSection::default(),
            t: 0.002,
        }
    }
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct WellSection {
    pub mass: f64,
    pub length: f64,
    pub hbar: f64,
}

impl Default for WellSection {
    fn default() -> Self {
        Self {
            mass: 1.0,
            length: PI,
            hbar: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Gcs,
    Gecs,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct StateSection {
    pub family: Family,
    pub n0: f64,
    pub sigma0: f64,
    pub z0: f64,
    pub phi0: f64,
}

impl Default for StateSection {
    fn default() -> Self {
        Self {
            family: Family::Gcs,
            n0: 500.0,
            sigma0: 5.0,
            z0: 100.0,
            phi0: PI / 2.0,
        }
    }
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct TimeSection {
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

impl Default for TimeSection {
    fn default() -> Self {
        Self {
            start: 0.0,
            end: 0.05,
            count: 2001,
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct SpaceSection {
    /// Number of grid points; chosen from the state when absent.
    pub count: Option<usize>,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct ToleranceSection {
    /// Probability allowed outside the truncation window.
    pub tail: f64,
}

impl Default for ToleranceSection {
    fn default() -> Self {
        Self {
            tail: DEFAULT_TAIL_TOL,
        }
    }
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct ValiditySection {
    pub n0_over_sigma0: f64,
    pub sigma0: f64,
    pub x_over_s: f64,
    pub wall_over_s: f64,
    pub tau_over_t: f64,
}

impl Default for ValiditySection {
    fn default() -> Self {
        let d = ValidityThresholds::default();
        Self {
            n0_over_sigma0: d.n0_over_sigma0,
            sigma0: d.sigma0,
            x_over_s: d.x_over_s,
            wall_over_s: d.wall_over_s,
            tau_over_t: d.tau_over_t,
        }
    }
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    /// File path, or `-` for standard output.
    pub path: String,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self { path: "-".into() }
    }
}

/// A configuration whose values have passed validation.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub params: WellParams,
    pub state: StateSpec,
    pub times: TimeGrid,
    pub space_count: Option<usize>,
    pub tail: f64,
    pub thresholds: ValidityThresholds,
    pub t: f64,
    pub output: String,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn resolve(&self) -> Result<Resolved, CliError> {
        let cfg = |e: isw_coherent::Error| CliError::Config(e.to_string());
        let params =
            WellParams::new(self.well.mass, self.well.length, self.well.hbar).map_err(cfg)?;
        let s = &self.state;
        let state = match s.family {
            Family::Gcs => StateSpec::Gcs(GcsParams::new(s.n0, s.sigma0, s.phi0).map_err(cfg)?),
            Family::Gecs => StateSpec::Gecs(GecsParams::new(s.z0, s.phi0).map_err(cfg)?),
        };
        let tm = &self.time;
        let times = match tm.count {
            0 => {
                return Err(CliError::Config(
                    "time.count must be at least 1 (empty time grid)".into(),
                ))
            }
            1 => TimeGrid::new(tm.start, 1.0, 1),
            n => TimeGrid::spanning(tm.start, tm.end, n),
        }
        .map_err(cfg)?;
        if let Some(n) = self.space.count {
            if n < 2 {
                return Err(CliError::Config(format!(
                    "space.count must be at least 2, got {n}"
                )));
            }
        }
        let tail = self.tolerance.tail;
        if !(tail > 0.0 && tail <= 1e-6) {
            return Err(CliError::Config(format!(
                "tolerance.tail must lie in (0, 1e-6], got {tail}"
            )));
        }
        if !self.t.is_finite() {
            return Err(CliError::Config("t must be finite".into()));
        }
        let v = &self.validity;
        Ok(Resolved {
            params,
            state,
            times,
            space_count: self.space.count,
            tail,
            thresholds: ValidityThresholds {
                n0_over_sigma0: v.n0_over_sigma0,
                sigma0: v.sigma0,
                x_over_s: v.x_over_s,
                wall_over_s: v.wall_over_s,
                tau_over_t: v.tau_over_t,
            },
            t: self.t,
            output: self.output.path.clone(),
        })
    }
}
