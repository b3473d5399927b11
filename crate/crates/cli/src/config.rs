use std::path::{Path, PathBuf};

use robin_core::experiments::FemSettings;
use robin_core::fem::ElementOrder;
use serde::Deserialize;

use crate::args::FemArgs;
use crate::UsageError;

pub const DEFAULT_H: f64 = 0.05;
pub const DEFAULT_ORDER: u8 = 1;

/// Values read from `--config`; every key is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub h: Option<f64>,
    pub order: Option<u8>,
    pub solver_tol: Option<f64>,
    pub asymmetry_tol: Option<f64>,
    pub alpha: Option<Vec<f64>>,
    pub eps: Option<Vec<f64>>,
    #[serde(rename = "R")]
    pub radius: Option<f64>,
    pub threads: Option<usize>,
    pub csv: Option<PathBuf>,
    pub plot: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, UsageError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| UsageError(format!("invalid config {}: {e}", path.display())))
    }
}

/// Resolved discretisation plus mesh size.
#[derive(Debug, Clone, Copy)]
pub struct Discretisation {
    pub h: f64,
    pub settings: FemSettings,
}

pub fn discretisation(flags: &FemArgs, file: &FileConfig) -> Result<Discretisation, UsageError> {
    let h = flags.h.or(file.h).unwrap_or(DEFAULT_H);
    if !(h.is_finite() && h > 0.0) {
        return Err(UsageError(format!("--h must be positive, got {h}")));
    }
    let order = flags.order.or(file.order).unwrap_or(DEFAULT_ORDER);
    let order = ElementOrder::try_from(order).map_err(|e| UsageError(e.to_string()))?;
    let defaults = FemSettings::default();
    let solver_tol = flags.solver_tol.or(file.solver_tol).unwrap_or(defaults.solver_tol);
    let asymmetry_tol = flags.asymmetry_tol.or(file.asymmetry_tol).unwrap_or(defaults.asymmetry_tol);
    for (name, v) in [("solver-tol", solver_tol), ("asymmetry-tol", asymmetry_tol)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(UsageError(format!("--{name} must be positive, got {v}")));
        }
    }
    Ok(Discretisation { h, settings: FemSettings { order, solver_tol, asymmetry_tol } })
}

/// Flag list if given, else the config list, else the default.
pub fn list(flag: &[f64], file: &Option<Vec<f64>>, default: &[f64]) -> Vec<f64> {
    if !flag.is_empty() {
        flag.to_vec()
    } else if let Some(v) = file {
        v.clone()
    } else {
        default.to_vec()
    }
}
