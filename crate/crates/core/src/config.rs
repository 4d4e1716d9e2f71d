//! Run configuration: seed, tolerances and solver limits.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("tolerance `{0}` must be positive and finite")]
    NonPositive(&'static str),
    #[error("solver.max_iter must be at least 1")]
    ZeroIterations,
    #[error("could not read config: {0}")]
    Io(#[from] std::io::Error),
    #[error("could not parse config: {0}")]
    Parse(#[from] serde_json::Error),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Smallest admissible eigenvalue, relative to the largest.
    pub psd_tol: f64,
    /// Eigenvalues below `rank_tol · λ_max` count as zero.
    pub rank_tol: f64,
    /// Accepted max-norm residual, relative to the target's max-norm.
    pub residual_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { psd_tol: 1e-9, rank_tol: 1e-8, residual_tol: 1e-8 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub max_iter: usize,
    pub gap_tol: f64,
    pub step_tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { max_iter: 200, gap_tol: 1e-9, step_tol: 1e-12 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Paths {
    pub output_dir: Option<PathBuf>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub seed: u64,
    pub tolerances: Tolerances,
    pub solver: SolverConfig,
    pub paths: Paths,
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let c: Config = serde_json::from_str(text)?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &std::path::Path) -> Result<Self, ConfigError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let t = &self.tolerances;
        for (name, v) in [
            ("psd_tol", t.psd_tol),
            ("rank_tol", t.rank_tol),
            ("residual_tol", t.residual_tol),
            ("gap_tol", self.solver.gap_tol),
            ("step_tol", self.solver.step_tol),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(ConfigError::NonPositive(name));
            }
        }
        if self.solver.max_iter == 0 {
            return Err(ConfigError::ZeroIterations);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_json_keeps_defaults() {
        let c = Config::from_json(r#"{"seed": 7, "tolerances": {"rank_tol": 1e-6}}"#).unwrap();
        assert_eq!(c.seed, 7);
        assert_eq!(c.tolerances.rank_tol, 1e-6);
        assert_eq!(c.tolerances.psd_tol, 1e-9);
        assert_eq!(c.solver.max_iter, 200);
    }

    #[test]
    fn rejects_nonpositive_tolerance() {
        assert!(Config::from_json(r#"{"tolerances": {"psd_tol": 0}}"#).is_err());
        assert!(Config::from_json(r#"{"bogus": 1}"#).is_err());
    }
}
