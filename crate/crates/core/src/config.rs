//! Run configuration shared by the verification suites and the CLI.
//!
//! A JSON file (optionally named by `JACOBI_CS_CONFIG`) supplies values;
//! missing fields take the defaults below, and command-line flags override
//! the file.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::domain::ModelParams;
use crate::error::{Error, Result};
use crate::kernels::TruncationOrder;
use crate::stencil::{WirtingerStencil, DEFAULT_FD_STEP};

pub const CONFIG_ENV: &str = "JACOBI_CS_CONFIG";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationSpec {
    pub n_max: u32,
    pub m_max: u32,
}

impl Default for TruncationSpec {
    fn default() -> Self {
        Self { n_max: 40, m_max: 40 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub k: f64,
    pub mu: f64,
    /// Per-check tolerance overrides, keyed by check name.
    pub tolerances: BTreeMap<String, f64>,
    pub truncation: TruncationSpec,
    pub fd_step: f64,
    pub rk4_step: f64,
    pub seed: u64,
    /// Monte Carlo sample count for the quadrature suite.
    pub mc_samples: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            k: 1.0,
            mu: 1.0,
            tolerances: BTreeMap::new(),
            truncation: TruncationSpec::default(),
            fd_step: DEFAULT_FD_STEP,
            rk4_step: 1e-3,
            seed: 0,
            mc_samples: 1_000_000,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// The file named by `JACOBI_CS_CONFIG`, or the defaults when unset.
    pub fn from_env() -> Result<Self> {
        match std::env::var_os(CONFIG_ENV) {
            Some(p) if !p.is_empty() => Self::load(Path::new(&p)),
            _ => Ok(Self::default()),
        }
    }

    pub fn params(&self) -> Result<ModelParams> {
        ModelParams::new(self.k, self.mu)
    }

    pub fn trunc(&self) -> Result<TruncationOrder> {
        TruncationOrder::new(self.truncation.n_max, self.truncation.m_max)
    }

    pub fn stencil(&self) -> Result<WirtingerStencil> {
        WirtingerStencil::new(self.fd_step)
    }

    /// Checks every field; returns the first problem found.
    pub fn validate(&self) -> Result<()> {
        self.params()?;
        self.trunc()?;
        self.stencil()?;
        if !(self.rk4_step.is_finite() && self.rk4_step > 0.0 && self.rk4_step <= 0.1) {
            return Err(Error::InvalidArgument(format!("rk4_step = {} must lie in (0, 0.1]", self.rk4_step)));
        }
        if self.mc_samples < crate::quadrature::MIN_SAMPLES {
            return Err(Error::InvalidArgument(format!("mc_samples = {} below 1000", self.mc_samples)));
        }
        if let Some((name, t)) = self.tolerances.iter().find(|(_, t)| !(t.is_finite() && **t >= 0.0)) {
            return Err(Error::InvalidArgument(format!("tolerance for {name} must be non-negative, got {t}")));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = RunConfig::default();
        assert_eq!((c.k, c.mu, c.seed), (1.0, 1.0, 0));
        assert_eq!(c.truncation, TruncationSpec { n_max: 40, m_max: 40 });
        assert_eq!(c.fd_step, 1e-4);
        assert_eq!(c.rk4_step, 1e-3);
        assert!(c.validate().is_ok());
    }

    #[test]
    fn partial_json_fills_defaults() {
        let c = RunConfig::from_json(r#"{"k": 2.25, "tolerances": {"scalar-curvature": 1e-9}}"#).unwrap();
        assert_eq!(c.k, 2.25);
        assert_eq!(c.mu, 1.0);
        assert_eq!(c.tolerances["scalar-curvature"], 1e-9);
        assert!(RunConfig::from_json(r#"{"kay": 2}"#).is_err());
    }

    #[test]
    fn validation() {
        let c = RunConfig { k: 0.5, ..RunConfig::default() };
        assert!(c.validate().is_err());
        let c = RunConfig { rk4_step: 0.0, ..RunConfig::default() };
        assert!(c.validate().is_err());
        let c = RunConfig { truncation: TruncationSpec { n_max: 0, m_max: 3 }, ..RunConfig::default() };
        assert!(c.validate().is_err());
    }
}
