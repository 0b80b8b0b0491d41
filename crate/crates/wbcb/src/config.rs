//! Run configuration file: a flat JSON object, every key optional.

use std::path::Path;

use serde::Deserialize;
use wbcb_core::{SolverConfig, SystemConfig};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub f_c_hz: f64,
    pub b_hz: f64,
    pub n: usize,
    pub l: usize,
    /// Solver grid size; `2n` when absent.
    pub m: Option<usize>,
    pub n_freq: usize,
    pub n_angle: usize,
    pub rho1: f64,
    pub rho2: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub n_ite: usize,
    pub eps: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let s = SolverConfig::default();
        RunConfig {
            f_c_hz: 140e9,
            b_hz: 10e9,
            n: 16,
            l: 32,
            m: None,
            n_freq: wbcb_core::array::DEFAULT_FREQ_POINTS,
            n_angle: wbcb_core::array::DEFAULT_ANGLE_POINTS,
            rho1: s.rho1,
            rho2: s.rho2,
            beta1: s.beta1,
            beta2: s.beta2,
            n_ite: s.n_ite,
            eps: s.eps,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn system(&self) -> Result<SystemConfig, CliError> {
        let cfg = SystemConfig {
            carrier_hz: self.f_c_hz,
            bandwidth_hz: self.b_hz,
            elements: self.n,
            beams: self.l,
            solver_points: self.m.unwrap_or(2 * self.n),
            freq_points: self.n_freq,
            angle_points: self.n_angle,
        };
        cfg.validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(cfg)
    }

    pub fn solver(&self) -> Result<SolverConfig, CliError> {
        let s = SolverConfig {
            rho1: self.rho1,
            rho2: self.rho2,
            beta1: self.beta1,
            beta2: self.beta2,
            n_ite: self.n_ite,
            eps: self.eps,
        };
        s.validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_object_gives_defaults() {
        let c: RunConfig = serde_json::from_str("{}").unwrap();
        assert_eq!(c, RunConfig::default());
        let sys = c.system().unwrap();
        assert_eq!((sys.elements, sys.beams, sys.solver_points), (16, 32, 32));
        assert_eq!(c.solver().unwrap(), SolverConfig::default());
    }

    #[test]
    fn overrides_and_rejections() {
        let c: RunConfig = serde_json::from_str(r#"{"n": 8, "m": 40, "b_hz": 0}"#).unwrap();
        let sys = c.system().unwrap();
        assert_eq!((sys.elements, sys.solver_points, sys.bandwidth_hz), (8, 40, 0.0));
        assert!(serde_json::from_str::<RunConfig>(r#"{"bogus": 1}"#).is_err());
        let bad: RunConfig = serde_json::from_str(r#"{"n": 0}"#).unwrap();
        assert!(matches!(bad.system(), Err(CliError::Config(_))));
        let bad: RunConfig = serde_json::from_str(r#"{"rho1": -1}"#).unwrap();
        assert!(matches!(bad.solver(), Err(CliError::Config(_))));
    }
}
