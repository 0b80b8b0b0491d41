//! Numerical self-checks of the closed-form results against brute force.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::alm::SolverConfig;
use crate::array::SystemConfig;
use crate::codebook::{design, evaluate, EvaluationMode};
use crate::error::Result;
use crate::narrowband::{
    narrowband_codebook, null_threshold, optimal_n_with_coefficient, prop1_worst_case, worst_case_for_elements,
    OPTIMAL_N_COEFFICIENT,
};
use crate::zones::{divide_zones, prop3_upper_bound, uniform_sine_partition};

/// Relative tolerance between the grid and closed-form narrowband worst cases.
pub const PROP1_RELATIVE_TOLERANCE: f64 = 0.02;
/// Absolute floor for cells whose closed-form worst case is (near) zero.
pub const PROP1_ABSOLUTE_FLOOR: f64 = 1e-3;
/// Grid slack allowed on the `2/ΔΩ` bound.
pub const BOUND_SLACK: f64 = 1.02;
pub const SHIFT_TOLERANCE: f64 = 1e-10;
pub const ZONE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Runs all five checks for `cfg`.
pub fn run_self_checks(cfg: &SystemConfig, solver: &SolverConfig) -> Result<Vec<CheckOutcome>> {
    run_with_coefficient(cfg, solver, OPTIMAL_N_COEFFICIENT)
}

/// As [`run_self_checks`], with the optimal-element-count coefficient
/// overridden.
pub fn run_with_coefficient(cfg: &SystemConfig, solver: &SolverConfig, coefficient: f64) -> Result<Vec<CheckOutcome>> {
    cfg.validate()?;
    solver.validate()?;
    let (bound, shift) = bound_and_shift(cfg, solver)?;
    Ok(alloc::vec![
        narrowband_closed_form(cfg)?,
        optimal_elements(cfg, coefficient),
        bound,
        shift,
        zero_bandwidth_zones(cfg)?,
    ])
}

/// Agreement criterion used for closed-form comparisons.
pub fn within_closed_form_tolerance(measured: f64, closed: f64) -> bool {
    (measured - closed).abs() <= (PROP1_RELATIVE_TOLERANCE * closed.abs()).max(PROP1_ABSOLUTE_FLOOR)
}

fn narrowband_closed_form(cfg: &SystemConfig) -> Result<CheckOutcome> {
    let cb = narrowband_codebook(cfg)?;
    let grid = evaluate(cfg, &cb, EvaluationMode::Grid)?.worst_case.gain;
    let closed = prop1_worst_case(cfg).worst_case_gain;
    Ok(CheckOutcome {
        name: "narrowband worst case vs closed form",
        passed: within_closed_form_tolerance(grid, closed),
        detail: format!("grid {grid:.6}, closed form {closed:.6}"),
    })
}

fn optimal_elements(cfg: &SystemConfig, coefficient: f64) -> CheckOutcome {
    let (fc, b, l) = (cfg.carrier_hz, cfg.bandwidth_hz, cfg.beams);
    let limit = libm::ceil(null_threshold(fc, b, l)) as usize;
    let mut argmax = 1;
    for n in 2..=limit.max(1) {
        if worst_case_for_elements(fc, b, l, n) > worst_case_for_elements(fc, b, l, argmax) {
            argmax = n;
        }
    }
    let opt = optimal_n_with_coefficient(fc, b, l, coefficient);
    CheckOutcome {
        name: "optimal element count",
        passed: argmax == opt.candidates.0 || argmax == opt.candidates.1,
        detail: format!(
            "exhaustive argmax {argmax}, candidates {{{}, {}}}",
            opt.candidates.0, opt.candidates.1
        ),
    }
}

fn bound_and_shift(cfg: &SystemConfig, solver: &SolverConfig) -> Result<(CheckOutcome, CheckOutcome)> {
    let d = design(cfg, solver)?;
    let cb = &d.codebook;
    let worst = evaluate(cfg, cb, EvaluationMode::Grid)?.worst_case.gain;
    let bound = prop3_upper_bound(&cb.partition);
    let bound_check = CheckOutcome {
        name: "upper bound 2/delta_omega",
        passed: worst <= bound * BOUND_SLACK,
        detail: format!("worst case {worst:.6}, bound {bound:.6}"),
    };
    let mut err: f64 = 0.0;
    for (l, beam) in cb.beams.iter().enumerate() {
        let t = cb.partition.center(l);
        for k in 0..512 {
            let x = -1.0 + 2.0 * k as f64 / 511.0;
            let (a, b) = (beam.gain_at(x), d.solution.beam.gain_at(x - t));
            err = err.max((a - b).abs() / b.max(1.0));
        }
    }
    let shift_check = CheckOutcome {
        name: "beam shift translates the pattern",
        passed: err <= SHIFT_TOLERANCE,
        detail: format!("max deviation {err:.3e}"),
    };
    Ok((bound_check, shift_check))
}

fn zero_bandwidth_zones(cfg: &SystemConfig) -> Result<CheckOutcome> {
    let got = divide_zones(&cfg.with_bandwidth(0.0))?;
    let want = uniform_sine_partition(cfg.beams)?;
    let err = got
        .boundaries
        .iter()
        .zip(&want.boundaries)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(CheckOutcome {
        name: "zero-bandwidth zones are uniform in sine",
        passed: err <= ZONE_TOLERANCE,
        detail: format!("max boundary deviation {err:.3e}"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_scenario_passes() {
        let cfg = SystemConfig::new(140e9, 10e9, 16, 32).unwrap();
        let out = run_self_checks(&cfg, &SolverConfig::default()).unwrap();
        assert_eq!(out.len(), 5);
        for c in &out {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }

    #[test]
    fn corrupted_coefficient_fails() {
        let cfg = SystemConfig::new(140e9, 10e9, 16, 32).unwrap();
        let out = run_with_coefficient(&cfg, &SolverConfig::default(), 2.5).unwrap();
        assert!(!out[1].passed);
        assert!(out.iter().enumerate().all(|(i, c)| i == 1 || c.passed));
    }
}
