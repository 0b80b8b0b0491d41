//! Worst-case tables over element counts and bandwidths.

use alloc::vec::Vec;

use super::{build_codebook, evaluate, EvaluationMode};
use crate::alm::SolverConfig;
use crate::array::SystemConfig;
use crate::error::Result;
use crate::narrowband::prop1_worst_case;
use crate::zones::{divide_zones, prop3_upper_bound};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepKind {
    /// Closed-form worst case of the narrowband codebook.
    Narrowband,
    /// Full design followed by grid evaluation.
    Wideband,
    /// Only the `2/ΔΩ` upper bound (reported in both columns).
    Bound,
}

/// How the codebook size follows the element count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BeamsRule {
    Fixed(usize),
    /// `L = factor · N`.
    PerElement(usize),
}

impl BeamsRule {
    pub fn beams(&self, elements: usize) -> usize {
        match *self {
            BeamsRule::Fixed(l) => l,
            BeamsRule::PerElement(k) => k * elements,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub elements: usize,
    pub bandwidth_hz: f64,
    pub beams: usize,
    pub worst_case: f64,
    pub bound: f64,
}

/// One row per `(N, B)` pair, `N` outermost, in input order.
pub fn sweep(
    base: &SystemConfig,
    solver: &SolverConfig,
    elements: &[usize],
    bandwidths_hz: &[f64],
    rule: BeamsRule,
    kind: SweepKind,
) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::with_capacity(elements.len() * bandwidths_hz.len());
    for &n in elements {
        for &b in bandwidths_hz {
            let beams = rule.beams(n);
            let cfg = base.with_elements(n).with_bandwidth(b).with_beams(beams);
            cfg.validate()?;
            let bound = prop3_upper_bound(&divide_zones(&cfg)?);
            let worst_case = match kind {
                SweepKind::Narrowband => prop1_worst_case(&cfg).worst_case_gain,
                SweepKind::Wideband => {
                    let cb = build_codebook(&cfg, solver)?;
                    evaluate(&cfg, &cb, EvaluationMode::Grid)?.worst_case.gain
                }
                SweepKind::Bound => bound,
            };
            rows.push(SweepRow {
                elements: n,
                bandwidth_hz: b,
                beams,
                worst_case,
                bound,
            });
        }
    }
    Ok(rows)
}
