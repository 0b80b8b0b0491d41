//! The conventional narrowband codebook and its closed-form wideband analysis.
//!
//! Beam `l` is the array response toward `sin φ_l = (2l-1)/L - 1`, so the beams
//! tile sine space uniformly. Across a wide band each beam squints; the worst
//! user sits at endfire, half a beam spacing away from the outermost beam and
//! at the band edge. Note that for even `L` no beam points exactly at
//! broadside, which changes the pattern's maximum but not the worst case, so
//! the same formulas are used for every `L`.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use crate::array::{BeamVector, SystemConfig};
use crate::codebook::Codebook;
use crate::error::Result;
use crate::zones::uniform_sine_partition;

/// Root of `tan x = 2x` on `(0, π]`, to three decimals.
pub const TAN_ROOT: f64 = 1.166;

/// `4·TAN_ROOT/π`, rounded to three decimals: the optimal element count is
/// close to `1.485·f_c L / (2 f_c + B L)`.
pub const OPTIMAL_N_COEFFICIENT: f64 = 1.485;

/// Sine of beam `l`'s pointing direction (zero-based `l`).
pub fn beam_center_sine(beam: usize, beams: usize) -> f64 {
    (2.0 * beam as f64 + 1.0) / beams as f64 - 1.0
}

/// `L` array-response beams uniformly spaced in sine space, with the matching
/// uniform sine partition attached.
pub fn narrowband_codebook(cfg: &SystemConfig) -> Result<Codebook> {
    cfg.validate()?;
    let beams: Vec<BeamVector> = (0..cfg.beams)
        .map(|l| BeamVector::matched(cfg.elements, beam_center_sine(l, cfg.beams)))
        .collect();
    Codebook::new(beams, uniform_sine_partition(cfg.beams)?, None)
}

/// `[sin(N·a) / (√N sin a)]²`, the normalized Dirichlet power.
fn dirichlet_power(elements: usize, a: f64) -> f64 {
    let n = elements as f64;
    let sa = libm::sin(a);
    if sa.abs() < 1e-12 {
        return n;
    }
    let r = libm::sin(n * a) / (libm::sqrt(n) * sa);
    r * r
}

/// Worst-case gain of the narrowband codebook in a narrowband system:
/// `[sin(Nπ/2L) / (√N sin(π/2L))]²`.
pub fn narrowband_worst_case_b0(cfg: &SystemConfig) -> f64 {
    dirichlet_power(cfg.elements, PI / (2.0 * cfg.beams as f64))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NarrowbandAnalysis {
    pub worst_case_gain: f64,
    /// Where the worst case occurs; `-π/2` is equally bad by symmetry.
    pub worst_aod: f64,
    /// `N < 4 f_c L / (2 f_c + B L)`: the gain at the worst AoD has not yet
    /// reached its first null.
    pub nonzero_condition_holds: bool,
    pub optimal_n_candidates: (usize, usize),
}

/// `4 f_c L / (2 f_c + B L)`: element count at which the worst-case gain hits
/// its first null.
pub fn null_threshold(carrier_hz: f64, bandwidth_hz: f64, beams: usize) -> f64 {
    let l = beams as f64;
    4.0 * carrier_hz * l / (2.0 * carrier_hz + bandwidth_hz * l)
}

/// Closed-form worst-case wideband gain of the narrowband codebook.
pub fn prop1_worst_case(cfg: &SystemConfig) -> NarrowbandAnalysis {
    let holds = (cfg.elements as f64) < null_threshold(cfg.carrier_hz, cfg.bandwidth_hz, cfg.beams);
    let worst_case_gain = if holds {
        dirichlet_power(cfg.elements, spacing_angle(cfg.carrier_hz, cfg.bandwidth_hz, cfg.beams))
    } else {
        0.0
    };
    let opt = prop2_optimal_n(cfg.carrier_hz, cfg.bandwidth_hz, cfg.beams);
    NarrowbandAnalysis {
        worst_case_gain,
        worst_aod: FRAC_PI_2,
        nonzero_condition_holds: holds,
        optimal_n_candidates: opt.candidates,
    }
}

/// `π (2 f_c + B L) / (4 f_c L)`.
fn spacing_angle(carrier_hz: f64, bandwidth_hz: f64, beams: usize) -> f64 {
    let l = beams as f64;
    PI * (2.0 * carrier_hz + bandwidth_hz * l) / (4.0 * carrier_hz * l)
}

/// Closed-form worst-case gain for an arbitrary element count, used by the
/// element-count optimization.
pub fn worst_case_for_elements(carrier_hz: f64, bandwidth_hz: f64, beams: usize, elements: usize) -> f64 {
    if (elements as f64) < null_threshold(carrier_hz, bandwidth_hz, beams) {
        dirichlet_power(elements, spacing_angle(carrier_hz, bandwidth_hz, beams))
    } else {
        0.0
    }
}

/// Minimum over the band of the gain at `phi` of the array-response beam
/// aimed at `phi_m`:
/// `[sin(Nπu/2f_c) / (√N sin(πu/2f_c))]²`, `u = f_c|sin φ_m − sin φ| + (B/2)|sin φ|`.
///
/// Exact while `u ≤ 2f_c/N`. Past that the Dirichlet ratio oscillates again and
/// the formula is no longer the band minimum.
pub fn aligned_beam_wideband_gain(cfg: &SystemConfig, phi_m: f64, phi: f64) -> f64 {
    let u = aligned_offset(cfg, phi_m, phi);
    dirichlet_power(cfg.elements, PI * u / (2.0 * cfg.carrier_hz))
}

/// `u = f_c|sin φ_m − sin φ| + (B/2)|sin φ|`, in Hz.
pub fn aligned_offset(cfg: &SystemConfig, phi_m: f64, phi: f64) -> f64 {
    let (sm, s) = (libm::sin(phi_m), libm::sin(phi));
    cfg.carrier_hz * (sm - s).abs() + cfg.bandwidth_hz / 2.0 * s.abs()
}

/// Whether `(phi_m, phi)` lies in the regime where
/// [`aligned_beam_wideband_gain`] is exact.
pub fn in_monotone_regime(cfg: &SystemConfig, phi_m: f64, phi: f64) -> bool {
    aligned_offset(cfg, phi_m, phi) <= 2.0 * cfg.carrier_hz / cfg.elements as f64
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalElements {
    /// `coefficient · f_c L / (2 f_c + B L)` before rounding.
    pub real_value: f64,
    /// Floor and ceiling of `real_value` (floored at 1).
    pub candidates: (usize, usize),
    /// The candidate with the larger closed-form worst case (the floor on ties).
    pub best: usize,
}

/// Element count maximizing the narrowband codebook's worst-case wideband gain.
pub fn prop2_optimal_n(carrier_hz: f64, bandwidth_hz: f64, beams: usize) -> OptimalElements {
    optimal_n_with_coefficient(carrier_hz, bandwidth_hz, beams, OPTIMAL_N_COEFFICIENT)
}

/// [`prop2_optimal_n`] with the rounding coefficient exposed, so the self-check
/// can be exercised against a corrupted constant.
pub fn optimal_n_with_coefficient(
    carrier_hz: f64,
    bandwidth_hz: f64,
    beams: usize,
    coefficient: f64,
) -> OptimalElements {
    let l = beams as f64;
    let real_value = coefficient * carrier_hz * l / (2.0 * carrier_hz + bandwidth_hz * l);
    let lo = (libm::floor(real_value) as usize).max(1);
    let hi = (libm::ceil(real_value) as usize).max(1);
    let gain = |n| worst_case_for_elements(carrier_hz, bandwidth_hz, beams, n);
    let best = if gain(hi) > gain(lo) { hi } else { lo };
    OptimalElements {
        real_value,
        candidates: (lo, hi),
        best,
    }
}
