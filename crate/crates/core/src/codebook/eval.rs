//! Codebook evaluation on angle grids and random draws.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Codebook;
use crate::array::{band_minimum_above, check_angle, dirichlet, pattern_gain, BeamVector, SystemConfig};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvaluationMode {
    /// `angle_points` angles uniform in `sin φ`, plus every zone boundary.
    Grid,
    /// `angle_points` angles drawn uniformly in `sin φ`.
    MonteCarlo { seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleResult {
    pub phi: f64,
    /// Best wideband gain over the codebook at `phi`.
    pub gain: f64,
    /// Zero-based index of the beam achieving it (lowest index on ties).
    pub best_beam: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorstCase {
    pub gain: f64,
    pub phi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationReport {
    /// Sorted by angle.
    pub per_angle: Vec<AngleResult>,
    pub worst_case: WorstCase,
    /// Smallest wideband gain of each zone's own beam over the angles in that
    /// zone, boundaries counted on both sides.
    pub per_zone: Vec<f64>,
}

/// Beam indices starting at `zone` and alternating outward.
fn outward(zone: usize, beams: usize) -> impl Iterator<Item = usize> {
    (0..2 * beams).filter_map(move |k| {
        let d = k.div_ceil(2);
        if k % 2 == 1 {
            zone.checked_sub(d)
        } else {
            let i = zone + d;
            (i < beams).then_some(i)
        }
    })
}

/// Best wideband gain over `cb` at `phi`, with the index of the beam attaining
/// it (lowest index on ties).
pub fn codebook_gain(cfg: &SystemConfig, cb: &Codebook, phi: f64) -> Result<(f64, usize)> {
    check_angle(phi)?;
    check_elements(cfg, cb)?;
    let scales = cfg.frequency_scales();
    Ok(gain_with_scales(cb, phi, &scales))
}

fn check_elements(cfg: &SystemConfig, cb: &Codebook) -> Result<()> {
    if cb.elements() != cfg.elements {
        return Err(Error::LengthMismatch {
            expected: cfg.elements,
            actual: cb.elements(),
        });
    }
    Ok(())
}

/// Gain pattern of one beam. Linear-phase beams `w(n) = w(0) e^{jπnt}` use the
/// closed form `D_N(π(x - t))² / N`, which costs O(1) instead of O(N).
#[derive(Clone, Copy)]
enum Kernel<'a> {
    Linear { elements: usize, offset: f64 },
    General(&'a [crate::C64]),
}

impl<'a> Kernel<'a> {
    fn of(beam: &'a BeamVector) -> Self {
        let w = beam.weights();
        let n = w.len();
        if n >= 2 {
            let step = w[1] / w[0];
            let step = step / step.norm();
            let tol = 1e-13 / libm::sqrt(n as f64);
            let mut expected = w[0];
            let linear = w.iter().all(|&v| {
                let ok = (v - expected).norm() <= tol;
                expected *= step;
                ok
            });
            if linear {
                return Kernel::Linear {
                    elements: n,
                    offset: step.arg() / core::f64::consts::PI,
                };
            }
        }
        Kernel::General(w)
    }

    fn gain(&self, x: f64) -> f64 {
        match *self {
            Kernel::Linear { elements, offset } => {
                let d = dirichlet(elements, core::f64::consts::PI * (x - offset));
                d * d / elements as f64
            }
            Kernel::General(w) => pattern_gain(w, x),
        }
    }

    fn band_minimum(&self, sin_phi: f64, scales: &[f64]) -> f64 {
        band_minimum_above(|x| self.gain(x), sin_phi, scales, f64::NEG_INFINITY).unwrap_or(f64::INFINITY)
    }
}

fn gain_with_scales(cb: &Codebook, phi: f64, scales: &[f64]) -> (f64, usize) {
    let kernels: Vec<Kernel> = cb.beams.iter().map(Kernel::of).collect();
    gain_with_kernels(cb, &kernels, phi, scales)
}

fn gain_with_kernels(cb: &Codebook, kernels: &[Kernel], phi: f64, scales: &[f64]) -> (f64, usize) {
    let s = libm::sin(phi);
    let zone = cb.partition.zone_of(phi);
    let mut best = (f64::NEG_INFINITY, usize::MAX);
    for l in outward(zone, cb.len()) {
        if let Some(g) = band_minimum_above(|x| kernels[l].gain(x), s, scales, best.0) {
            if g > best.0 || (g == best.0 && l < best.1) {
                best = (g, l);
            }
        }
    }
    best
}

/// Angles used by [`EvaluationMode::Grid`]: `n` points uniform in `sin φ`
/// (so `±π/2` included), every zone boundary, sorted and deduplicated.
pub fn evaluation_angles(cb: &Codebook, n: usize) -> Vec<f64> {
    let n = n.max(2);
    let mut angles: Vec<f64> = (0..n)
        .map(|k| {
            if k == 0 {
                -FRAC_PI_2
            } else if k == n - 1 {
                FRAC_PI_2
            } else {
                libm::asin(-1.0 + 2.0 * k as f64 / (n - 1) as f64)
            }
        })
        .chain(cb.partition.boundaries.iter().copied())
        .collect();
    angles.sort_by(f64::total_cmp);
    angles.dedup();
    angles
}

fn random_angles(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut angles: Vec<f64> = (0..n)
        .map(|_| libm::asin(rng.random_range(-1.0..=1.0)))
        .collect();
    angles.sort_by(f64::total_cmp);
    angles
}

/// Evaluates every angle of the chosen set under `cfg`'s frequency grid.
pub fn evaluate(cfg: &SystemConfig, cb: &Codebook, mode: EvaluationMode) -> Result<EvaluationReport> {
    cfg.validate()?;
    check_elements(cfg, cb)?;
    let angles = match mode {
        EvaluationMode::Grid => evaluation_angles(cb, cfg.angle_points),
        EvaluationMode::MonteCarlo { seed } => random_angles(cfg.angle_points, seed),
    };
    let scales = cfg.frequency_scales();
    let kernels: Vec<Kernel> = cb.beams.iter().map(Kernel::of).collect();
    let boundaries = &cb.partition.boundaries;
    let mut per_zone = vec![f64::INFINITY; cb.len()];
    let mut per_angle = Vec::with_capacity(angles.len());
    let mut worst = WorstCase {
        gain: f64::INFINITY,
        phi: 0.0,
    };
    for phi in angles {
        let (gain, best_beam) = gain_with_kernels(cb, &kernels, phi, &scales);
        per_angle.push(AngleResult { phi, gain, best_beam });
        if gain < worst.gain {
            worst = WorstCase { gain, phi };
        }
        let zone = cb.partition.zone_of(phi);
        let mut owners = vec![zone];
        if zone + 1 < cb.len() && phi == boundaries[zone + 1] {
            owners.push(zone + 1);
        }
        for l in owners {
            let own = if l == best_beam {
                gain
            } else {
                kernels[l].band_minimum(libm::sin(phi), &scales)
            };
            per_zone[l] = per_zone[l].min(own);
        }
    }
    Ok(EvaluationReport {
        per_angle,
        worst_case: worst,
        per_zone,
    })
}
