//! Codebook assembly, beam shifting and per-direction wide beams.
//!
//! A wideband codebook is one prototype beam, designed over the centred
//! window `[-ΔΩ/2, ΔΩ/2]`, translated onto the composite image of each zone.
//! Multiplying weights element-wise by `h(T)` moves the whole gain pattern by
//! `T` in `ĥf`, so every zone sees an identical pattern.

mod eval;
mod sweep;

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use sha2::{Digest, Sha256};

use crate::alm::{self, SolverConfig};
use crate::array::{check_angle, BeamVector, SystemConfig, C64};
use crate::error::{Error, Result};
use crate::prv::{prv_beam, prv_plan};
use crate::zones::{divide_zones, ZonePartition};

pub use eval::{codebook_gain, evaluate, evaluation_angles, AngleResult, EvaluationMode, EvaluationReport, WorstCase};
pub use sweep::{sweep, BeamsRule, SweepKind, SweepRow};

/// Inputs a codebook was designed from, with a SHA-256 digest over them.
#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub system: SystemConfig,
    pub solver: SolverConfig,
    /// Lower-case hex SHA-256 of the little-endian encoding of every input.
    pub digest: String,
}

impl Provenance {
    pub fn new(system: &SystemConfig, solver: &SolverConfig) -> Self {
        let mut h = Sha256::new();
        for v in [system.carrier_hz, system.bandwidth_hz] {
            h.update(v.to_le_bytes());
        }
        for v in [
            system.elements,
            system.beams,
            system.solver_points,
            system.freq_points,
            system.angle_points,
        ] {
            h.update((v as u64).to_le_bytes());
        }
        for v in [solver.rho1, solver.rho2, solver.beta1, solver.beta2] {
            h.update(v.to_le_bytes());
        }
        h.update((solver.n_ite as u64).to_le_bytes());
        h.update(solver.eps.to_le_bytes());
        let bytes = h.finalize();
        let mut digest = String::with_capacity(64);
        for b in bytes.iter() {
            for nib in [b >> 4, b & 0xf] {
                digest.push(char::from_digit(nib as u32, 16).expect("nibble"));
            }
        }
        Provenance {
            system: system.clone(),
            solver: *solver,
            digest,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Codebook {
    pub beams: Vec<BeamVector>,
    pub partition: ZonePartition,
    pub provenance: Option<Provenance>,
}

impl Codebook {
    /// Checks that there is one beam per zone and all beams have one length.
    pub fn new(beams: Vec<BeamVector>, partition: ZonePartition, provenance: Option<Provenance>) -> Result<Self> {
        if beams.is_empty() {
            return Err(Error::EmptyCodebook);
        }
        if beams.len() != partition.zones() {
            return Err(Error::LengthMismatch {
                expected: partition.zones(),
                actual: beams.len(),
            });
        }
        let n = beams[0].len();
        if let Some(b) = beams.iter().find(|b| b.len() != n) {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: b.len(),
            });
        }
        Ok(Codebook {
            beams,
            partition,
            provenance,
        })
    }

    pub fn elements(&self) -> usize {
        self.beams[0].len()
    }

    pub fn len(&self) -> usize {
        self.beams.len()
    }

    pub fn is_empty(&self) -> bool {
        self.beams.is_empty()
    }
}

/// `w ⊙ h(T)`: the gain of the result at `ĥf` is the gain of `w` at `ĥf − T`.
pub fn shift_beam(w: &BeamVector, offset: f64) -> BeamVector {
    let weights: Vec<C64> = w
        .weights()
        .iter()
        .enumerate()
        .map(|(n, &z)| {
            if n == 0 {
                z
            } else {
                z * C64::from_polar(1.0, PI * n as f64 * offset)
            }
        })
        .collect();
    BeamVector::from_raw(weights)
}

/// Everything produced while designing a codebook.
#[derive(Debug, Clone)]
pub struct Design {
    pub codebook: Codebook,
    /// Initializer beam over `[-ΔΩ/2, ΔΩ/2]`.
    pub initial: BeamVector,
    pub solution: alm::Solution,
}

/// Zones, initializer, solver, then one shifted copy of the prototype per zone.
pub fn design(cfg: &SystemConfig, solver: &SolverConfig) -> Result<Design> {
    cfg.validate()?;
    solver.validate()?;
    let partition = divide_zones(cfg)?;
    let dw = partition.delta_omega;
    let initial = prv_beam(&prv_plan(cfg.elements, dw)?);
    let solution = alm::solve(cfg, solver, dw, &initial)?;
    let beams = (0..partition.zones())
        .map(|l| shift_beam(&solution.beam, partition.center(l)))
        .collect();
    let codebook = Codebook::new(beams, partition, Some(Provenance::new(cfg, solver)))?;
    Ok(Design {
        codebook,
        initial,
        solution,
    })
}

pub fn build_codebook(cfg: &SystemConfig, solver: &SolverConfig) -> Result<Codebook> {
    Ok(design(cfg, solver)?.codebook)
}

/// Widths below this are treated as a single composite direction.
const POINT_WIDTH: f64 = 1e-12;

/// A beam serving only the direction `phi` across the whole band: designed
/// over `[(f_c − B/2)/f_c · sin φ, (f_c + B/2)/f_c · sin φ]` (endpoints swapped
/// for `φ < 0`).
pub fn design_beam_for_aod(cfg: &SystemConfig, solver: &SolverConfig, phi: f64) -> Result<BeamVector> {
    check_angle(phi)?;
    cfg.validate()?;
    let s = libm::sin(phi);
    let width = cfg.fractional_bandwidth() * s.abs();
    if width < POINT_WIDTH {
        return Ok(BeamVector::matched(cfg.elements, s));
    }
    let init = prv_beam(&prv_plan(cfg.elements, width)?);
    let sol = alm::solve(cfg, solver, width, &init)?;
    Ok(shift_beam(&sol.beam, s))
}
