//! Worst-case wideband analog beamforming codebooks for uniform linear arrays.
//!
//! Analog beams built from frequency-flat phase shifters squint across a wide
//! band: the direction of peak gain drifts with frequency. This crate designs
//! codebooks that maximize the *worst-case wideband beam gain*, i.e. the
//! minimum over every angle of departure of the best beam's minimum gain over
//! the whole band, under per-element constant-modulus weights.
//!
//! The pipeline:
//!
//! 1. [`zones::divide_zones`] splits `[-π/2, π/2]` into angular zones whose
//!    images in the frequency-spatial composite domain share one width `ΔΩ`.
//! 2. [`prv`] builds a closed-form wide beam over `[-ΔΩ/2, ΔΩ/2]` from phased
//!    sub-arrays.
//! 3. [`alm::solve`] refines that beam with an augmented-Lagrangian / ADMM
//!    iteration on the constant-modulus max-min problem.
//! 4. [`codebook::build_codebook`] shifts the prototype onto every zone.
//!
//! [`narrowband`] carries the conventional array-response codebook together
//! with its closed-form wideband analysis, and [`codebook::evaluate`] /
//! [`codebook::sweep`] measure any codebook on dense grids.
//!
//! The crate is `no_std` and needs only `alloc`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod alm;
pub mod array;
pub mod codebook;
mod error;
mod linalg;
pub mod narrowband;
pub mod prv;
pub mod selfcheck;
pub mod zones;

pub use array::{BeamVector, ConfigWarning, SteeringVector, SystemConfig, C64};
pub use codebook::{Codebook, EvaluationMode, EvaluationReport, Provenance};
pub use error::{Error, Result};
pub use alm::SolverConfig;
pub use zones::ZonePartition;
