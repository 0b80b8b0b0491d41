//! Uniform linear array model: configuration, weight vectors, steering vectors
//! and beam-gain evaluation.
//!
//! Everything is expressed through the frequency-spatial composite variable
//! `ĥf = (1 + f/f_c)·sin φ`. A half-wavelength ULA's response at baseband
//! frequency `f` and angle `φ` is `h(ĥf) = [1, e^{jπĥf}, …, e^{jπ(N-1)ĥf}]`, and
//! the beam gain of weights `w` is the power `|h^H w|²`.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex;

use crate::error::{ensure_finite, Error, Result};

pub type C64 = Complex<f64>;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Tolerance on `|w(i)| = 1/√N`.
pub const MODULUS_TOLERANCE: f64 = 1e-12;

pub const DEFAULT_FREQ_POINTS: usize = 257;
pub const DEFAULT_ANGLE_POINTS: usize = 2049;

/// System parameters shared by every stage of the design.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    /// Carrier frequency `f_c`, Hz.
    pub carrier_hz: f64,
    /// Signal bandwidth `B`, Hz. The band is `[-B/2, B/2]` around the carrier.
    pub bandwidth_hz: f64,
    /// Array element count `N`.
    pub elements: usize,
    /// Codebook size `L`.
    pub beams: usize,
    /// Number of composite-domain points `M` the solver discretizes over.
    pub solver_points: usize,
    /// Frequency grid size used to take the minimum over the band.
    pub freq_points: usize,
    /// Angle grid size for worst-case sweeps.
    pub angle_points: usize,
}

/// Non-fatal configuration remarks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConfigWarning {
    /// `L < N`: the zone and codebook constructions assume at least as many
    /// beams as elements.
    FewerBeamsThanElements { beams: usize, elements: usize },
}

impl core::fmt::Display for ConfigWarning {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ConfigWarning::FewerBeamsThanElements { beams, elements } => write!(
                f,
                "codebook size L = {beams} is below the element count N = {elements}"
            ),
        }
    }
}

impl SystemConfig {
    /// Builds a validated configuration with default grid sizes
    /// (`M = 2N`, 257 frequency points, 2049 angle points).
    pub fn new(carrier_hz: f64, bandwidth_hz: f64, elements: usize, beams: usize) -> Result<Self> {
        let cfg = SystemConfig {
            carrier_hz,
            bandwidth_hz,
            elements,
            beams,
            solver_points: (2 * elements).max(2),
            freq_points: DEFAULT_FREQ_POINTS,
            angle_points: DEFAULT_ANGLE_POINTS,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_finite("carrier frequency", self.carrier_hz)?;
        ensure_finite("bandwidth", self.bandwidth_hz)?;
        if self.carrier_hz <= 0.0 {
            return Err(invalid("carrier frequency must be positive"));
        }
        if self.bandwidth_hz < 0.0 || self.bandwidth_hz >= 2.0 * self.carrier_hz {
            return Err(invalid("bandwidth must satisfy 0 <= B < 2 f_c"));
        }
        if self.elements == 0 {
            return Err(invalid("element count must be at least 1"));
        }
        if self.beams == 0 {
            return Err(invalid("codebook size must be at least 1"));
        }
        if self.solver_points < 2 {
            return Err(invalid("solver grid needs at least 2 points"));
        }
        if self.freq_points < 2 {
            return Err(invalid("frequency grid needs at least 2 points"));
        }
        if self.angle_points < 2 {
            return Err(invalid("angle grid needs at least 2 points"));
        }
        Ok(())
    }

    pub fn warnings(&self) -> Vec<ConfigWarning> {
        let mut out = Vec::new();
        if self.beams < self.elements {
            out.push(ConfigWarning::FewerBeamsThanElements {
                beams: self.beams,
                elements: self.elements,
            });
        }
        out
    }

    /// `(f_c + B/2) / f_c`, the composite scale at the upper band edge.
    pub fn upper_scale(&self) -> f64 {
        (self.carrier_hz + self.bandwidth_hz / 2.0) / self.carrier_hz
    }

    /// `(f_c - B/2) / f_c`, the composite scale at the lower band edge.
    pub fn lower_scale(&self) -> f64 {
        (self.carrier_hz - self.bandwidth_hz / 2.0) / self.carrier_hz
    }

    /// `B / f_c`.
    pub fn fractional_bandwidth(&self) -> f64 {
        self.bandwidth_hz / self.carrier_hz
    }

    pub fn with_bandwidth(&self, bandwidth_hz: f64) -> Self {
        SystemConfig {
            bandwidth_hz,
            ..self.clone()
        }
    }

    /// Same system with `N` elements; the solver grid follows as `M = 2N`.
    pub fn with_elements(&self, elements: usize) -> Self {
        SystemConfig {
            elements,
            solver_points: (2 * elements).max(2),
            ..self.clone()
        }
    }

    pub fn with_beams(&self, beams: usize) -> Self {
        SystemConfig {
            beams,
            ..self.clone()
        }
    }

    /// Multiplicative composite scales `1 + f_k/f_c` on the uniform frequency
    /// grid. Both band edges are always present.
    pub fn frequency_scales(&self) -> Vec<f64> {
        let n = self.freq_points;
        let half = self.bandwidth_hz / 2.0;
        (0..n)
            .map(|k| {
                let f = if k == 0 {
                    -half
                } else if k == n - 1 {
                    half
                } else {
                    -half + self.bandwidth_hz * k as f64 / (n - 1) as f64
                };
                1.0 + f / self.carrier_hz
            })
            .collect()
    }
}

fn invalid(msg: &str) -> Error {
    Error::InvalidConfig(msg.into())
}

/// Constant-modulus analog weights: every entry has modulus `1/√N`.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamVector {
    weights: Vec<C64>,
}

impl BeamVector {
    /// Wraps `weights`, rejecting any entry whose modulus is off `1/√N` by more
    /// than [`MODULUS_TOLERANCE`].
    pub fn new(weights: Vec<C64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::LengthMismatch {
                expected: 1,
                actual: 0,
            });
        }
        let expected = 1.0 / libm::sqrt(weights.len() as f64);
        for (index, w) in weights.iter().enumerate() {
            let modulus = w.norm();
            if !modulus.is_finite() || (modulus - expected).abs() > MODULUS_TOLERANCE {
                return Err(Error::ModulusViolation {
                    index,
                    modulus,
                    expected,
                });
            }
        }
        Ok(BeamVector { weights })
    }

    /// `w(i) = e^{jθ_i}/√N`.
    pub fn from_phases(phases: &[f64]) -> Self {
        let scale = 1.0 / libm::sqrt(phases.len() as f64);
        BeamVector {
            weights: phases.iter().map(|&p| C64::from_polar(scale, p)).collect(),
        }
    }

    /// Nearest constant-modulus vector to `v` in Euclidean norm: keeps each
    /// entry's phase, with `arg(0) = 0`.
    pub fn project(v: &[C64]) -> Self {
        let scale = 1.0 / libm::sqrt(v.len() as f64);
        BeamVector {
            weights: v.iter().map(|&z| C64::from_polar(scale, phase(z))).collect(),
        }
    }

    /// Beam matched to composite direction `composite`: `h(ĥf)/√N`, whose gain
    /// there is `N`.
    pub fn matched(elements: usize, composite: f64) -> Self {
        let scale = 1.0 / libm::sqrt(elements as f64);
        BeamVector {
            weights: steering_entries(elements, composite)
                .map(|z| z * scale)
                .collect(),
        }
    }

    /// Wraps weights already known to satisfy the modulus invariant.
    pub(crate) fn from_raw(weights: Vec<C64>) -> Self {
        BeamVector { weights }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[C64] {
        &self.weights
    }

    pub fn into_weights(self) -> Vec<C64> {
        self.weights
    }

    /// Power gain `|h(ĥf)^H w|²` at a composite direction.
    pub fn gain_at(&self, composite: f64) -> f64 {
        pattern_gain(&self.weights, composite)
    }
}

/// A steering vector together with the composite value it was evaluated at.
#[derive(Debug, Clone, PartialEq)]
pub struct SteeringVector {
    pub entries: Vec<C64>,
    pub composite: f64,
}

/// `ĥf = (1 + f/f_c)·sin φ`.
pub fn composite(cfg: &SystemConfig, freq_hz: f64, phi: f64) -> f64 {
    (1.0 + freq_hz / cfg.carrier_hz) * libm::sin(phi)
}

fn steering_entries(elements: usize, composite: f64) -> impl Iterator<Item = C64> {
    (0..elements).map(move |n| {
        if n == 0 {
            C64::new(1.0, 0.0)
        } else {
            C64::from_polar(1.0, PI * n as f64 * composite)
        }
    })
}

/// `h(ĥf)` for an `elements`-element half-wavelength ULA. Accepts any finite
/// composite value, including ones outside the physical band.
pub fn steering_composite(elements: usize, composite: f64) -> SteeringVector {
    SteeringVector {
        entries: steering_entries(elements, composite).collect(),
        composite,
    }
}

/// Steering vector at baseband frequency `freq_hz ∈ [-B/2, B/2]` and angle
/// `phi ∈ [-π/2, π/2]`.
pub fn steering(cfg: &SystemConfig, freq_hz: f64, phi: f64) -> Result<SteeringVector> {
    check_frequency(cfg, freq_hz)?;
    check_angle(phi)?;
    Ok(steering_composite(cfg.elements, composite(cfg, freq_hz, phi)))
}

pub(crate) fn check_angle(phi: f64) -> Result<f64> {
    ensure_finite("angle", phi)?;
    if phi.abs() > FRAC_PI_2 {
        return Err(Error::OutOfRange {
            name: "angle",
            value: phi,
            lo: -FRAC_PI_2,
            hi: FRAC_PI_2,
        });
    }
    Ok(phi)
}

fn check_frequency(cfg: &SystemConfig, freq_hz: f64) -> Result<f64> {
    ensure_finite("frequency", freq_hz)?;
    let half = cfg.bandwidth_hz / 2.0;
    if freq_hz.abs() > half {
        return Err(Error::OutOfRange {
            name: "frequency",
            value: freq_hz,
            lo: -half,
            hi: half,
        });
    }
    Ok(freq_hz)
}

fn check_length(cfg: &SystemConfig, w: &BeamVector) -> Result<()> {
    if w.len() != cfg.elements {
        return Err(Error::LengthMismatch {
            expected: cfg.elements,
            actual: w.len(),
        });
    }
    Ok(())
}

/// Array response `h(ĥf)^H w = Σ w(n) e^{-jπ(n-1)ĥf}`, evaluated by Horner's rule.
pub fn response(weights: &[C64], composite: f64) -> C64 {
    let z = C64::from_polar(1.0, -PI * composite);
    weights
        .iter()
        .rev()
        .fold(C64::new(0.0, 0.0), |acc, &w| acc * z + w)
}

/// `|h(ĥf)^H w|²`.
pub fn pattern_gain(weights: &[C64], composite: f64) -> f64 {
    response(weights, composite).norm_sqr()
}

/// Beam gain `|h(f, φ)^H w|²`.
pub fn beam_gain(cfg: &SystemConfig, freq_hz: f64, phi: f64, w: &BeamVector) -> Result<f64> {
    check_frequency(cfg, freq_hz)?;
    check_angle(phi)?;
    check_length(cfg, w)?;
    Ok(w.gain_at(composite(cfg, freq_hz, phi)))
}

/// Wideband beam gain: the minimum of [`beam_gain`] over the band, taken on the
/// configured uniform frequency grid.
pub fn wideband_beam_gain(cfg: &SystemConfig, phi: f64, w: &BeamVector) -> Result<f64> {
    check_angle(phi)?;
    check_length(cfg, w)?;
    let scales = cfg.frequency_scales();
    Ok(band_minimum(w.weights(), libm::sin(phi), &scales))
}

/// Minimum pattern gain over `scale·sin φ` for every frequency scale.
pub(crate) fn band_minimum(weights: &[C64], sin_phi: f64, scales: &[f64]) -> f64 {
    scales
        .iter()
        .map(|s| pattern_gain(weights, s * sin_phi))
        .fold(f64::INFINITY, f64::min)
}

/// Minimum of `gain(scale·sin φ)` over the band, or `None` as soon as one
/// frequency falls strictly below `floor`. Band edges are scanned first since
/// squinted beams usually bottom out there.
pub(crate) fn band_minimum_above(
    gain: impl Fn(f64) -> f64,
    sin_phi: f64,
    scales: &[f64],
    floor: f64,
) -> Option<f64> {
    let n = scales.len();
    let mut min = f64::INFINITY;
    for k in coarse_to_fine(n) {
        let g = gain(scales[k] * sin_phi);
        if g < floor {
            return None;
        }
        min = min.min(g);
    }
    Some(min)
}

/// Every index in `0..n` exactly once: both ends, then interior points on
/// successively halved strides, so an interior dip is reached early.
fn coarse_to_fine(n: usize) -> impl Iterator<Item = usize> {
    let top = if n > 2 { (n - 1).next_power_of_two() / 2 } else { 0 };
    let ends = [0, n.saturating_sub(1)].into_iter().take(n.min(2));
    let strides = core::iter::successors((top > 0).then_some(top), |&s| (s > 1).then_some(s / 2));
    ends.chain(strides.flat_map(move |step| {
        (step..n.saturating_sub(1))
            .step_by(step)
            .filter(move |k| step == top || k % (2 * step) != 0)
    }))
}

/// `arg z`, with `arg 0 = 0`.
pub fn phase(z: C64) -> f64 {
    if z.re == 0.0 && z.im == 0.0 {
        0.0
    } else {
        z.arg()
    }
}

/// `sin(N x/2) / sin(x/2)`, continued by its limit `±N` where `sin(x/2) = 0`.
pub fn dirichlet(elements: usize, x: f64) -> f64 {
    let n = elements as f64;
    let den = libm::sin(x / 2.0);
    if den.abs() < 1e-12 {
        // x = 2πk: the ratio tends to N·cos(Nπk)/cos(πk) = ±N.
        let k = libm::round(x / (2.0 * PI));
        let sign = if (k as i64 * (elements as i64 - 1)) % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        return sign * n;
    }
    libm::sin(n * x / 2.0) / den
}

/// Free-space amplitude factor with molecular absorption:
/// `c/(4π f_c d) · e^{-κ d/2}`.
pub fn path_loss(carrier_hz: f64, distance_m: f64, absorption_per_m: f64) -> Result<f64> {
    ensure_finite("carrier frequency", carrier_hz)?;
    ensure_finite("distance", distance_m)?;
    ensure_finite("absorption", absorption_per_m)?;
    if carrier_hz <= 0.0 {
        return Err(invalid("carrier frequency must be positive"));
    }
    if distance_m <= 0.0 {
        return Err(invalid("distance must be positive"));
    }
    if absorption_per_m < 0.0 {
        return Err(invalid("absorption coefficient must be non-negative"));
    }
    Ok(SPEED_OF_LIGHT / (4.0 * PI * carrier_hz * distance_m)
        * libm::exp(-absorption_per_m * distance_m / 2.0))
}

/// Delay spread across a half-wavelength array for a path at `phi`, seconds.
pub fn delay_spread(cfg: &SystemConfig, phi: f64) -> f64 {
    (cfg.elements as f64 - 1.0) * libm::sin(phi).abs() / (2.0 * cfg.carrier_hz)
}

/// Cyclic-prefix length that any OFDM symbol must exceed to absorb the
/// largest array delay spread (at `φ = ±π/2`), seconds.
pub fn min_cp(cfg: &SystemConfig) -> f64 {
    (cfg.elements as f64 - 1.0) / (2.0 * cfg.carrier_hz)
}
