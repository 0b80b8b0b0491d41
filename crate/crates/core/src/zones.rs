//! Angular zones and their virtual (composite-domain) images.
//!
//! A zone `[φ_{l-1}, φ_l]` seen across the band `[-B/2, B/2]` occupies the
//! composite interval `[Ω⁻, Ω⁺]` of `ĥf = (1 + f/f_c) sin φ`. Two zones whose
//! images have the same width can be served by shifted copies of one beam, so
//! the partition is chosen to make every image exactly `ΔΩ` wide.

use alloc::string::ToString;
use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

use crate::array::SystemConfig;
use crate::error::{ensure_finite, Error, Result};

/// Widths of a valid partition agree to this tolerance.
pub const WIDTH_TOLERANCE: f64 = 1e-9;

/// Mirror-symmetry tolerance on boundary angles.
pub const SYMMETRY_TOLERANCE: f64 = 1e-6;

const MAX_BISECTIONS: usize = 200;
const MAX_EXPANSIONS: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct ZonePartition {
    /// `φ_0 = -π/2 < φ_1 < … < φ_L = π/2`, rad.
    pub boundaries: Vec<f64>,
    /// Common composite width `ΔΩ` of every zone image.
    pub delta_omega: f64,
    /// `(Ω_l⁻, Ω_l⁺)` per zone.
    pub intervals: Vec<(f64, f64)>,
}

impl ZonePartition {
    /// Assembles a partition and checks its invariants.
    pub fn new(boundaries: Vec<f64>, delta_omega: f64, intervals: Vec<(f64, f64)>) -> Result<Self> {
        let partition = ZonePartition {
            boundaries,
            delta_omega,
            intervals,
        };
        partition.validate()?;
        Ok(partition)
    }

    /// Rebuilds the zone images from stored boundaries: first as wideband
    /// virtual intervals under `cfg`, falling back to plain sine intervals
    /// (the `B = 0` images) for partitions that were designed narrowband.
    pub fn from_boundaries(cfg: &SystemConfig, boundaries: Vec<f64>, delta_omega: f64) -> Result<Self> {
        if boundaries.len() < 2 {
            return Err(Error::InvalidPartition("need at least two boundaries".to_string()));
        }
        let virtual_images = boundaries
            .windows(2)
            .map(|w| virtual_interval(cfg, w[0], w[1]))
            .collect::<Result<Vec<_>>>()?;
        if equal_widths(&virtual_images, delta_omega) {
            return ZonePartition::new(boundaries, delta_omega, virtual_images);
        }
        let sine_images = sine_intervals(&boundaries);
        ZonePartition::new(boundaries, delta_omega, sine_images)
    }

    pub fn zones(&self) -> usize {
        self.intervals.len()
    }

    /// Midpoint of zone `l`'s composite image, the shift applied to the
    /// prototype beam for that zone.
    pub fn center(&self, zone: usize) -> f64 {
        let (lo, hi) = self.intervals[zone];
        (lo + hi) / 2.0
    }

    /// Index of the zone containing `phi`; boundary angles belong to the
    /// lower-indexed zone.
    pub fn zone_of(&self, phi: f64) -> usize {
        let interior = &self.boundaries[1..self.boundaries.len() - 1];
        interior.partition_point(|&b| b < phi)
    }

    pub fn validate(&self) -> Result<()> {
        let b = &self.boundaries;
        let fail = |msg: &str| Err(Error::InvalidPartition(msg.to_string()));
        if b.len() < 2 || self.intervals.len() != b.len() - 1 {
            return fail("interval count must be one less than the boundary count");
        }
        if b[0] != -FRAC_PI_2 || b[b.len() - 1] != FRAC_PI_2 {
            return fail("boundaries must start at -pi/2 and end at pi/2");
        }
        if b.windows(2).any(|w| !(w[0] < w[1])) {
            return fail("boundaries must be strictly increasing");
        }
        if !(self.delta_omega > 0.0 && self.delta_omega.is_finite()) {
            return fail("delta_omega must be positive and finite");
        }
        if !equal_widths(&self.intervals, self.delta_omega) {
            return fail("zone images do not share the common width");
        }
        let last = b.len() - 1;
        if (0..=last).any(|l| (b[l] + b[last - l]).abs() > SYMMETRY_TOLERANCE) {
            return fail("boundaries are not mirror symmetric");
        }
        Ok(())
    }
}

fn equal_widths(intervals: &[(f64, f64)], delta_omega: f64) -> bool {
    intervals
        .iter()
        .all(|(lo, hi)| ((hi - lo) - delta_omega).abs() <= WIDTH_TOLERANCE)
}

fn sine_intervals(boundaries: &[f64]) -> Vec<(f64, f64)> {
    boundaries
        .windows(2)
        .map(|w| (libm::sin(w[0]), libm::sin(w[1])))
        .collect()
}

/// Composite image `[Ω⁻, Ω⁺]` of the angular zone `[phi_lo, phi_hi]` across
/// the band.
pub fn virtual_interval(cfg: &SystemConfig, phi_lo: f64, phi_hi: f64) -> Result<(f64, f64)> {
    ensure_finite("zone lower edge", phi_lo)?;
    ensure_finite("zone upper edge", phi_hi)?;
    if !(phi_lo < phi_hi) || phi_lo < -FRAC_PI_2 || phi_hi > FRAC_PI_2 {
        return Err(Error::DegenerateInterval {
            lo: phi_lo,
            hi: phi_hi,
        });
    }
    let up = cfg.upper_scale();
    let down = cfg.lower_scale();
    let (s_lo, s_hi) = (libm::sin(phi_lo), libm::sin(phi_hi));
    Ok(if phi_lo >= 0.0 {
        (down * s_lo, up * s_hi)
    } else if phi_hi <= 0.0 {
        (up * s_lo, down * s_hi)
    } else {
        (up * s_lo, up * s_hi)
    })
}

/// Result of one step of the boundary recursion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NextBoundary {
    Angle(f64),
    /// The arcsine argument reached 1: this width already carries the zones
    /// past `π/2`.
    Saturated,
}

/// Next boundary `φ_l` such that `[φ_{l-1}, φ_l]` has composite width
/// `delta_omega`.
///
/// When `delta_omega < B/f_c` the first zones cannot leave `-π/2` at all (even
/// a zero-width zone there spans `B/f_c`); the argument is then clamped and the
/// boundary stays at `-π/2`, which keeps the final boundary monotone in
/// `delta_omega`.
pub fn next_boundary(cfg: &SystemConfig, phi_prev: f64, delta_omega: f64) -> NextBoundary {
    let fc = cfg.carrier_hz;
    let half = cfg.bandwidth_hz / 2.0;
    let s = libm::sin(phi_prev);
    let arg = if phi_prev < 0.0 {
        let num = delta_omega * fc + (fc + half) * s;
        if num <= 0.0 {
            num / (fc - half)
        } else {
            num / (fc + half)
        }
    } else {
        (delta_omega * fc + (fc - half) * s) / (fc + half)
    };
    if arg >= 1.0 {
        NextBoundary::Saturated
    } else {
        NextBoundary::Angle(libm::asin(arg.max(-1.0)))
    }
}

/// Runs the recursion from `-π/2` for `cfg.beams` steps. Returns the boundary
/// sequence (saturated steps recorded as `π/2`) and whether saturation
/// occurred.
fn march(cfg: &SystemConfig, delta_omega: f64) -> (Vec<f64>, bool) {
    let mut boundaries = Vec::with_capacity(cfg.beams + 1);
    boundaries.push(-FRAC_PI_2);
    let mut phi = -FRAC_PI_2;
    for _ in 0..cfg.beams {
        match next_boundary(cfg, phi, delta_omega) {
            NextBoundary::Angle(next) => {
                phi = next;
                boundaries.push(next);
            }
            NextBoundary::Saturated => {
                boundaries.resize(cfg.beams + 1, FRAC_PI_2);
                return (boundaries, true);
            }
        }
    }
    (boundaries, false)
}

/// `φ_L` as a function of `delta_omega`; equals `π/2` once saturated.
pub fn final_boundary(cfg: &SystemConfig, delta_omega: f64) -> f64 {
    let (b, _) = march(cfg, delta_omega);
    b[b.len() - 1]
}

/// Equal-width zone partition. Bisects `ΔΩ` on the recursion until the
/// `L`-th step just closes at `π/2`.
pub fn divide_zones(cfg: &SystemConfig) -> Result<ZonePartition> {
    cfg.validate()?;
    let l = cfg.beams as f64;
    let (up, down) = (cfg.upper_scale(), cfg.lower_scale());
    let saturates = |d: f64| march(cfg, d).1;

    let mut lo = 2.0 / l * down / up;
    let mut hi = 2.0 / l * up / down + cfg.fractional_bandwidth();
    let mut expansions = 0;
    while saturates(lo) {
        lo /= 2.0;
        expansions += 1;
        if expansions > MAX_EXPANSIONS {
            return Err(Error::BracketFailure(expansions));
        }
    }
    while !saturates(hi) {
        hi *= 2.0;
        expansions += 1;
        if expansions > MAX_EXPANSIONS {
            return Err(Error::BracketFailure(expansions));
        }
    }

    for _ in 0..MAX_BISECTIONS {
        let mid = lo + (hi - lo) / 2.0;
        if mid <= lo || mid >= hi {
            break;
        }
        if saturates(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }

    // `hi` saturates, `lo` does not: at `hi` every step before the last is a
    // real angle and the last one lands on π/2.
    let (boundaries, saturated) = march(cfg, hi);
    debug_assert!(saturated);
    let intervals = boundaries
        .windows(2)
        .map(|w| virtual_interval(cfg, w[0], w[1]))
        .collect::<Result<Vec<_>>>()?;
    ZonePartition::new(boundaries, hi, intervals)
}

/// Uniform partition of `sin φ` into `L` zones, the narrowband design.
/// Its images are taken at `B = 0`, so `ΔΩ = 2/L`.
pub fn uniform_sine_partition(beams: usize) -> Result<ZonePartition> {
    if beams == 0 {
        return Err(Error::InvalidConfig("codebook size must be at least 1".to_string()));
    }
    let l = beams as f64;
    let boundaries: Vec<f64> = (0..=beams)
        .map(|k| {
            if k == 0 {
                -FRAC_PI_2
            } else if k == beams {
                FRAC_PI_2
            } else {
                libm::asin(-1.0 + 2.0 * k as f64 / l)
            }
        })
        .collect();
    let intervals = sine_intervals(&boundaries);
    ZonePartition::new(boundaries, 2.0 / l, intervals)
}

/// Upper bound `2/ΔΩ` on the worst-case wideband gain of any codebook whose
/// zones have composite width `ΔΩ`.
pub fn prop3_upper_bound(partition: &ZonePartition) -> f64 {
    2.0 / partition.delta_omega
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cfg(beams: usize, bandwidth_hz: f64) -> SystemConfig {
        SystemConfig::new(140e9, bandwidth_hz, 16, beams).unwrap()
    }

    #[test]
    fn virtual_interval_cases() {
        let c = cfg(4, 10e9);
        let up = 1.0 + 5.0 / 140.0;
        let (a, b) = virtual_interval(&c, 0.0, FRAC_PI_2).unwrap();
        assert_eq!(a, 0.0);
        assert_relative_eq!(b, up, max_relative = 1e-15);
        let (a, b) = virtual_interval(&c, -FRAC_PI_2, FRAC_PI_2).unwrap();
        assert_relative_eq!(a, -up, max_relative = 1e-15);
        assert_relative_eq!(b, up, max_relative = 1e-15);
        let (a, b) = virtual_interval(&c, -0.5, -0.1).unwrap();
        assert_relative_eq!(a, up * libm::sin(-0.5), max_relative = 1e-15);
        assert_relative_eq!(b, (1.0 - 5.0 / 140.0) * libm::sin(-0.1), max_relative = 1e-15);
        let narrow = cfg(4, 0.0);
        for (lo, hi) in [(-1.0, -0.2), (-0.3, 0.4), (0.1, 1.5)] {
            let (a, b) = virtual_interval(&narrow, lo, hi).unwrap();
            assert_eq!((a, b), (libm::sin(lo), libm::sin(hi)));
        }
        assert!(virtual_interval(&c, 0.3, 0.3).is_err());
        assert!(virtual_interval(&c, 0.4, 0.3).is_err());
    }

    #[test]
    fn next_boundary_examples() {
        let narrow = cfg(4, 0.0);
        for prev in [-1.2, -0.3, 0.0, 0.5] {
            match next_boundary(&narrow, prev, 0.1) {
                NextBoundary::Angle(a) => {
                    assert_relative_eq!(a, libm::asin(0.1 + libm::sin(prev)), max_relative = 1e-14)
                }
                NextBoundary::Saturated => panic!("unexpected saturation"),
            }
        }
        let wide = cfg(1, 10e9);
        let full = 2.0 * wide.upper_scale();
        assert_eq!(next_boundary(&wide, -FRAC_PI_2, full), NextBoundary::Saturated);
        assert!(matches!(
            next_boundary(&wide, -FRAC_PI_2, full * (1.0 - 1e-9)),
            NextBoundary::Angle(a) if a < FRAC_PI_2 && a > 1.5
        ));
        let from_zero = next_boundary(&wide, 0.0, 0.1);
        assert_eq!(from_zero, NextBoundary::Angle(libm::asin(0.1 * 140.0 / 145.0)));
    }

    #[test]
    fn width_below_edge_spread_stays_at_endfire() {
        let c = cfg(64, 10e9);
        assert_eq!(
            next_boundary(&c, -FRAC_PI_2, 0.5 * c.fractional_bandwidth()),
            NextBoundary::Angle(-FRAC_PI_2)
        );
    }

    #[test]
    fn single_zone_covers_everything() {
        let c = cfg(1, 10e9);
        let p = divide_zones(&c).unwrap();
        assert_eq!(p.boundaries, [-FRAC_PI_2, FRAC_PI_2]);
        assert_relative_eq!(p.delta_omega, 2.0 * c.upper_scale(), max_relative = 1e-12);
    }

    #[test]
    fn partition_invariants_hold() {
        for beams in [1, 2, 3, 4, 7, 32, 64, 200] {
            for bw in [0.0, 2e9, 10e9, 30e9] {
                let c = cfg(beams, bw);
                let p = divide_zones(&c).unwrap();
                assert_eq!(p.boundaries[0], -FRAC_PI_2);
                assert_eq!(p.boundaries[beams], FRAC_PI_2);
                p.validate().unwrap();
                assert_eq!(p.zones(), beams);
            }
        }
    }

    #[test]
    fn zero_bandwidth_matches_uniform_sine_partition() {
        for beams in [1, 4, 32, 200] {
            let p = divide_zones(&cfg(beams, 0.0)).unwrap();
            let u = uniform_sine_partition(beams).unwrap();
            for (a, b) in p.boundaries.iter().zip(&u.boundaries) {
                assert!((a - b).abs() <= 1e-12, "{a} vs {b}");
            }
            assert_relative_eq!(p.delta_omega, 2.0 / beams as f64, max_relative = 1e-12);
        }
    }

    #[test]
    fn adjacent_images_overlap_by_fractional_bandwidth() {
        let c = cfg(32, 10e9);
        let p = divide_zones(&c).unwrap();
        for l in 1..c.beams {
            let phi = p.boundaries[l];
            if phi > 0.0 {
                let overlap = p.intervals[l - 1].1 - p.intervals[l].0;
                assert!(overlap > 0.0);
                assert_relative_eq!(
                    overlap,
                    c.fractional_bandwidth() * libm::sin(phi),
                    max_relative = 1e-9
                );
            }
        }
    }

    #[test]
    fn final_boundary_is_monotone_in_width() {
        let c = cfg(32, 10e9);
        let lo = 2.0 / 32.0 * c.lower_scale() / c.upper_scale();
        let hi = 2.0 / 32.0 * c.upper_scale() / c.lower_scale() + c.fractional_bandwidth();
        let mut prev = f64::NEG_INFINITY;
        for k in 0..100 {
            let d = lo + (hi - lo) * k as f64 / 99.0;
            let phi_l = final_boundary(&c, d);
            assert!(phi_l >= prev, "decrease at sample {k}");
            prev = phi_l;
        }
        assert!(final_boundary(&c, lo) < FRAC_PI_2);
        assert_eq!(final_boundary(&c, hi), FRAC_PI_2);
    }

    #[test]
    fn zones_narrowest_between_center_and_edges() {
        for beams in [32, 48, 200] {
            for bw in [7e9, 10e9, 20e9] {
                let c = cfg(beams, bw);
                let p = divide_zones(&c).unwrap();
                let widths: Vec<f64> = p.boundaries.windows(2).map(|w| w[1] - w[0]).collect();
                let (argmin, _) = widths
                    .iter()
                    .enumerate()
                    .fold((0, f64::INFINITY), |acc, (i, &w)| if w < acc.1 { (i, w) } else { acc });
                let center = p.zone_of(0.0);
                assert!(argmin != 0 && argmin != beams - 1, "L={beams} B={bw}: edge zone narrowest");
                assert!(argmin != center, "L={beams} B={bw}: center zone narrowest");
            }
        }
    }

    #[test]
    fn bound_examples() {
        let p = divide_zones(&cfg(8, 0.0)).unwrap();
        assert_relative_eq!(prop3_upper_bound(&p), 8.0, max_relative = 1e-12);
        let p = divide_zones(&cfg(1, 0.0)).unwrap();
        assert_relative_eq!(prop3_upper_bound(&p), 1.0, max_relative = 1e-12);
        let p = divide_zones(&cfg(32, 10e9)).unwrap();
        assert_eq!(prop3_upper_bound(&p), 2.0 / p.delta_omega);
        assert!(prop3_upper_bound(&p) < 32.0);
    }

    #[test]
    fn zone_lookup() {
        let p = uniform_sine_partition(4).unwrap();
        assert_eq!(p.zone_of(-FRAC_PI_2), 0);
        assert_eq!(p.zone_of(-0.1), 1);
        assert_eq!(p.zone_of(0.0), 1);
        assert_eq!(p.zone_of(0.1), 2);
        assert_eq!(p.zone_of(FRAC_PI_2), 3);
    }

    #[test]
    fn rebuild_from_boundaries() {
        let c = cfg(32, 10e9);
        let p = divide_zones(&c).unwrap();
        let q = ZonePartition::from_boundaries(&c, p.boundaries.clone(), p.delta_omega).unwrap();
        assert_eq!(p, q);
        let u = uniform_sine_partition(32).unwrap();
        let v = ZonePartition::from_boundaries(&c, u.boundaries.clone(), u.delta_omega).unwrap();
        assert_eq!(u, v);
        assert!(ZonePartition::from_boundaries(&c, p.boundaries.clone(), 0.5).is_err());
    }
}
