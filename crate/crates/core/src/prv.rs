//! Piecewise response-vector initializer: a closed-form wide beam over
//! `[-ΔΩ/2, ΔΩ/2]` assembled from `Z` sub-arrays.
//!
//! Sub-array `z` (of `N_s = N/Z` elements) points at `ψ_pt^z`, the centre of the
//! `z`-th of `Z` equal slices of the window. Neighbouring sub-array beams cross
//! at `ψ_itr^z`; the phase offsets `θ_z` rotate each block so that the two
//! dominant contributions add in phase there instead of cancelling.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::array::{response, BeamVector, C64};
use crate::error::{ensure_finite, Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct PrvPlan {
    /// `Z`.
    pub subarrays: usize,
    /// `N_s`, with `Z·N_s = N`.
    pub subarray_len: usize,
    /// `θ_z` per sub-array, rad.
    pub thetas: Vec<f64>,
    /// `ψ_pt^z` per sub-array.
    pub pointing: Vec<f64>,
    /// `ψ_itr^z` for `z = 1..Z-1`: crossing of sub-array beams `z` and `z+1`.
    pub intersections: Vec<f64>,
    /// Window width actually covered (input clamped to at most 2).
    pub delta_omega: f64,
}

impl PrvPlan {
    pub fn elements(&self) -> usize {
        self.subarrays * self.subarray_len
    }
}

/// Sub-array layout and phases for an `elements`-element beam of composite
/// width `delta_omega`.
pub fn prv_plan(elements: usize, delta_omega: f64) -> Result<PrvPlan> {
    if elements == 0 {
        return Err(Error::InvalidConfig("element count must be at least 1".into()));
    }
    ensure_finite("delta_omega", delta_omega)?;
    if delta_omega <= 0.0 {
        return Err(Error::InvalidConfig("delta_omega must be positive".into()));
    }
    // The pattern has period 2 in ĥf, so a wider window is no different from 2.
    let dw = delta_omega.min(2.0);
    let n = elements as f64;
    let z = if dw <= 2.0 / n {
        1
    } else {
        let need = libm::sqrt(dw * n / 2.0);
        (1..=elements)
            .find(|&z| elements.is_multiple_of(z) && z as f64 >= need)
            .unwrap_or(elements)
    };
    let ns = elements / z;
    let zf = z as f64;
    let thetas = (1..=z)
        .map(|k| {
            let k = k as f64;
            ((zf - k + 1.0) * ns as f64 - 1.0) / (2.0 * zf) * (k - 1.0) * PI * dw
        })
        .collect();
    let pointing = (1..=z)
        .map(|k| -dw / 2.0 + (2.0 * k as f64 - 1.0) * dw / (2.0 * zf))
        .collect();
    let intersections = (1..z).map(|k| -dw / 2.0 + k as f64 * dw / zf).collect();
    Ok(PrvPlan {
        subarrays: z,
        subarray_len: ns,
        thetas,
        pointing,
        intersections,
        delta_omega: dw,
    })
}

/// The initializer beam for `plan`.
pub fn prv_beam(plan: &PrvPlan) -> BeamVector {
    beam_with_phases(plan, &plan.thetas)
}

/// Stacked sub-array beam with arbitrary block phases: element `k` of block `z`
/// has phase `π k ψ_pt^z − θ_z`.
pub fn beam_with_phases(plan: &PrvPlan, thetas: &[f64]) -> BeamVector {
    let phases: Vec<f64> = plan
        .pointing
        .iter()
        .zip(thetas)
        .flat_map(|(&psi, &theta)| (0..plan.subarray_len).map(move |k| PI * k as f64 * psi - theta))
        .collect();
    BeamVector::from_phases(&phases)
}

/// Contribution of each sub-array block of `w` to the full response `h(ĥf)^H w`.
/// The entries sum to [`response`].
pub fn subarray_responses(plan: &PrvPlan, w: &BeamVector, composite: f64) -> Vec<C64> {
    let ns = plan.subarray_len;
    let z = C64::from_polar(1.0, -PI * composite);
    w.weights()
        .chunks(ns)
        .enumerate()
        .map(|(block, chunk)| response(chunk, composite) * z.powu((block * ns) as u32))
        .collect()
}

/// Smallest gain of `w` over `points` uniformly spaced composite values in
/// `[-ΔΩ/2, ΔΩ/2]`.
pub fn coverage_floor(w: &BeamVector, delta_omega: f64, points: usize) -> f64 {
    let points = points.max(2);
    (0..points)
        .map(|m| {
            let x = -delta_omega / 2.0 + m as f64 * delta_omega / (points - 1) as f64;
            w.gain_at(x)
        })
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::array::phase;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn wrap(a: f64) -> f64 {
        let t = libm::fmod(a + PI, 2.0 * PI);
        if t < 0.0 {
            t + PI
        } else {
            t - PI
        }
    }

    #[test]
    fn narrow_window_uses_one_array() {
        let p = prv_plan(16, 2.0 / 16.0).unwrap();
        assert_eq!((p.subarrays, p.subarray_len), (1, 16));
        assert_eq!(p.thetas, [0.0]);
        assert!(p.intersections.is_empty());
        let w = prv_beam(&p);
        assert_eq!(w, BeamVector::matched(16, 0.0));
        assert_relative_eq!(w.gain_at(0.0), 16.0, max_relative = 1e-14);
    }

    #[test]
    fn two_subarray_example() {
        let p = prv_plan(16, 0.5).unwrap();
        assert_eq!((p.subarrays, p.subarray_len), (2, 8));
        assert_eq!(p.thetas[0], 0.0);
        assert_relative_eq!(p.thetas[1], 7.0 * PI / 8.0, max_relative = 1e-15);
        assert_eq!(p.pointing, [-0.125, 0.125]);
        assert_eq!(p.intersections, [0.0]);
    }

    #[test]
    fn divisor_choice() {
        // √(1.0·12/2) = 2.45 → smallest divisor of 12 at least that is 3.
        assert_eq!(prv_plan(12, 1.0).unwrap().subarrays, 3);
        // prime N falls back to Z = N
        assert_eq!(prv_plan(13, 1.0).unwrap().subarrays, 13);
        assert_eq!(prv_plan(1, 0.7).unwrap().subarrays, 1);
        assert_eq!(prv_plan(16, 5.0).unwrap().delta_omega, 2.0);
        assert!(prv_plan(0, 0.5).is_err());
        assert!(prv_plan(4, 0.0).is_err());
        assert!(prv_plan(4, f64::NAN).is_err());
    }

    #[test]
    fn phases_beat_flat_phases_at_crossings() {
        let p = prv_plan(16, 0.5).unwrap();
        let w = prv_beam(&p);
        let flat = beam_with_phases(&p, &alloc::vec![0.0; p.subarrays]);
        for &x in &p.intersections {
            assert!(w.gain_at(x) > flat.gain_at(x));
        }
    }

    #[test]
    fn telescoping_increments() {
        for (n, dw) in [(16, 0.5), (64, 0.4), (36, 1.0)] {
            let p = prv_plan(n, dw).unwrap();
            let (z, ns) = (p.subarrays as f64, p.subarray_len as f64);
            let a = ((ns - 1.0) / (2.0 * z) + ns / 2.0) * PI * p.delta_omega;
            let b = PI * ns * p.delta_omega / z;
            for k in 1..p.subarrays {
                let d = p.thetas[k] - p.thetas[k - 1];
                assert_relative_eq!(d, a - b * k as f64, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn block_responses_sum_to_full_response() {
        let p = prv_plan(24, 0.8).unwrap();
        let w = prv_beam(&p);
        for x in [-0.4, -0.1, 0.0, 0.33] {
            let parts: C64 = subarray_responses(&p, &w, x).into_iter().sum();
            assert!((parts - response(w.weights(), x)).norm() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn adjacent_blocks_in_phase_at_crossings(
            n in prop::sample::select(alloc::vec![8usize, 12, 16, 24, 32, 48, 64]),
            dw in 0.05f64..1.0,
        ) {
            let p = prv_plan(n, dw).unwrap();
            let w = prv_beam(&p);
            for (k, &x) in p.intersections.iter().enumerate() {
                let parts = subarray_responses(&p, &w, x);
                let d = wrap(phase(parts[k + 1]) - phase(parts[k]));
                prop_assert!(d.abs() <= 1e-9, "N={} k={} diff={}", n, k, d);
            }
        }

        #[test]
        fn coverage_floor_positive(
            n in prop::sample::select(alloc::vec![4usize, 8, 16, 32, 64]),
            dw in 0.01f64..=1.0,
        ) {
            let p = prv_plan(n, dw).unwrap();
            let w = prv_beam(&p);
            prop_assert!(coverage_floor(&w, p.delta_omega, 512) > 0.0);
            for z in w.weights() {
                prop_assert!((z.norm() - 1.0 / libm::sqrt(n as f64)).abs() <= 1e-15);
            }
        }
    }
}
