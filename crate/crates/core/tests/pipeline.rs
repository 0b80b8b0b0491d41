use std::f64::consts::PI;

use proptest::prelude::*;
use wbcb_core::codebook::{build_codebook, codebook_gain, design, evaluate};
use wbcb_core::narrowband::narrowband_codebook;
use wbcb_core::zones::{prop3_upper_bound, uniform_sine_partition};
use wbcb_core::{BeamVector, Codebook, EvaluationMode, SolverConfig, SystemConfig, C64};

/// max over beams of min over the band of `|Σ w_n e^{-jπn(1+f/f_c) sin φ}|²`.
fn brute_force(cfg: &SystemConfig, beams: &[BeamVector], phi: f64) -> f64 {
    let k = cfg.freq_points;
    beams
        .iter()
        .map(|w| {
            (0..k)
                .map(|i| {
                    let f = -cfg.bandwidth_hz / 2.0 + cfg.bandwidth_hz * i as f64 / (k - 1) as f64;
                    let x = (1.0 + f / cfg.carrier_hz) * phi.sin();
                    w.weights()
                        .iter()
                        .enumerate()
                        .map(|(n, &z)| z * C64::from_polar(1.0, -PI * n as f64 * x))
                        .sum::<C64>()
                        .norm_sqr()
                })
                .fold(f64::INFINITY, f64::min)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

#[test]
fn designed_codebook_is_feasible_and_balanced() {
    for (n, l, b) in [(8usize, 16usize, 10e9), (16, 32, 10e9), (16, 24, 18e9), (24, 48, 2e9)] {
        let cfg = SystemConfig::new(140e9, b, n, l).unwrap();
        let d = design(&cfg, &SolverConfig::default()).unwrap();
        let cb = &d.codebook;
        assert_eq!(cb.len(), l);
        let m = 1.0 / (n as f64).sqrt();
        for w in &cb.beams {
            assert!(w.weights().iter().all(|z| (z.norm() - m).abs() <= 1e-12));
        }
        let rep = evaluate(&cfg, cb, EvaluationMode::Grid).unwrap();
        let (lo, hi) = rep
            .per_zone
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(a, b), &g| (a.min(g), b.max(g)));
        assert!(hi - lo <= 1e-9 * hi, "N={n} L={l}: zones {lo}..{hi}");
        assert!(rep.worst_case.gain <= 1.02 * prop3_upper_bound(&cb.partition));
        assert!(rep.worst_case.gain > 0.0);
    }
}

#[test]
fn designed_beats_narrowband_under_squint() {
    for n in [16usize, 32] {
        let cfg = SystemConfig::new(140e9, 10e9, n, 2 * n).unwrap();
        let wide = evaluate(&cfg, &build_codebook(&cfg, &SolverConfig::default()).unwrap(), EvaluationMode::Grid)
            .unwrap()
            .worst_case
            .gain;
        let nb = evaluate(&cfg, &narrowband_codebook(&cfg).unwrap(), EvaluationMode::Grid)
            .unwrap()
            .worst_case
            .gain;
        assert!(wide > nb, "N={n}: {wide} vs {nb}");
    }
}

#[test]
fn codebook_gain_is_mirror_symmetric() {
    let cfg = SystemConfig::new(140e9, 10e9, 16, 32).unwrap();
    let cb = build_codebook(&cfg, &SolverConfig::default()).unwrap();
    for k in 0..50 {
        let phi = -1.5 + 3.0 * k as f64 / 49.0;
        let (a, _) = codebook_gain(&cfg, &cb, phi).unwrap();
        let (b, _) = codebook_gain(&cfg, &cb, -phi).unwrap();
        assert!((a - b).abs() <= 1e-9 * a.max(1.0), "phi={phi}: {a} vs {b}");
    }
}

#[test]
fn design_is_deterministic() {
    let cfg = SystemConfig::new(140e9, 10e9, 12, 20).unwrap();
    let a = build_codebook(&cfg, &SolverConfig::default()).unwrap();
    let b = build_codebook(&cfg, &SolverConfig::default()).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.provenance.as_ref().unwrap().digest.len(), 64);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn arbitrary_codebook_matches_direct_sum(
        n in 1usize..20,
        l in 1usize..6,
        seed_phases in proptest::collection::vec(-PI..PI, 120),
        b_ghz in 0.0f64..30.0,
        phi in -1.57f64..1.57,
    ) {
        let mut cfg = SystemConfig::new(140e9, b_ghz * 1e9, n, l).unwrap();
        cfg.freq_points = 33;
        let beams: Vec<BeamVector> = (0..l)
            .map(|i| BeamVector::from_phases(&seed_phases[i * n..(i + 1) * n]))
            .collect();
        let cb = Codebook::new(beams.clone(), uniform_sine_partition(l).unwrap(), None).unwrap();
        let (g, best) = codebook_gain(&cfg, &cb, phi).unwrap();
        let oracle = brute_force(&cfg, &beams, phi);
        prop_assert!((g - oracle).abs() <= 1e-10 * (n as f64));
        prop_assert!(best < l);
        prop_assert!(g <= n as f64 * (1.0 + 1e-12));
    }

    #[test]
    fn matched_codebook_matches_direct_sum(
        n in 2usize..150,
        l in 1usize..40,
        b_ghz in 0.0f64..30.0,
        phi in -1.57f64..1.57,
    ) {
        let mut cfg = SystemConfig::new(140e9, b_ghz * 1e9, n, l).unwrap();
        cfg.freq_points = 33;
        let cb = narrowband_codebook(&cfg).unwrap();
        let (g, best) = codebook_gain(&cfg, &cb, phi).unwrap();
        let oracle = brute_force(&cfg, &cb.beams, phi);
        prop_assert!((g - oracle).abs() <= 1e-9 * (n as f64), "{g} vs {oracle}");
        let own = brute_force(&cfg, &cb.beams[best..=best], phi);
        prop_assert!((own - oracle).abs() <= 1e-9 * (n as f64));
    }
}
