//! Independent reference computations checked against the library routes.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use ncoherence::distance::binary_entropy;
use ncoherence::qpea::THETA_GRID_POINTS;
use ncoherence::*;
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Direct `2^m` term sum written out independently of the library.
fn brute_force_prob(m: u32, theta: f64, delta: f64) -> f64 {
    let (s, c) = (theta / 2.0).sin_cos();
    let mut acc = Complex::new(0.0, 0.0);
    for y in 0u64..1 << m {
        let b = y.count_ones() as i32;
        let w = c.powi(m as i32 - b) * s.powi(b);
        acc += Complex::from_polar(w, 2.0 * PI * delta * y as f64);
    }
    acc.norm_sqr() / f64::from(1u32 << m)
}

#[test]
fn nc_distance_matches_high_precision_reference() {
    // 40-digit evaluation of S(L || R) for rho pure at pi/4, sigma = diag(0.3, 0.7), n = 2
    let reference = 0.606_590_137_416_262_1;
    let rho = BlochState::pure(FRAC_PI_4).unwrap().density();
    let d = nc_distance_at(&rho, 0.3, &NcConfig::default())
        .unwrap()
        .as_finite()
        .unwrap();
    assert!(d > 0.0);
    assert!((d - reference).abs() / reference < 1e-10, "{d} vs {reference}");
}

#[test]
fn random_4x4_reconstruction() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let mut entries = vec![Complex::new(0.0, 0.0); 16];
        for i in 0..4 {
            for j in i..4 {
                let z = if i == j {
                    Complex::new(rng.gen_range(-1.0..1.0), 0.0)
                } else {
                    Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                };
                entries[i * 4 + j] = z;
                entries[j * 4 + i] = z.conj();
            }
        }
        let h = HermitianOperator::new(4, entries).unwrap();
        let dec = eig_herm(&h).unwrap();
        let v = dec.eigenvectors();
        let mut worst: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                let mut sum = Complex::new(0.0, 0.0);
                for (k, &lambda) in dec.eigenvalues().iter().enumerate() {
                    sum += v[i * 4 + k] * lambda * v[j * 4 + k].conj();
                }
                worst = worst.max((sum - h.get(i, j)).norm());
            }
        }
        assert!(worst <= 1e-10, "reconstruction error {worst}");
        assert!(dec.orthonormality_error() <= 1e-10);
        assert!(dec.eigenvalues().windows(2).all(|w| w[0] >= w[1]));
    }
}

#[test]
fn conventional_coherence_is_binary_entropy_of_population() {
    for theta in ncoherence::linspace(0.01, PI - 0.01, 25) {
        let rho = BlochState::pure(theta).unwrap().density();
        let c = rel_ent_coherence(&rho).unwrap();
        let expected = binary_entropy((theta / 2.0).cos().powi(2));
        assert!((c.value - expected).abs() < 1e-9);
        assert!((c.optimized_value - expected).abs() < 1e-6);
    }
}

#[test]
fn trace_distance_coherence_brute_force() {
    let rho = BlochState::pure(FRAC_PI_2).unwrap().density();
    let x = BlochState::mixed(0.6, FRAC_PI_2).unwrap().density();
    for (state, expected) in [(rho, 0.5), (x, 0.3)] {
        let brute = (0..=100_000)
            .map(|i| {
                let p = i as f64 / 100_000.0;
                trace_distance(&state, &HermitianOperator::diagonal(&[p, 1.0 - p]).unwrap()).unwrap()
            })
            .fold(f64::INFINITY, f64::min);
        assert!((brute - expected).abs() < 1e-9);
        assert!((trace_dist_coherence(&state).unwrap() - brute).abs() < 1e-9);
    }
}

#[test]
fn product_form_matches_brute_force_sum() {
    for m in 2..=10 {
        for theta in [0.3, PI / 5.0, FRAC_PI_2, 2.5] {
            // 2^-10 exceeds the 2^-(m+1) offset bound at m = 10, so that case uses 2^-11
            for delta in [0.0, 2f64.powi(-10).min(2f64.powi(-(m as i32) - 1))] {
                let q = QpeaParams::new(m, theta, delta, 0).unwrap();
                let brute = brute_force_prob(m, theta, delta);
                assert!((success_prob_product(&q) - brute).abs() < 1e-12);
                assert!((success_prob_sum(&q).unwrap() - brute).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn circuit_matches_product_up_to_eight_qubits() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for m in 1..=8u32 {
        for _ in 0..5 {
            let theta = rng.gen_range(0.0..PI);
            let bound = 2f64.powi(-(m as i32) - 1);
            let delta = rng.gen_range(0.0..bound);
            let a = rng.gen_range(0..1u64 << m);
            let q = QpeaParams::new(m, theta, delta, a).unwrap();
            let circuit = circuit_oracle(m, theta, q.phi(), a).unwrap();
            assert!((circuit - success_prob_product(&q)).abs() < 1e-10);
        }
    }
}

#[test]
fn derivative_argmax_sits_at_closed_form_inflection() {
    // at delta = 0, p = ((1 + sin)/2)^m and p' peaks where sin(theta) = (m - 1)/m
    for m in [3u32, 5, 10, 25] {
        let expected = ((m as f64 - 1.0) / m as f64).asin();
        let found = derivative_argmax(m, 0.0).unwrap();
        assert!((found - expected).abs() < 1e-5, "m={m}: {found} vs {expected}");
    }
}

#[test]
fn derivative_peak_is_where_curvature_changes_sign() {
    let m = 10;
    let delta = default_delta(m).unwrap();
    let peak = derivative_argmax(m, delta).unwrap();
    let cell = PI / (THETA_GRID_POINTS as f64 - 1.0);
    let p = |t: f64| success_prob_product(&QpeaParams::new(m, t, delta, 0).unwrap());
    let second = |t: f64| (p(t + cell) - 2.0 * p(t) + p(t - cell)) / (cell * cell);
    assert!(second(peak - cell) > 0.0);
    assert!(second(peak + cell) < 0.0);
}
