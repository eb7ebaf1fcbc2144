//! Kernel engine checks against closed forms and dense-matrix references.

use std::f64::consts::{FRAC_PI_2, PI};

use qkml::qkernel::{
    gram, kernel, kernel_profile_1d, kernel_uncompute, mq_spectrum_of_system, trace_kernel,
    Profile1d,
};
use qkml::spinsim::{DataPoint, EncodingParams, SpinSystem};
use qkml_testkit as oracle;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Two-spin pure-state kernel in closed form:
/// `cos^4(d tau/2) + sin^4(d tau/2) + 2 sin^2 cos^2 cos(2 delta)`.
fn two_spin_kernel(d: f64, tau: f64, delta: f64) -> f64 {
    let (s, c) = (d * tau / 2.0).sin_cos();
    c.powi(4) + s.powi(4) + 2.0 * s * s * c * c * (2.0 * delta).cos()
}

#[test]
fn two_spin_kernel_matches_closed_form() {
    let sys = SpinSystem::from_pairs(2, &[(0, 1, 1.0)]).unwrap();
    for tau in [0.5, FRAC_PI_2] {
        let params = EncodingParams::with_dt(tau, 1e-3, 1).unwrap();
        for i in 0..21 {
            let delta = -PI + 2.0 * PI * i as f64 / 20.0;
            let k = kernel(
                &sys,
                &params,
                &DataPoint::scalar(delta),
                &DataPoint::scalar(0.0),
            )
            .unwrap();
            let expect = two_spin_kernel(1.0, tau, delta);
            assert!(
                (k - expect).abs() < 1e-12,
                "tau {tau} delta {delta}: {k} vs {expect}"
            );
        }
    }
    // Zero of the kernel at d tau = pi/2, delta = pi/2.
    let params = EncodingParams::with_dt(FRAC_PI_2, 1e-3, 1).unwrap();
    let k = kernel(
        &sys,
        &params,
        &DataPoint::scalar(FRAC_PI_2),
        &DataPoint::scalar(0.0),
    )
    .unwrap();
    assert!(k.abs() < 1e-12, "expected kernel zero, got {k}");
}

#[test]
fn kernel_matches_dense_reference_at_small_n() {
    // From-scratch dense computation: build U(x) by exponentiating H(x).
    let sys = SpinSystem::draw(4, 29).unwrap();
    let tau = 0.3;
    let params = EncodingParams::with_dt(tau, 5e-4, 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..6 {
        let xi: f64 = rng.random_range(-1.5..1.5);
        let xj: f64 = rng.random_range(-1.5..1.5);
        let fast = kernel(
            &sys,
            &params,
            &DataPoint::scalar(xi),
            &DataPoint::scalar(xj),
        )
        .unwrap();
        let dense = oracle::dense_kernel(&sys, tau, &[xi], &[xj]);
        assert!(
            (fast - dense).abs() < 2e-4,
            "Trotterized {fast} vs dense {dense}"
        );
    }
}

#[test]
fn uncompute_and_inner_product_agree_2d() {
    let sys = SpinSystem::draw(4, 55).unwrap();
    let params = EncodingParams::with_dt(0.2, 2e-3, 2).unwrap();
    let xi = DataPoint::new(vec![0.3, -0.8]);
    let xj = DataPoint::new(vec![-1.0, 0.25]);
    let a = kernel(&sys, &params, &xi, &xj).unwrap();
    let b = kernel_uncompute(&sys, &params, &xi, &xj).unwrap();
    assert!((a - b).abs() < 1e-10);
}

#[test]
fn trace_kernel_two_spin_matches_dense_operator_algebra() {
    // d tau = pi/2 and delta = pi/2 drives the trace kernel to its minimum.
    let d = 1.0;
    let tau = FRAC_PI_2;
    let sys = SpinSystem::from_pairs(2, &[(0, 1, d)]).unwrap();
    let params = EncodingParams::with_dt(tau, 1e-3, 1).unwrap();

    for (xi, xj) in [(FRAC_PI_2, 0.0), (0.3, -0.2), (1.2, 0.9)] {
        let sim = trace_kernel(
            &sys,
            &params,
            &DataPoint::scalar(xi),
            &DataPoint::scalar(xj),
        )
        .unwrap();
        let dense = oracle::dense_trace_kernel(&sys, tau, &[xi], &[xj]);
        assert!(
            (sim - dense).abs() < 1e-10,
            "simulated {sim} vs dense {dense}"
        );
        // The dense value itself obeys the closed form
        // cos^2(d tau) + sin^2(d tau) cos(2 delta).
        let delta = xi - xj;
        let closed = (d * tau).cos().powi(2) + (d * tau).sin().powi(2) * (2.0 * delta).cos();
        assert!((dense - closed).abs() < 1e-12);
    }
    // The minimum itself: -1 at delta = pi/2.
    let sim = trace_kernel(
        &sys,
        &params,
        &DataPoint::scalar(FRAC_PI_2),
        &DataPoint::scalar(0.0),
    )
    .unwrap();
    assert!((sim + 1.0).abs() < 1e-10);
}

#[test]
fn trace_kernel_matches_dense_at_n3() {
    let sys = SpinSystem::draw(3, 83).unwrap();
    let tau = 0.4;
    let params = EncodingParams::with_dt(tau, 5e-4, 1).unwrap();
    for (xi, xj) in [(0.0, 0.9), (-0.5, 0.5)] {
        let sim = trace_kernel(
            &sys,
            &params,
            &DataPoint::scalar(xi),
            &DataPoint::scalar(xj),
        )
        .unwrap();
        let dense = oracle::dense_trace_kernel(&sys, tau, &[xi], &[xj]);
        assert!((sim - dense).abs() < 2e-4, "{sim} vs {dense}");
    }
}

#[test]
fn profile_reproduces_two_spin_closed_form() {
    let d = 0.7;
    let tau = 1.1;
    let sys = SpinSystem::from_pairs(2, &[(0, 1, d)]).unwrap();
    let params = EncodingParams::new(tau, 50, 1).unwrap();
    let deltas: Vec<f64> = (0..=180)
        .map(|i| -FRAC_PI_2 + PI * i as f64 / 180.0)
        .collect();
    let profile = kernel_profile_1d(&sys, &params, &deltas).unwrap();
    for &(delta, k) in &profile {
        let expect = two_spin_kernel(d, tau, delta);
        assert!((k - expect).abs() < 1e-12, "delta {delta}");
    }
}

#[test]
fn mq_spectrum_two_spin_orders() {
    // Only orders 0 and +-2 populated; their weights follow the closed form.
    let d = 0.9;
    let tau = 0.8;
    let sys = SpinSystem::from_pairs(2, &[(0, 1, d)]).unwrap();
    let params = EncodingParams::new(tau, 64, 1).unwrap();
    let spec = mq_spectrum_of_system(&sys, &params, 256).unwrap();
    let (s, c) = (d * tau / 2.0).sin_cos();
    let i0 = c.powi(4) + s.powi(4);
    let i2 = s * s * c * c;
    assert!((spec.intensity(0).unwrap() - i0).abs() < 1e-12);
    assert!((spec.intensity(2).unwrap() - i2).abs() < 1e-12);
    assert!((spec.intensity(-2).unwrap() - i2).abs() < 1e-12);
    for m in [-1i64, 1] {
        assert!(spec.intensity(m).unwrap().abs() < 1e-12);
    }
    assert!((spec.total() - 1.0).abs() < 1e-10);
}

#[test]
fn mq_spectrum_n4_structure() {
    // Double-quantum dynamics populates even coherence orders only.
    let sys = SpinSystem::draw(4, 12).unwrap();
    for tau in [0.5, 1.0] {
        let params = EncodingParams::with_dt(tau, 1e-3, 1).unwrap();
        let spec = mq_spectrum_of_system(&sys, &params, 256).unwrap();
        for (m, i) in spec.orders.iter().zip(&spec.intensities) {
            assert!(*i >= -1e-9, "order {m} intensity {i}");
            if m.rem_euclid(2) == 1 {
                assert!(i.abs() < 1e-9, "odd order {m} populated: {i}");
            }
            let sym = spec.intensity(-m).unwrap();
            assert!((i - sym).abs() < 1e-9);
        }
        assert!((spec.total() - 1.0).abs() < 1e-8);
        assert!(spec.max_imag_residue < 1e-9);
    }
}

#[test]
fn mq_max_populated_order_grows_with_tau() {
    // Longer evolution spreads weight to higher coherence orders.
    let sys = SpinSystem::draw(4, 42).unwrap();
    let threshold = 1e-3;
    let mut max_orders = Vec::new();
    for tau in [0.25, 0.5, 1.0] {
        let params = EncodingParams::with_dt(tau, 1e-3, 1).unwrap();
        let spec = mq_spectrum_of_system(&sys, &params, 256).unwrap();
        let max_order = spec
            .orders
            .iter()
            .zip(&spec.intensities)
            .filter(|(_, i)| **i > threshold)
            .map(|(m, _)| m.unsigned_abs())
            .max()
            .unwrap_or(0);
        max_orders.push(max_order);
    }
    for w in max_orders.windows(2) {
        assert!(w[1] >= w[0], "populated order shrank: {max_orders:?}");
    }
    assert!(
        max_orders.last().unwrap() > max_orders.first().unwrap(),
        "no growth across the tau sweep: {max_orders:?}"
    );
}

#[test]
fn kernel_shift_invariance_1d() {
    let sys = SpinSystem::draw(4, 90).unwrap();
    let params = EncodingParams::with_dt(0.25, 2e-3, 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..5 {
        let x: f64 = rng.random_range(-1.0..1.0);
        let y: f64 = rng.random_range(-1.0..1.0);
        let c: f64 = rng.random_range(-2.0..2.0);
        let base = kernel(&sys, &params, &DataPoint::scalar(x), &DataPoint::scalar(y)).unwrap();
        let shifted = kernel(
            &sys,
            &params,
            &DataPoint::scalar(x + c),
            &DataPoint::scalar(y + c),
        )
        .unwrap();
        assert!((base - shifted).abs() < 1e-10);
    }
}

#[test]
fn kernel_translation_invariance_2d() {
    let sys = SpinSystem::draw(4, 91).unwrap();
    let params = EncodingParams::with_dt(0.2, 2e-3, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..4 {
        let a = DataPoint::new(vec![rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)]);
        let b = DataPoint::new(vec![rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)]);
        let c: f64 = rng.random_range(-1.5..1.5);
        let base = kernel(&sys, &params, &a, &b).unwrap();
        let shifted = kernel(
            &sys,
            &params,
            &a.map(|v| v - c),
            &b.map(|v| v - c),
        )
        .unwrap();
        assert!((base - shifted).abs() < 1e-10);
    }
}

#[test]
fn gram_is_positive_semidefinite() {
    let sys = SpinSystem::draw(5, 44).unwrap();
    let params = EncodingParams::with_dt(0.15, 2e-3, 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let points: Vec<DataPoint> = (0..20)
        .map(|_| DataPoint::scalar(rng.random_range(-1.5..1.5)))
        .collect();
    let g = gram(&sys, &params, &points).unwrap();
    assert!(g.min_eigenvalue() >= -1e-8);
}

#[test]
fn profile_sharpens_with_evolution_time() {
    // Smoke-scale version of the width trend; the acceptance suite runs the
    // full-size instance.
    let sys = SpinSystem::draw(8, 42).unwrap();
    let deltas: Vec<f64> = (0..=180)
        .map(|i| -FRAC_PI_2 + PI * i as f64 / 180.0)
        .collect();
    let mut widths = Vec::new();
    for k in 1..=4 {
        let tau = 0.03 * k as f64;
        let params = EncodingParams::with_dt(tau, 1e-3, 1).unwrap();
        let profile = kernel_profile_1d(&sys, &params, &deltas).unwrap();
        widths.push(qkml::qkernel::fwhm(&profile));
    }
    for w in widths.windows(2) {
        assert!(w[1] <= w[0] + 1e-12, "widths not nonincreasing: {widths:?}");
    }
}

#[test]
fn profile_weights_expose_even_sectors_only() {
    let sys = SpinSystem::draw(5, 2).unwrap();
    let params = EncodingParams::with_dt(0.4, 1e-3, 1).unwrap();
    let profile = Profile1d::build(&sys, &params).unwrap();
    for (j, w) in profile.weights().iter().enumerate() {
        if j % 2 == 1 {
            assert!(w.abs() < 1e-20, "odd excitation sector {j} populated");
        }
    }
    assert!((profile.weights().iter().sum::<f64>() - 1.0).abs() < 1e-12);
}
