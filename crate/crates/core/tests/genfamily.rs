use std::sync::Arc;

use nrt_core::genfamily::{
    general_plane_wave, generalized_residual, linear_pair, nrt_pair, pair_from_g, plane_wave_residual,
    sinh_pair, uniqueness_residual, verify_pair_relation, GeneratorG,
};
use nrt_core::solutions::{ModelParams, SolutionFamily};
use nrt_core::NrtError;
use num_complex::Complex64;

fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|j| lo + (hi - lo) * j as f64 / (n - 1) as f64).collect()
}

#[test]
fn builtin_pairs_satisfy_relation() {
    assert!(verify_pair_relation(&nrt_pair(1.5).unwrap(), &grid(-0.4, 0.4, 41)).unwrap() < 1e-6);
    assert!(verify_pair_relation(&sinh_pair().unwrap(), &grid(-2.0, 2.0, 81)).unwrap() < 1e-6);
    assert!(verify_pair_relation(&linear_pair().unwrap(), &grid(-1.0, 1.0, 21)).unwrap() < 1e-6);
    for q in [0.5, 1.0, 2.0, 3.0, 4.5] {
        assert!(nrt_pair(q).is_ok(), "q = {q}");
    }
}

#[test]
fn corrupted_pair_is_caught() {
    let bad = sinh_pair().unwrap().with_scaled_l(1.01);
    assert!(verify_pair_relation(&bad, &grid(-2.0, 2.0, 81)).unwrap() > 1e-3);
}

#[test]
fn pair_from_quadratic_generator_is_linear() {
    let gen = GeneratorG {
        g: Arc::new(|u| 0.5 * u * u),
        g_prime: Arc::new(|u| u),
        g_second: None,
        g_prime_inverse: None,
        interval: (-3.0, 3.0),
    };
    let pair = pair_from_g(gen, &grid(-1.0, 1.0, 21)).unwrap();
    for u in [-0.8, 0.1, 0.9] {
        let z = Complex64::new(u, 0.0);
        assert!((pair.f(z).unwrap() - z).norm() < 1e-15);
        assert!((pair.l(z).unwrap() - 0.5 * z * z).norm() < 1e-14);
    }
    assert!(pair.f(Complex64::new(0.0, 1.0)).is_err());
}

#[test]
fn pair_from_q_generator_matches_nrt() {
    let q = 1.5;
    let gen = GeneratorG {
        g: Arc::new(move |u| (1.0 + (1.0 - q) * u).powf((2.0 - q) / (1.0 - q)) / (2.0 - q)),
        g_prime: Arc::new(move |u| (1.0 + (1.0 - q) * u).powf(1.0 / (1.0 - q))),
        g_second: None,
        g_prime_inverse: None,
        interval: (-1.0, 1.0),
    };
    let pair = pair_from_g(gen, &grid(-0.4, 0.4, 17)).unwrap();
    let nrt = nrt_pair(q).unwrap();
    for u in [-0.3, 0.0, 0.35] {
        let z = Complex64::new(u, 0.0);
        assert!((pair.f(z).unwrap() - nrt.f(z).unwrap()).norm() < 1e-14);
        // L(v) = v^{1/2}/(1/2)
        let v = pair.f(z).unwrap();
        assert!((pair.l(v).unwrap() - 2.0 * v.sqrt()).norm() < 1e-12);
    }
}

#[test]
fn pair_from_cosh_generator_is_sinh() {
    let gen = GeneratorG {
        g: Arc::new(f64::cosh),
        g_prime: Arc::new(f64::sinh),
        g_second: Some(Arc::new(f64::cosh)),
        g_prime_inverse: Some(Arc::new(f64::asinh)),
        interval: (-3.0, 3.0),
    };
    let pair = pair_from_g(gen, &grid(-2.0, 2.0, 41)).unwrap();
    for v in [-1.5, 0.2, 3.0] {
        let got = pair.l(Complex64::new(v, 0.0)).unwrap().re;
        assert!((got - (1.0 + v * v).sqrt()).abs() < 1e-12);
    }
}

#[test]
fn non_monotone_generator_is_rejected() {
    let gen = GeneratorG {
        g: Arc::new(|u: f64| u.powi(3) / 3.0),
        g_prime: Arc::new(|u| u * u),
        g_second: None,
        g_prime_inverse: None,
        interval: (-1.0, 1.0),
    };
    assert!(matches!(pair_from_g(gen, &grid(-0.5, 0.5, 11)), Err(NrtError::NonInvertible(_))));
}

#[test]
fn nrt_plane_wave_matches_ansatz_path() {
    let p = ModelParams::with_q(2.0);
    let pair = nrt_pair(2.0).unwrap();
    let fam = SolutionFamily::plane_wave(1.3, &p);
    for &(x, t) in &[(0.0, 0.0), (0.4, 1.2), (-3.0, 0.7), (5.5, 2.0)] {
        let a = general_plane_wave(&pair, 1.3, &p, t, x).unwrap();
        let b = fam.psi(x, t, &p).unwrap();
        assert!((a - b).norm() < 1e-12);
    }
}

#[test]
fn sinh_plane_wave_origin_and_residual() {
    let p = ModelParams::default();
    let pair = sinh_pair().unwrap();
    assert_eq!(general_plane_wave(&pair, 1.0, &p, 0.0, 0.0).unwrap(), Complex64::new(0.0, 0.0));
    let w = 0.5;
    let mut checked = 0;
    for j in 0..40 {
        let x = -3.0 + 0.15 * j as f64;
        let t = 0.05 * j as f64;
        // √(1 + F²) = |cos θ| on the imaginary line; stay where cos θ > 0
        if (x - w * t).cos() < 0.2 {
            continue;
        }
        checked += 1;
        assert!(plane_wave_residual(&pair, 1.0, &p, x, t).unwrap() < 1e-6);
        assert!(generalized_residual(&pair, 1.0, 1.01 * w, &p, x, t).unwrap() > 1e-3);
    }
    assert!(checked > 10);
}

#[test]
fn shape_invariance() {
    let p = ModelParams::with_q(1.5);
    let k = 0.8;
    let v = p.hbar * k / (2.0 * p.m);
    for pair in [nrt_pair(1.5).unwrap(), sinh_pair().unwrap()] {
        for &(x, t, d) in &[(0.3, 0.1, 0.7), (-1.2, 0.4, 2.5)] {
            let a = general_plane_wave(&pair, k, &p, t, x).unwrap();
            let b = general_plane_wave(&pair, k, &p, t + d, x + v * d).unwrap();
            assert!((a - b).norm() < 1e-10);
        }
    }
}

#[test]
fn uniqueness_probe_separates_pairs() {
    let nrt = uniqueness_residual(&nrt_pair(1.5).unwrap(), &grid(-0.4, 0.4, 41)).unwrap();
    assert!(nrt.residual < 1e-8, "{nrt:?}");
    assert!((nrt.r2 + 0.5).abs() < 1e-8 && (nrt.r1 - 1.0).abs() < 1e-8);
    assert!((nrt.f0.unwrap() - 1.0).abs() < 1e-8 && nrt.f1.unwrap().abs() < 1e-8);

    let lin = uniqueness_residual(&linear_pair().unwrap(), &grid(-1.0, 1.0, 21)).unwrap();
    assert!(lin.residual < 1e-8 && (lin.r2 - 1.0).abs() < 1e-8, "{lin:?}");

    let s = uniqueness_residual(&sinh_pair().unwrap(), &grid(-2.0, 2.0, 81)).unwrap();
    assert!(s.lower_bound > 0.05, "{s:?}");
    assert!(s.residual >= s.lower_bound);
}

#[test]
fn uniqueness_needs_enough_samples() {
    assert!(uniqueness_residual(&linear_pair().unwrap(), &grid(-1.0, 1.0, 5)).is_err());
}
