use nrt_core::dynamics::{
    coeff_rhs, evolve_pde, family_residual_fd, harmonic_delta_check, integrate_coeffs, integrate_coeffs_with,
    nrt_residual, nrt_residual_fd, relative_l2, Boundary, FieldState, OdeOptions, PdeOptions,
};
use nrt_core::solutions::{
    gaussian_limit_psi, harmonic_a_c, harmonic_singular_time, CoefficientState, ModelParams, PacketConstants,
    Potential, SolutionFamily,
};
use nrt_core::{qcalc, NrtError};
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn state(t: f64, a: Complex64, b: Complex64, cc: Complex64) -> CoefficientState {
    CoefficientState { t, a, b, c: cc }
}

fn fig1() -> SolutionFamily {
    SolutionFamily::FreeQGaussian {
        constants: PacketConstants { alpha: c(1.0, 0.0), beta: c(1.0, 0.0), gamma: c(1.0, 0.0) },
    }
}

fn max_coeff_gap(family: &SolutionFamily, params: &ModelParams, t_end: f64) -> f64 {
    let init = family.coefficients(0.0, params).unwrap().unwrap();
    let pot = family.potential(params);
    let tr = integrate_coeffs(&init, t_end, params, pot, 1e-10).unwrap();
    assert!(tr.max_local_error <= 1e-10);
    tr.samples
        .iter()
        .map(|s| {
            let e = family.coefficients(s.t, params).unwrap().unwrap();
            (s.a - e.a).norm().max((s.b - e.b).norm()).max((s.c - e.c).norm())
        })
        .fold(0.0, f64::max)
}

#[test]
fn rhs_trivial_fixed_point_and_phase_flow() {
    let p = ModelParams::with_q(1.6);
    let z = c(0.0, 0.0);
    assert_eq!(coeff_rhs(&state(0.0, z, z, z), &p, Potential::Free), (z, z, z));
    let k = 1.3;
    let (_, _, dc) = coeff_rhs(&state(0.0, z, c(0.0, -k), z), &p, Potential::Free);
    assert!((dc - c(0.0, k * k / 2.0)).norm() < 1e-15);
}

#[test]
fn rhs_vanishes_at_harmonic_fixed_point() {
    let p = ModelParams::with_q(2.0).with_spring(1.0);
    let a_c = harmonic_a_c(&p).unwrap();
    let (da, _, _) =
        coeff_rhs(&state(0.0, c(a_c, 0.0), c(0.0, 0.0), c(0.0, 0.0)), &p, Potential::Harmonic { k: 1.0 });
    assert!(da.norm() < 1e-15);
}

#[test]
fn free_endpoint_matches_closed_form() {
    let p = ModelParams::with_q(2.0);
    let one = c(1.0, 0.0);
    let family = SolutionFamily::free_from_initial(one, one, one, &p).unwrap();
    let init = state(0.0, one, one, one);
    let tr = integrate_coeffs(&init, 2.0, &p, Potential::Free, 1e-10).unwrap();
    let end = tr.last();
    let exact = family.coefficients(2.0, &p).unwrap().unwrap();
    assert!((end.a - exact.a).norm() < 1e-8);
    assert!((end.b - exact.b).norm() < 1e-8);
    assert!((end.c - exact.c).norm() < 1e-8);
}

#[test]
fn every_coefficient_family_matches_its_ode() {
    let cases: Vec<(SolutionFamily, ModelParams, f64)> = vec![
        (fig1(), ModelParams::with_q(2.0), 2.0),
        (
            SolutionFamily::free_from_initial(
                c(0.8, -0.3),
                c(0.2, 0.5),
                c(-0.1, 0.3),
                &ModelParams::with_q(1.4),
            )
            .unwrap(),
            ModelParams::with_q(1.4),
            2.0,
        ),
        (
            SolutionFamily::free_from_initial(
                c(1.0, 0.4),
                c(-0.6, 0.0),
                c(0.2, 0.0),
                &ModelParams::with_q(0.6),
            )
            .unwrap(),
            ModelParams::with_q(0.6),
            2.0,
        ),
        (SolutionFamily::plane_wave(1.0, &ModelParams::with_q(1.5)), ModelParams::with_q(1.5), 2.0),
        (
            SolutionFamily::ZeroCurvature { b_c: c(0.7, 0.2), c_0: c(0.1, -0.4) },
            ModelParams::with_q(2.5),
            2.0,
        ),
        (SolutionFamily::SingularPacket { b_c: 1.0, t0: 1.0 }, ModelParams::with_q(2.0), 2.0),
        (
            SolutionFamily::PulsatingQ3 { a_c: c(1.0, 0.0), b_c: c(0.5, 0.1), c_1: c(0.3, 0.2) },
            ModelParams::with_q(3.0),
            2.0,
        ),
        (
            SolutionFamily::harmonic(&ModelParams::with_q(2.0).with_spring(1.0)).unwrap(),
            ModelParams::with_q(2.0).with_spring(1.0),
            2.0,
        ),
    ];
    for (family, p, t_end) in cases {
        let gap = max_coeff_gap(&family, &p, t_end);
        assert!(gap < 1e-8, "{}: {gap:e}", family.name());
    }
}

#[test]
fn harmonic_fixed_point_is_held_over_a_period() {
    let p = ModelParams::with_q(2.0).with_spring(1.0);
    let a_c = harmonic_a_c(&p).unwrap();
    let period = 2.0 * harmonic_singular_time(&p).unwrap();
    let init = state(0.0, c(a_c, 0.0), c(0.0, 0.0), c(0.0, 0.0));
    let tr = integrate_coeffs(&init, period, &p, Potential::Harmonic { k: 1.0 }, 1e-10).unwrap();
    let drift = tr.samples.iter().map(|s| (s.a - a_c).norm()).fold(0.0, f64::max);
    assert!(drift < 1e-9, "{drift:e}");
}

#[test]
fn stiffness_reported_at_the_pole() {
    // a0 = i gives α = −i, so α + i(3−q)ħt/m vanishes at t = 1 for q = 2
    let p = ModelParams::with_q(2.0);
    let init = state(0.0, c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0));
    match integrate_coeffs(&init, 2.0, &p, Potential::Free, 1e-10) {
        Err(NrtError::Stiffness { t, .. }) => assert!((t - 1.0).abs() < 1e-3, "t = {t}"),
        other => panic!("expected stiffness, got {other:?}"),
    }
}

#[test]
fn negative_real_a0_integrates_smoothly() {
    let p = ModelParams::with_q(2.0);
    let init = state(0.0, c(-1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0));
    let family = SolutionFamily::free_from_initial(init.a, init.b, init.c, &p).unwrap();
    let tr = integrate_coeffs(&init, 2.0, &p, Potential::Free, 1e-10).unwrap();
    let exact = family.coefficients(2.0, &p).unwrap().unwrap();
    assert!((tr.last().a - exact.a).norm() < 1e-8);
    assert!((tr.last().c - exact.c).norm() < 1e-8);
}

#[test]
fn integrator_is_deterministic() {
    let p = ModelParams::with_q(1.7);
    let init = state(0.0, c(0.5, 0.5), c(0.1, 0.0), c(0.0, 0.0));
    let a = integrate_coeffs(&init, 1.5, &p, Potential::Free, 1e-9).unwrap();
    let b = integrate_coeffs(&init, 1.5, &p, Potential::Free, 1e-9).unwrap();
    assert_eq!(a, b);
}

#[test]
fn max_step_is_respected() {
    let p = ModelParams::with_q(1.7);
    let init = state(0.0, c(0.5, 0.5), c(0.1, 0.0), c(0.0, 0.0));
    let opts = OdeOptions { max_step: 0.01, ..OdeOptions::with_tol(1e-8) };
    let tr = integrate_coeffs_with(&init, 1.0, &p, Potential::Free, &opts).unwrap();
    assert!(tr.samples.windows(2).all(|w| w[1].t - w[0].t <= 0.01 + 1e-15));
}

fn harmonic_trajectory(
    a0: Complex64,
    t_end: f64,
) -> (ModelParams, nrt_core::dynamics::CoefficientTrajectory) {
    let p = ModelParams::with_q(2.0).with_spring(1.0);
    let init = state(0.0, a0, c(0.0, 0.0), c(0.0, 0.0));
    let tr = integrate_coeffs(&init, t_end, &p, Potential::Harmonic { k: 1.0 }, 1e-12).unwrap();
    (p, tr)
}

#[test]
fn harmonic_delta_is_constant() {
    let a_c = harmonic_a_c(&ModelParams::with_q(2.0).with_spring(1.0)).unwrap();
    // several pulsations, so the logarithm winds past the principal range
    let (p, tr) = harmonic_trajectory(c(0.5 * a_c, 0.0), 20.0);
    let (_, dev) = harmonic_delta_check(&tr, &p).unwrap();
    assert!(dev < 1e-6, "{dev:e}");
}

#[test]
fn harmonic_delta_rejects_fixed_point() {
    let a_c = harmonic_a_c(&ModelParams::with_q(2.0).with_spring(1.0)).unwrap();
    let (p, tr) = harmonic_trajectory(c(a_c, 0.0), 1.0);
    assert!(matches!(harmonic_delta_check(&tr, &p), Err(NrtError::DegenerateInput(_))));
}

#[test]
fn harmonic_delta_detects_corruption() {
    let a_c = harmonic_a_c(&ModelParams::with_q(2.0).with_spring(1.0)).unwrap();
    let (p, mut tr) = harmonic_trajectory(c(0.5 * a_c, 0.0), 5.0);
    let mut rng = StdRng::seed_from_u64(7);
    for s in tr.samples.iter_mut().skip(1) {
        s.a += c(rng.gen_range(-1e-3..1e-3), rng.gen_range(-1e-3..1e-3));
    }
    let (_, dev) = harmonic_delta_check(&tr, &p).unwrap();
    assert!(dev > 1e-3, "{dev:e}");
}

#[test]
fn residual_fig1_random_points() {
    let p = ModelParams::with_q(2.0);
    let mut rng = StdRng::seed_from_u64(1);
    for _ in 0..25 {
        let x = rng.gen_range(-5.0..5.0);
        let t = rng.gen_range(0.0..2.0);
        let r = nrt_residual(&fig1(), &p, Potential::Free, x, t).unwrap();
        assert!(r < 1e-8, "x={x} t={t} r={r:e}");
    }
}

#[test]
fn residual_plane_wave() {
    let p = ModelParams::with_q(1.5);
    let f = SolutionFamily::plane_wave(1.0, &p);
    for &(x, t) in &[(0.0, 0.0), (0.7, 0.3), (-2.0, 1.5), (3.1, 0.9)] {
        assert!(nrt_residual(&f, &p, Potential::Free, x, t).unwrap() < 1e-8);
    }
}

fn all_families() -> Vec<(SolutionFamily, ModelParams)> {
    vec![
        (fig1(), ModelParams::with_q(2.0)),
        (
            SolutionFamily::free_from_initial(
                c(0.8, -0.3),
                c(0.2, 0.5),
                c(-0.1, 0.3),
                &ModelParams::with_q(1.4),
            )
            .unwrap(),
            ModelParams::with_q(1.4),
        ),
        (SolutionFamily::plane_wave(1.0, &ModelParams::with_q(1.5)), ModelParams::with_q(1.5)),
        (SolutionFamily::ZeroCurvature { b_c: c(0.7, 0.2), c_0: c(0.1, -0.4) }, ModelParams::with_q(2.5)),
        (SolutionFamily::SingularPacket { b_c: 1.0, t0: 1.0 }, ModelParams::with_q(2.0)),
        (
            SolutionFamily::PulsatingQ3 { a_c: c(1.0, 0.0), b_c: c(0.5, 0.1), c_1: c(0.3, 0.2) },
            ModelParams::with_q(3.0),
        ),
        (SolutionFamily::Frozen { b: 1.0, c: 1.0 }, ModelParams::with_q(1.5)),
        (SolutionFamily::Frozen { b: 0.5, c: -2.0 }, ModelParams::with_q(3.5)),
        (
            SolutionFamily::harmonic(&ModelParams::with_q(2.0).with_spring(1.0)).unwrap(),
            ModelParams::with_q(2.0).with_spring(1.0),
        ),
        (
            SolutionFamily::harmonic(&ModelParams::with_q(1.5).with_spring(2.0)).unwrap(),
            ModelParams::with_q(1.5).with_spring(2.0),
        ),
        (SolutionFamily::GaussianLimit { k0: 1.0, alpha: 1.0 }, ModelParams::with_q(1.0)),
    ]
}

#[test]
fn residual_certificates_for_every_family() {
    let points = [(-1.5, 0.2), (-0.3, 0.7), (0.0, 0.05), (0.6, 1.1), (2.2, 0.4)];
    for (family, p) in all_families() {
        let pot = family.potential(&p);
        for &(x, t) in &points {
            let exact = nrt_residual(&family, &p, pot, x, t).unwrap();
            let fd = family_residual_fd(&family, &p, pot, x, t).unwrap();
            assert!(exact < 1e-8, "{} analytic at ({x},{t}): {exact:e}", family.name());
            assert!(fd < 1e-4, "{} fd at ({x},{t}): {fd:e}", family.name());
        }
    }
}

#[test]
fn residual_catches_wrong_frozen_exponent() {
    let p = ModelParams::with_q(1.5);
    let q = p.q;
    let wrong = |x: f64, _t: f64| Ok(qcalc::principal_ln(c(x, 1.0))? / (1.0 - q));
    let r = nrt_residual_fd(wrong, q, &p, Potential::Free, 0.3, 0.0).unwrap();
    assert!(r > 1e-2, "{r:e}");
}

fn fig1_field(t: f64, h: f64) -> FieldState {
    let p = ModelParams::with_q(2.0);
    let n = (30.0 / h).round() as usize + 1;
    FieldState::from_fn(-15.0, 15.0, n, t, |x| fig1().psi(x, t, &p)).unwrap()
}

fn gaussian_field(k0: f64, t: f64, h: f64) -> FieldState {
    let p = ModelParams::with_q(1.0);
    let n = (30.0 / h).round() as usize + 1;
    FieldState::from_fn(-15.0, 15.0, n, t, |x| gaussian_limit_psi(k0, 1.0, t, x, &p)).unwrap()
}

#[test]
fn pde_linear_limit_matches_gaussian() {
    let p = ModelParams::with_q(1.0);
    let init = gaussian_field(0.5, 0.0, 0.05);
    let out = evolve_pde(&init, &p, Potential::Free, 0.1, &PdeOptions::default()).unwrap();
    let err = relative_l2(&out.psi, &gaussian_field(0.5, 0.1, 0.05).psi);
    assert!(err < 1e-6, "{err:e}");
}

#[test]
fn pde_spatial_order_is_four() {
    let p = ModelParams::with_q(1.0);
    let opts = PdeOptions { dt: Some(1e-4), ..PdeOptions::default() };
    let errs: Vec<f64> = [0.2, 0.1, 0.05]
        .iter()
        .map(|&h| {
            let out = evolve_pde(&gaussian_field(1.0, 0.0, h), &p, Potential::Free, 0.1, &opts).unwrap();
            relative_l2(&out.psi, &gaussian_field(1.0, 0.1, h).psi)
        })
        .collect();
    // least-squares slope of log err against log h over the three points
    let xs: Vec<f64> = [0.2f64, 0.1, 0.05].iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / 3.0, ys.iter().sum::<f64>() / 3.0);
    let slope = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    assert!((slope - 4.0).abs() < 0.3, "slope {slope}, errors {errs:?}");
}

#[test]
fn pde_nonlinear_short_horizon() {
    let p = ModelParams::with_q(2.0);
    let opts = PdeOptions { boundary: Boundary::OneSided, ..PdeOptions::default() };
    let out = evolve_pde(&fig1_field(0.0, 0.05), &p, Potential::Free, 0.1, &opts).unwrap();
    let err = relative_l2(&out.psi, &fig1_field(0.1, 0.05).psi);
    assert!(err < 1e-3, "{err:e}");
}

#[test]
fn pde_pinned_requires_decayed_edges() {
    let p = ModelParams::with_q(2.0);
    let r = evolve_pde(&fig1_field(0.0, 0.1), &p, Potential::Free, 0.01, &PdeOptions::default());
    assert!(matches!(r, Err(NrtError::Domain(_))));
}

#[test]
fn pde_rejects_oversized_step() {
    let p = ModelParams::with_q(1.0);
    let opts = PdeOptions { dt: Some(1.0), ..PdeOptions::default() };
    let r = evolve_pde(&gaussian_field(0.5, 0.0, 0.1), &p, Potential::Free, 0.1, &opts);
    assert!(matches!(r, Err(NrtError::Stability { .. })));
}

#[test]
fn pde_zero_field_is_fixed() {
    for q in [1.0, 1.5] {
        let p = ModelParams::with_q(q);
        let init = FieldState::from_fn(-5.0, 5.0, 101, 0.0, |_| Ok(c(0.0, 0.0))).unwrap();
        let out = evolve_pde(&init, &p, Potential::Free, 0.05, &PdeOptions::default()).unwrap();
        assert!(out.psi.iter().all(|z| z.norm() == 0.0));
        assert_eq!(out.t, 0.05);
    }
}

#[test]
fn pde_harmonic_quasi_stationary_short_horizon() {
    let p = ModelParams::with_q(1.5).with_spring(1.0);
    let family = SolutionFamily::harmonic(&p).unwrap();
    let field = |t: f64| FieldState::from_fn(-15.0, 15.0, 601, t, |x| family.psi(x, t, &p)).unwrap();
    let opts = PdeOptions { boundary: Boundary::OneSided, ..PdeOptions::default() };
    let out = evolve_pde(&field(0.0), &p, Potential::Harmonic { k: 1.0 }, 0.05, &opts).unwrap();
    let err = relative_l2(&out.psi, &field(0.05).psi);
    assert!(err < 1e-3, "{err:e}");
}
