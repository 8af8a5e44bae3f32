use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use tmsort::fieldgrid::*;
use tmsort::hgmodes::{lct_image, HGMode};
use tmsort::raymatrix::{compose, frft_matrix, lens, prop, type1_decomposition, TemporalRayMatrix};
use tmsort::Error;

const TAU: f64 = 1.0;

fn mode_grid(n_max: usize) -> TimeGrid {
    TimeGrid::for_modes(TAU, n_max, 4096).unwrap()
}

fn gaussian(grid: TimeGrid, dt0: f64) -> SampledEnvelope {
    SampledEnvelope::from_fn(grid, |t| Complex64::new((-t * t / (4.0 * dt0 * dt0)).exp(), 0.0))
}

fn random_matrix(rng: &mut ChaCha8Rng) -> TemporalRayMatrix {
    let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
    let b = sign * rng.random_range(0.5..2.0) * TAU * TAU;
    let a = rng.random_range(-2.0..2.0);
    let d = rng.random_range(-2.0..2.0);
    TemporalRayMatrix::new(a, b, (a * d - 1.0) / b, d).unwrap()
}

#[test]
fn dispersion_identity_width_and_norm() {
    let grid = TimeGrid::centered_span(4096, 200.0, 1.0).unwrap();
    let dt0 = 1.3;
    let g = gaussian(grid, dt0);
    assert_eq!(disperse(&g, 0.0), g);
    let d = 7.5;
    let out = disperse(&g, d);
    let expected = (dt0 * dt0 + d * d / (4.0 * dt0 * dt0)).sqrt();
    assert!((out.intensity_std() / expected - 1.0).abs() < 1e-10);
    assert!((out.norm_sq() / g.norm_sq() - 1.0).abs() < 1e-12);
}

#[test]
fn lens_preserves_modulus_and_follows_bandwidth_law() {
    let grid = TimeGrid::centered_span(8192, 300.0, 1.0).unwrap();
    let dt0 = 1.0;
    let g = gaussian(grid, dt0);
    let l = apply_lens(&g, 3.0).unwrap();
    assert!((l.norm_sq() / g.norm_sq() - 1.0).abs() < 1e-12);
    for (a, b) in g.samples.iter().zip(&l.samples) {
        assert!((a.norm() - b.norm()).abs() < 1e-15);
    }
    let (d_in, df) = (4.0, 2.5);
    let out = apply_lens(&disperse(&g, d_in), df).unwrap();
    let (big_r, r) = (d_in / df, 2.0 * dt0 * dt0 / d_in);
    let expected = (1.0 / (2.0 * dt0)) * ((1.0 - big_r).powi(2) + r * r * big_r * big_r).sqrt();
    assert!((out.spectral_std() / expected - 1.0).abs() < 1e-9);
    assert!(matches!(apply_lens(&g, 0.0), Err(Error::InvalidParameter(_))));
}

#[test]
fn lct_identity_and_dispersion_cross_check() {
    let grid = mode_grid(6);
    let psi = HGMode::centered(3, TAU).unwrap().sample(&grid);
    let same = apply_lct(&psi, &TemporalRayMatrix::identity()).unwrap();
    assert!(same.relative_l2_error(&psi).unwrap() < 1e-15);
    for d in [0.7, -1.9, 4.0] {
        let a = apply_lct(&psi, &prop(d)).unwrap();
        let b = disperse(&psi, d);
        assert!(a.relative_l2_error(&b).unwrap() < 1e-8, "D = {d}");
    }
}

#[test]
fn lct_cascadability() {
    let grid = mode_grid(6);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let psi = HGMode::centered(2, TAU).unwrap().sample(&grid);
    for _ in 0..4 {
        let (t1, t2) = (random_matrix(&mut rng), random_matrix(&mut rng));
        let t21 = compose(&t2, &t1);
        if t21.b().abs() < 0.3 {
            continue;
        }
        let s = composition_sign(&t2, &t1).unwrap();
        let once = apply_lct_with(&psi, &t21, LctMethod::ChirpZ).unwrap().scaled(Complex64::new(s, 0.0));
        let twice = apply_lct_with(&apply_lct_with(&psi, &t1, LctMethod::ChirpZ).unwrap(), &t2, LctMethod::ChirpZ).unwrap();
        assert!(twice.relative_l2_error(&once).unwrap() < 1e-6);
    }
}

#[test]
fn cascade_sign_flips_past_a_half_turn() {
    let grid = mode_grid(6);
    let psi = HGMode::centered(3, TAU).unwrap().sample(&grid);
    let t = frft_matrix(-0.75 * PI, TAU).unwrap();
    let s = composition_sign(&t, &t).unwrap();
    assert_eq!(s, -1.0);
    assert_eq!(composition_sign(&frft_matrix(-0.3, TAU).unwrap(), &frft_matrix(-0.4, TAU).unwrap()).unwrap(), 1.0);
    let twice = apply_lct(&apply_lct(&psi, &t).unwrap(), &t).unwrap();
    let once = apply_lct(&psi, &compose(&t, &t)).unwrap();
    assert!(twice.relative_l2_error(&once.scaled(Complex64::new(s, 0.0))).unwrap() < 1e-6);
    assert!(composition_sign(&t, &frft_matrix(0.75 * PI, TAU).unwrap()).is_err());
}

#[test]
fn quadrature_and_chirp_factorization_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n_points in [1024, 4096] {
        let grid = TimeGrid::for_modes(TAU, 6, n_points).unwrap();
        let psi = HGMode::centered(5, TAU).unwrap().sample(&grid);
        for _ in 0..3 {
            let t = random_matrix(&mut rng);
            let q = LctPlan::new(&grid, &t, LctMethod::Quadrature).unwrap().apply_env(&psi).unwrap();
            let c = LctPlan::new(&grid, &t, LctMethod::ChirpZ).unwrap().apply_env(&psi).unwrap();
            assert!(c.relative_l2_error(&q).unwrap() < 1e-8);
        }
    }
}

#[test]
fn lct_is_unitary_on_resolved_inputs() {
    let grid = mode_grid(6);
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for n in [0, 3, 6] {
        let psi = HGMode::centered(n, TAU).unwrap().sample(&grid);
        let t = random_matrix(&mut rng);
        let out = apply_lct(&psi, &t).unwrap();
        assert!((out.norm_sq() / psi.norm_sq() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn frft_inversion_has_unit_phase() {
    let grid = mode_grid(8);
    for n in 0..=8 {
        let psi = HGMode::centered(n, TAU).unwrap().sample(&grid);
        let out = apply_frft(&psi, -PI, TAU).unwrap();
        let reversed = SampledEnvelope::new(grid, psi.samples.iter().rev().copied().collect()).unwrap();
        assert!(out.relative_l2_error(&reversed).unwrap() < 1e-15);
        let parity = if n % 2 == 0 { 1.0 } else { -1.0 };
        assert!(out.relative_l2_error(&psi.scaled(Complex64::new(parity, 0.0))).unwrap() < 1e-12);
    }
}

#[test]
fn frft_quarter_turn_eigenvalues() {
    let grid = mode_grid(8);
    for n in 0..=8 {
        let psi = HGMode::centered(n, TAU).unwrap().sample(&grid);
        let out = fourier_z4(&psi, TAU).unwrap();
        let expected = psi.scaled(Complex64::from_polar(1.0, PI * n as f64 / 2.0));
        assert!(out.relative_l2_error(&expected).unwrap() < 1e-6, "n = {n}");
    }
}

#[test]
fn frft_semigroup() {
    let grid = mode_grid(8);
    let f = SampledEnvelope::from_fn(grid, |t| {
        Complex64::new((-(t - 0.8).powi(2)).exp(), 0.3 * t * (-t * t / 2.0).exp())
    });
    for (g1, g2) in [(-0.4, -0.9), (0.7, -2.1), (-PI / 2.0, -PI / 2.0), (1.2, 1.5)] {
        let seq = apply_frft(&apply_frft(&f, g2, TAU).unwrap(), g1, TAU).unwrap();
        let mut sum = g1 + g2;
        if sum <= -PI {
            sum += 2.0 * PI;
        } else if sum > PI {
            sum -= 2.0 * PI;
        }
        let once = apply_frft(&f, sum, TAU).unwrap();
        assert!(seq.relative_l2_error(&once).unwrap() < 1e-5, "{g1} {g2}");
    }
}

#[test]
fn gate_operators_on_modes() {
    let grid = mode_grid(8);
    for n in 0..=8 {
        let psi = HGMode::centered(n, TAU).unwrap().sample(&grid);
        let z2 = time_invert(&psi).unwrap();
        let parity = if n % 2 == 0 { 1.0 } else { -1.0 };
        assert!(z2.relative_l2_error(&psi.scaled(Complex64::new(parity, 0.0))).unwrap() < 1e-12);
        let z4z4 = fourier_z4(&fourier_z4(&psi, TAU).unwrap(), TAU).unwrap();
        assert!(z4z4.relative_l2_error(&z2).unwrap() < 1e-6);
        let out = z8(&psi, TAU).unwrap();
        let expected = psi.scaled(Complex64::from_polar(1.0, PI * n as f64 / 4.0));
        assert!(out.relative_l2_error(&expected).unwrap() < 1e-6);
    }
}

#[test]
fn frft_eigenvalue_for_arbitrary_angles() {
    let grid = mode_grid(8);
    for &gamma in &[-2.5, -1.0, 0.4, 2.9] {
        for n in [0, 1, 4, 8] {
            let psi = HGMode::centered(n, TAU).unwrap().sample(&grid);
            let out = apply_frft(&psi, gamma, TAU).unwrap();
            let expected = psi.scaled(Complex64::from_polar(1.0, -gamma * n as f64));
            assert!(out.relative_l2_error(&expected).unwrap() < 1e-6);
        }
    }
}

#[test]
fn decomposed_chain_matches_direct_frft() {
    let grid = TimeGrid::for_modes(TAU, 4, 8192).unwrap();
    for gamma in [-PI / 2.0, -PI / 4.0] {
        let (d, df) = type1_decomposition(gamma, TAU).unwrap();
        let psi = HGMode::centered(3, TAU).unwrap().sample(&grid);
        let chain = disperse(&apply_lens(&disperse(&psi, d), df).unwrap(), d)
            .scaled(Complex64::from_polar(1.0, gamma / 2.0));
        let direct = apply_frft(&psi, gamma, TAU).unwrap();
        assert!(chain.relative_l2_error(&direct).unwrap() < 1e-8);
    }
}

#[test]
fn degenerate_paths() {
    let grid = mode_grid(4);
    let psi = HGMode::centered(1, TAU).unwrap().sample(&grid);
    // Pure lens as an LCT with b = 0.
    let l = apply_lct(&psi, &lens(5.0).unwrap()).unwrap();
    assert!(l.relative_l2_error(&apply_lens(&psi, 5.0).unwrap()).unwrap() < 1e-15);
    // Magnifier a = 2: A(t/2)/√2 against the analytic stretched mode.
    let m = TemporalRayMatrix::new(2.0, 0.0, 0.0, 0.5).unwrap();
    let out = apply_lct(&psi, &m).unwrap();
    let expected = HGMode::centered(1, 2.0 * TAU).unwrap().sample(&grid);
    assert!(out.relative_l2_error(&expected).unwrap() < 1e-10);
    // a = -2 has no delta-kernel support.
    let bad = TemporalRayMatrix::new(-2.0, 0.0, 0.0, -0.5).unwrap();
    assert!(matches!(apply_lct(&psi, &bad), Err(Error::UnsupportedDegenerate { .. })));
}

#[test]
fn negative_identity_branches() {
    let grid = mode_grid(4);
    let g0 = HGMode::centered(0, TAU).unwrap();
    let psi = g0.sample(&grid);
    let eps = 1e-12;
    // Approaching b = 0 from either side agrees with the image law.
    for b in [eps, -eps] {
        let t = TemporalRayMatrix::new(-1.0, b, 0.0, -1.0).unwrap();
        let out = apply_lct(&psi, &t).unwrap();
        let img = lct_image(&g0, &t).unwrap().sample(&grid);
        assert!(out.relative_l2_error(&img).unwrap() < 1e-9, "b = {b}");
    }
    // Exactly b = 0 uses the principal root: +i.
    let t = TemporalRayMatrix::new(-1.0, 0.0, 0.0, -1.0).unwrap();
    let out = apply_lct(&psi, &t).unwrap();
    assert!(out.relative_l2_error(&psi.scaled(Complex64::new(0.0, 1.0))).unwrap() < 1e-13);
}

#[test]
fn window_overflow_is_reported() {
    let grid = TimeGrid::centered_span(512, 6.0, 1.0).unwrap();
    let psi = HGMode::centered(0, 1.0).unwrap().sample(&grid);
    let r = apply_lct(&psi, &prop(40.0));
    assert!(matches!(r, Err(Error::WindowOverflow { .. })), "{r:?}");
}

#[test]
fn frft_conditions_preserve_bandwidth() {
    let dt0 = 1.0;
    let tau = 2f64.sqrt() * dt0;
    let grid = TimeGrid::centered_span(16384, 800.0, tau).unwrap();
    let g = gaussian(grid, dt0);
    for gamma in [-PI / 4.0, -PI / 2.0, -PI - 0.05] {
        let (d, df) = type1_decomposition(gamma, tau).unwrap();
        let out = disperse(&apply_lens(&disperse(&g, d), df).unwrap(), d);
        assert!((out.spectral_std() / g.spectral_std() - 1.0).abs() < 1e-6, "gamma = {gamma}");
    }
}

#[test]
fn axial_phase() {
    let tau0 = 1.7;
    let ds = [0.0, tau0 * tau0, -3.0 * tau0 * tau0, 20.0 * tau0 * tau0];
    let phi = axial_phase_trace(tau0, &ds).unwrap();
    assert_eq!(phi[0], 0.0);
    assert!((phi[1] + PI / 8.0).abs() < 1e-9);
    for (p, d) in phi.iter().zip(ds) {
        assert!((p + 0.5 * (d / (tau0 * tau0)).atan()).abs() < 1e-9);
    }
}

#[test]
fn spectrum_convention_matches_closed_form() {
    // ∫ Ψ_1(t - t0) e^{iΩt} dt = i √(2πτ) h_1(Ωτ) e^{iΩt0}.
    let grid = TimeGrid::new(-37.0, 0.02, 4000, 1.0).unwrap();
    let m = HGMode::new(1, 1.2, 2.0).unwrap();
    let s = m.sample(&grid).spectrum();
    for (w, v) in s.omegas.iter().zip(&s.values).filter(|(w, _)| w.abs() < 4.0) {
        let h1 = tmsort::hgmodes::hermite_function(1, w * m.tau);
        let expected = Complex64::new(0.0, 1.0) * (2.0 * PI * m.tau).sqrt() * h1 * Complex64::from_polar(1.0, w * m.t0);
        assert!((v - expected).norm() < 1e-10);
    }
}

#[test]
fn csv_round_trip() {
    let grid = TimeGrid::centered(65, 0.13, 1.1).unwrap();
    let env = SampledEnvelope::from_fn(grid, |t| Complex64::new(t.cos(), (2.0 * t).sin() / 3.0));
    let mut buf = Vec::new();
    write_csv(&env, &mut buf).unwrap();
    let back = read_csv(std::io::Cursor::new(buf)).unwrap();
    assert_eq!(back, env);
    assert!(read_csv(std::io::Cursor::new(b"t_ps,re,im\n1,2,3\n".to_vec())).is_err());
}

#[test]
fn incompatible_grids_are_rejected() {
    let a = SampledEnvelope::zeros(TimeGrid::centered(16, 0.1, 1.0).unwrap());
    let b = SampledEnvelope::zeros(TimeGrid::centered(16, 0.2, 1.0).unwrap());
    assert!(matches!(a.inner(&b), Err(Error::IncompatibleGrid(_))));
}

#[test]
fn grid_helpers() {
    let g = TimeGrid::centered_span(101, 5.0, 1.0).unwrap();
    assert!(g.is_symmetric());
    assert!((g.t(50)).abs() < 1e-15);
    assert!(g.covers(1.25) && !g.covers(1.26));
    assert!(!TimeGrid::new(0.0, 0.1, 10, 1.0).unwrap().is_symmetric());
    assert!(TimeGrid::new(0.0, -0.1, 10, 1.0).is_err());
    let tau = frft_matrix(0.3, 1.0).unwrap();
    assert!(tau.det() - 1.0 < 1e-15);
}
