use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use tmsort::fieldgrid::{apply_lct, SampledEnvelope, TimeGrid};
use tmsort::hgmodes::*;
use tmsort::numerics::gauss_legendre;
use tmsort::raymatrix::{frft_matrix, prop, TemporalRayMatrix};

fn std_grid(tau: f64) -> TimeGrid {
    TimeGrid::centered_span(4096, 12.0 * tau, tau).unwrap()
}

fn legendre<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, panels: usize) -> f64 {
    let (x, w) = gauss_legendre(20);
    let h = (hi - lo) / panels as f64;
    (0..panels)
        .map(|p| {
            let a = lo + p as f64 * h;
            x.iter().zip(&w).map(|(x, w)| w * 0.5 * h * f(a + 0.5 * h * (x + 1.0))).sum::<f64>()
        })
        .sum()
}

#[test]
fn orthonormality_on_standard_grid() {
    let tau = 1.3;
    let grid = std_grid(tau);
    let modes: Vec<SampledEnvelope> = (0..=10).map(|n| HGMode::centered(n, tau).unwrap().sample(&grid)).collect();
    for (n, f) in modes.iter().enumerate() {
        for (m, g) in modes.iter().enumerate() {
            let o = overlap(f, g).unwrap();
            let expected = if n == m { 1.0 } else { 0.0 };
            assert!((o - expected).norm() < 1e-8, "({n},{m}): {o}");
        }
    }
}

#[test]
fn unit_norm_by_gauss_legendre() {
    let m = HGMode::centered(5, 0.8).unwrap();
    let s = legendre(|t| m.value(t).powi(2), -12.0 * m.tau, 12.0 * m.tau, 48);
    assert!((s - 1.0).abs() < 1e-12);
}

#[test]
fn shifted_gaussian_overlap() {
    let tau = 1.0;
    let grid = TimeGrid::centered_span(4096, 20.0, tau).unwrap();
    let a = HGMode::new(0, tau, 5.0 * tau).unwrap().sample(&grid);
    let b = HGMode::centered(0, tau).unwrap().sample(&grid);
    let o = overlap(&a, &b).unwrap();
    assert!((o - Complex64::new((-25.0f64 / 4.0).exp(), 0.0)).norm() < 1e-12);
    let self_o = overlap(&a, &a).unwrap();
    assert!(self_o.im == 0.0 && self_o.re > 0.0);
}

#[test]
fn spectrum_matches_closed_form_and_parity() {
    for n in 0..6 {
        let m = HGMode::new(n, 1.4, 0.3).unwrap();
        for &w in &[-2.0, -0.5, 0.0, 0.9, 3.1] {
            let expected = Complex64::new(0.0, 1.0).powu(n as u32)
                * (2.0 * PI * m.tau).sqrt()
                * hermite_function(n, w * m.tau)
                * Complex64::from_polar(1.0, w * m.t0);
            assert!((spectrum(&m, w) - expected).norm() < 1e-12, "n={n} w={w}");
        }
        let c = HGMode::centered(n, 1.4).unwrap();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        assert!((spectrum(&c, -1.1) - sign * spectrum(&c, 1.1)).norm() < 1e-13);
    }
}

#[test]
fn spectral_normalization() {
    let m = HGMode::centered(1, 0.9).unwrap();
    let s = legendre(|w| spectrum(&m, w).norm_sqr(), -14.0 / m.tau, 14.0 / m.tau, 40) / (2.0 * PI);
    assert!((s - 1.0).abs() < 1e-10);
}

fn fwhm<F: Fn(f64) -> f64>(f: F, peak: f64) -> f64 {
    let half = 0.5 * f(peak);
    let (mut lo, mut hi) = (peak, peak + 1.0);
    while f(hi) > half {
        hi += 1.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > half {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    2.0 * (0.5 * (lo + hi) - peak)
}

#[test]
fn fourier_limited_time_bandwidth() {
    let m = HGMode::centered(0, 2.3).unwrap();
    let t_f = fwhm(|t| m.value(t).powi(2), 0.0);
    let w_f = fwhm(|w| spectrum(&m, w).norm_sqr(), 0.0);
    assert!((t_f * w_f - 4.0 * 2f64.ln()).abs() < 1e-9);
}

#[test]
fn image_law_special_cases() {
    let tau = 1.1;
    let grid = std_grid(tau);
    let m = HGMode::centered(2, tau).unwrap();
    let id = lct_image(&m, &TemporalRayMatrix::identity()).unwrap();
    assert_eq!(id.phase, Complex64::from_polar(1.0, 0.0));
    assert!(id.sample(&grid).relative_l2_error(&m.sample(&grid)).unwrap() < 1e-15);

    let d = 3.0;
    let g0 = HGMode::centered(0, tau).unwrap();
    let img = lct_image(&g0, &prop(d)).unwrap();
    let width = tau * (1.0 + d * d / tau.powi(4)).sqrt();
    assert!((tau * img.beta - width).abs() < 1e-14);
    let grid_wide = TimeGrid::centered_span(4096, 40.0, tau).unwrap();
    assert!((img.sample(&grid_wide).intensity_std() - width / 2f64.sqrt()).abs() < 1e-10);

    for &gamma in &[-PI / 4.0, -PI / 2.0, 2.0] {
        for n in 0..5 {
            let mode = HGMode::centered(n, tau).unwrap();
            let img = lct_image(&mode, &frft_matrix(gamma, tau).unwrap()).unwrap();
            assert!((img.beta - 1.0).abs() < 1e-14 && img.alpha.norm() < 1e-14);
            let net = img.phase * Complex64::from_polar(1.0, gamma / 2.0);
            assert!((net - Complex64::from_polar(1.0, -gamma * n as f64)).norm() < 1e-13);
        }
    }
}

#[test]
fn image_law_matches_numeric_lct() {
    let tau = 1.0;
    let grid = TimeGrid::for_modes(tau, 6, 4096).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for trial in 0..24 {
        let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
        let b = sign * rng.random_range(0.5..2.0);
        let a = rng.random_range(-2.0..2.0);
        let d = rng.random_range(-2.0..2.0);
        let t = TemporalRayMatrix::new(a, b, (a * d - 1.0) / b, d).unwrap();
        let n = trial % 7;
        let mode = HGMode::centered(n, tau).unwrap();
        let numeric = apply_lct(&mode.sample(&grid), &t).unwrap();
        let analytic = lct_image(&mode, &t).unwrap().sample(&grid);
        let err = numeric.relative_l2_error(&analytic).unwrap();
        assert!(err < 1e-6, "trial {trial}: {err}");
    }
}

#[test]
fn truncated_completeness_improves_monotonically() {
    let tau = 1.0;
    let grid = TimeGrid::centered_span(4096, 30.0, tau).unwrap();
    let f = SampledEnvelope::from_fn(grid, |t| {
        Complex64::new((-(t - 0.7).powi(2) / 1.5).exp() * (1.3 * t).cos(), 0.2 * (-(t + 1.0).powi(2)).exp())
    });
    let mut approx = SampledEnvelope::zeros(grid);
    let mut last = f64::INFINITY;
    for n in 0..40 {
        let psi = HGMode::centered(n, tau).unwrap().sample(&grid);
        let c = overlap(&psi, &f).unwrap();
        approx = approx.add(&psi.scaled(c)).unwrap();
        let err = approx.relative_l2_error(&f).unwrap();
        assert!(err <= last + 1e-14, "n = {n}");
        last = err;
    }
    assert!(last < 1e-6);
}
