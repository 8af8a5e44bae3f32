use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::{LN_2, PI};
use tmsort::fieldgrid::TimeGrid;
use tmsort::hgmodes::HGMode;
use tmsort::numerics::{erf, gauss_legendre};
use tmsort::spdc::*;
use tmsort::Error;

const TAU_O: f64 = 2.95;

fn k4_params() -> SPDCParams {
    // K = ½(T + 1/T) = 4.
    SPDCParams::symmetric_from_t(TAU_O, 4.0 - 15f64.sqrt()).unwrap()
}

/// Odd grid with a node at zero and spacing dividing 2τ_o, so the rectangle edges fall on nodes.
fn edge_grid(p: &SPDCParams, half: f64, per_tau_o: usize) -> TimeGrid {
    let h = p.tau_o / per_tau_o as f64;
    let k = (half / h).ceil() as usize;
    TimeGrid::centered(2 * k + 1, h, p.tau_o).unwrap()
}

/// Composite Gauss-Legendre rule on [a, b].
fn gl(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let (x, w) = gauss_legendre(20);
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|p| {
            let c = a + (p as f64 + 0.5) * h;
            x.iter().zip(&w).map(|(xi, wi)| wi * f(c + 0.5 * h * xi)).sum::<f64>() * 0.5 * h
        })
        .sum()
}

#[test]
fn jsa_values_and_symmetry() {
    let p = SPDCParams::symmetric(TAU_O, 24.0).unwrap();
    assert!((jsa(&p, 0.0, 0.0) - Complex64::new(2.0 * PI * p.gain, 0.0)).norm() < 1e-15);
    for k in [1.0, -2.0, 3.0] {
        // τ_oΩ + τ_eΩ' = kπ with Ω' = 0.
        assert!(jsa(&p, k * PI / TAU_O, 0.0).norm() < 1e-16);
    }
    for i in -10..=10 {
        for j in -10..=10 {
            let (w, wp) = (0.13 * i as f64, 0.07 * j as f64);
            assert!((jsa(&p, w, wp).norm() - jsa(&p, wp, w).norm()).abs() < 1e-15);
        }
    }
}

#[test]
fn exact_centered_kernel_support_symmetry_norm() {
    let p = SPDCParams::symmetric(TAU_O, 24.0).unwrap();
    let g = edge_grid(&p, 3.0 * 2.8 / p.omega_p(), 8);
    let j = jta_exact_centered_on(&p, g).unwrap();
    let (n, _) = j.values.dim();
    for a in 0..n {
        for b in 0..n {
            if (g.t(a) - g.t(b)).abs() > 2.0 * TAU_O + 1e-9 {
                assert_eq!(j.values[[a, b]], Complex64::new(0.0, 0.0));
            }
        }
    }
    assert!(j.central_asymmetry() < 1e-12);
    assert!(j.exchange_asymmetry() < 1e-12);

    // Rotated coordinates u = t - t', v = t + t', dt dt' = du dv / 2.
    let jn2 = PI * (p.gain * p.omega_p() / (2.0 * TAU_O)).powi(2);
    let vint = gl(|v| (-v * v * p.omega_p().powi(2) / 2.0).exp(), -40.0 / p.omega_p(), 40.0 / p.omega_p(), 40);
    let quad = 0.5 * jn2 * 4.0 * TAU_O * vint;
    let pb = p.pb_exact().unwrap();
    assert!((quad / pb - 1.0).abs() < 1e-10, "{quad} vs {pb}");
    // Edge samples carry Π = ½, so |J|² = ¼ there; on an edge-aligned grid this removes
    // exactly a fraction h/8τ_o of the norm.
    let discrete = pb * (1.0 - g.dt / (8.0 * TAU_O));
    assert!((j.norm_sq() / discrete - 1.0).abs() < 1e-9, "{} vs {discrete}", j.norm_sq());
}

#[test]
fn exact_kernel_matches_centered_after_shift() {
    let p = SPDCParams::symmetric(TAU_O, 12.0).unwrap();
    let g = TimeGrid::centered(101, 0.37, 1.0).unwrap();
    let c = jta_exact_centered_on(&p, g).unwrap();
    let shift = |d: f64| TimeGrid::new(g.t_start + d, g.dt, g.n_points, 1.0).unwrap();
    let e = jta_exact_on(&p, shift(p.tau_o), shift(p.tau_e)).unwrap();
    let worst = c.values.iter().zip(e.values.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    assert!(worst < 1e-12 * c.values.iter().map(|z| z.norm()).fold(0.0, f64::max));
}

#[test]
fn gaussian_kernel_probability() {
    for (to, te, tp) in [(TAU_O, -TAU_O, 24.0), (2.0, -0.5, 8.0), (1.0, -3.0, 30.0)] {
        let p = SPDCParams::new(to, te, tp).unwrap();
        let m = gauss_matrix(&p).unwrap();
        let j1 = 2.0 * p.gain * p.omega_p().powi(2) / (p.t_o() - p.t_e()).abs();
        // ∫∫ e^{-2xᵀMx} = π/√det(2M).
        let oracle = j1 * j1 * PI / (4.0 * (m[0][0] * m[1][1] - m[0][1] * m[0][1])).sqrt();
        let pb = p.pb().unwrap();
        assert!((oracle / pb - 1.0).abs() < 1e-12);
        let (t1, t2) = mode_widths(&p).unwrap();
        let half = 12.0 * t1.max(t2).max(2.0 * to.abs()).max(2.0 * te.abs());
        let g = TimeGrid::centered_span(801, half, 1.0).unwrap();
        let shift = |c: f64| TimeGrid::new(g.t_start + c, g.dt, g.n_points, 1.0).unwrap();
        let j = jta_gauss_on(&p, shift(to), shift(te)).unwrap();
        assert!((j.norm_sq() / pb - 1.0).abs() < 1e-6, "{} vs {pb}", j.norm_sq());
    }
    let p = k4_params();
    let tau = mode_widths(&p).unwrap().0;
    let c = jta_gauss_centered_on(&p, TimeGrid::centered_span(801, 12.0 * tau, 1.0).unwrap()).unwrap();
    assert!((c.norm_sq() / p.pb().unwrap() - 1.0).abs() < 1e-6);
    assert!(c.central_asymmetry() < 1e-12 && c.exchange_asymmetry() < 1e-12);
}

#[test]
fn gaussian_matrix_positive_definite_in_regime() {
    for i in 1..20 {
        for k in 1..20 {
            let p = SPDCParams::new(0.4 * i as f64, -0.3 * k as f64, 10.0).unwrap();
            if 1.0 + p.t_o() * p.t_e() <= 0.0 {
                continue;
            }
            let m = gauss_matrix(&p).unwrap();
            let tr = m[0][0] + m[1][1];
            let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            let lo = 0.5 * (tr - (tr * tr - 4.0 * det).sqrt());
            assert!(lo > 0.0 && m[0][1] == m[1][0]);
        }
    }
}

#[test]
fn separable_source_is_rank_one() {
    let p = SPDCParams::symmetric(TAU_O, delta_s(SIGMA_S) * TAU_O).unwrap();
    let s = schmidt_analytic(&p).unwrap();
    assert!((s.k - 1.0).abs() < 1e-12);
    assert!((s.lambdas[0] - 1.0).abs() < 1e-12);
    let num = schmidt_numeric(&jta_gauss(&p).unwrap()).unwrap();
    assert!(num.singular_values[1] < 1e-8 * num.singular_values[0]);
}

#[test]
fn symmetric_mode_width() {
    for tp in [5.0, 24.0, 60.0] {
        let p = SPDCParams::symmetric(TAU_O, tp).unwrap();
        let s = schmidt_analytic(&p).unwrap();
        let tau = (TAU_O * tp / (SIGMA_S * LN_2.sqrt())).sqrt();
        assert!((s.tau1 - tau).abs() < 1e-12 * tau && (s.tau2 - tau).abs() < 1e-12 * tau);
        assert!((s.tau1 / (TAU_O * tp).sqrt() - 0.86).abs() < 0.005);
        let t = p.t_o();
        assert!((s.k - 0.5 * (t + 1.0 / t)).abs() < 1e-12);
    }
}

#[test]
fn regime_boundaries() {
    let p = SPDCParams::symmetric_from_t(TAU_O, 2.0).unwrap();
    assert!(matches!(schmidt_analytic(&p), Err(Error::OutOfRegime(_))));
    assert!((schmidt_number(&p).unwrap() - 1.25).abs() < 1e-12);
    assert!((schmidt_number_symmetric(2.0).unwrap() - 1.25).abs() < 1e-15);
    assert!(matches!(SPDCParams::new(1.0, 1.0, 10.0).and_then(|p| jta_exact(&p)), Err(Error::SingularConfiguration(_))));
    assert!(matches!(SPDCParams::new(1.0, 1.0, 10.0).and_then(|p| jta_gauss(&p)), Err(Error::SingularConfiguration(_))));
    let mut p = SPDCParams::symmetric(TAU_O, 24.0).unwrap();
    p.gain = 10.0;
    assert!(matches!(p.validated(), Err(Error::InvalidParameter(_))));
}

#[test]
fn lambda_weights_sum() {
    for k in [1.0, 1.3, 4.0, 20.0] {
        let p = SPDCParams::symmetric_from_t(TAU_O, k - (k * k - 1.0f64).sqrt()).unwrap();
        let s = schmidt_analytic(&p).unwrap();
        assert!((s.lambdas.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        let inv: f64 = 1.0 / s.lambdas.iter().map(|l| l * l).sum::<f64>();
        assert!((inv - k).abs() < 1e-9 * k);
    }
}

proptest! {
    #[test]
    fn lambda_geometric_ratio(k in 1.0f64..50.0, n in 0usize..40) {
        let r = (k - 1.0) / (k + 1.0);
        if n > 0 {
            prop_assert!((schmidt_lambda(k, n) - schmidt_lambda(k, n - 1) * r).abs() <= 1e-15 * schmidt_lambda(k, n - 1));
        }
        let partial: f64 = (0..=n).map(|i| schmidt_lambda(k, i)).sum();
        prop_assert!((partial - (1.0 - r.powi(n as i32 + 1))).abs() < 1e-13);
    }
}

#[test]
fn numeric_schmidt_reproduces_k4() {
    let p = k4_params();
    let ana = schmidt_analytic(&p).unwrap();
    assert!((ana.k - 4.0).abs() < 1e-12);
    let j = jta_gauss(&p).unwrap();
    let num = schmidt_numeric(&j).unwrap();
    let pb = p.pb().unwrap();
    for n in 0..10 {
        let l = num.singular_values[n].powi(2) / pb;
        let want = 0.4 * 0.6f64.powi(n as i32);
        assert!((l / want - 1.0).abs() < 1e-4, "n = {n}: {l} vs {want}");
    }
    assert!((num.schmidt_number() - 4.0).abs() < 1e-3);
    let s2: f64 = num.singular_values.iter().map(|s| s * s).sum();
    assert!((s2 / j.norm_sq() - 1.0).abs() < 1e-10);
    let hg = HGMode::new(0, ana.tau1, TAU_O).unwrap().sample(&j.t_grid);
    assert!(num.left_modes[0].inner(&hg).unwrap().norm() > 1.0 - 1e-6);
    let hg = HGMode::new(0, ana.tau2, -TAU_O).unwrap().sample(&j.tprime_grid);
    assert!(num.right_modes[0].inner(&hg).unwrap().norm() > 1.0 - 1e-6);
}

#[test]
fn numeric_schmidt_asymmetric_widths() {
    let p = SPDCParams::new(1.5, -0.4, 2.0).unwrap();
    let ana = schmidt_analytic(&p).unwrap();
    assert!((ana.tau1 / ana.tau2 - 1.0).abs() > 0.1);
    let j = jta_gauss(&p).unwrap();
    let num = schmidt_numeric(&j).unwrap();
    let w = num.weights();
    for n in 0..5 {
        assert!((w[n] / ana.lambdas[n] - 1.0).abs() < 1e-4);
    }
    for n in 0..3 {
        let psi = HGMode::new(n, ana.tau1, p.tau_o).unwrap().sample(&j.t_grid);
        let phi = HGMode::new(n, ana.tau2, p.tau_e).unwrap().sample(&j.tprime_grid);
        assert!(num.left_modes[n].inner(&psi).unwrap().norm() > 1.0 - 1e-6);
        assert!(num.right_modes[n].inner(&phi).unwrap().norm() > 1.0 - 1e-6);
    }
}

#[test]
fn gaussian_and_exact_kernels_overlap() {
    // The overlap factorizes in (t+t', t-t'); the sum direction matches exactly and the
    // difference direction compares a rectangle with a Gaussian, leaving a σ_s-only value.
    let s = SIGMA_S;
    let closed = (2.0 * PI).sqrt() / s * erf(s / 2f64.sqrt()) / (2.0 * PI.sqrt() / s).sqrt();
    assert!((closed - 0.93655).abs() < 1e-5);
    let p = SPDCParams::symmetric(TAU_O, 24.0).unwrap();
    let g = edge_grid(&p, 150.0, 8);
    let e = jta_exact_centered_on(&p, g).unwrap();
    let gs = jta_gauss_centered_on(&p, g).unwrap();
    let ov = e.inner(&gs).unwrap().norm() / (p.pb_exact().unwrap() * gs.norm_sq()).sqrt();
    // Trapezoid error across t - t' is O(h²), about 3e-4 at h = τ_o/8.
    assert!((ov - closed).abs() < 5e-4, "{ov} vs {closed}");
    assert!(ov > 0.93);
}

#[test]
fn design_numbers() {
    let d = design_source(4.0, 75.0, TAU_O).unwrap();
    assert!((d.f_rf_min_ghz - 72.0).abs() < 1.0, "{}", d.f_rf_min_ghz);
    assert!((d.tau_g - 3.5).abs() < 0.1, "{}", d.tau_g);
    assert!((d.tau_p - 24.0).abs() < 0.1, "{}", d.tau_p);
    assert!((d.tau - 7.3).abs() < 0.1, "{}", d.tau);
    assert!(d.aperture_ok);
    let p = SPDCParams::symmetric(TAU_O, d.tau_p).unwrap();
    assert!((schmidt_number(&p).unwrap() - 4.0).abs() < 1e-12);

    let d1 = design_source(1.0, 75.0, TAU_O).unwrap();
    assert!((d1.tau_p - delta_s(SIGMA_S) * TAU_O).abs() < 1e-12);
    assert!((delta_s(SIGMA_S) - 1.03).abs() < 0.005);
    assert!((c_m(SIGMA_S) - 2.68).abs() < 0.005);
    assert!(matches!(design_source(0.5, 75.0, TAU_O), Err(Error::InfeasibleDesign(_))));
    assert!(!design_source(4.0, 60.0, TAU_O).unwrap().aperture_ok);
}

#[test]
fn preset_and_csv() {
    let p = PPKTP.params(24.0).unwrap();
    assert_eq!(p.tau_e, -2.95);
    let g = TimeGrid::centered(3, 1.0, 1.0).unwrap();
    let j = jta_exact_centered_on(&p, g).unwrap();
    let mut buf = Vec::new();
    j.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(text.lines().count(), 10);
    assert!(text.starts_with("t_ps,tprime_ps,re,im\n"));
    assert!(!text.contains('\r'));
}
