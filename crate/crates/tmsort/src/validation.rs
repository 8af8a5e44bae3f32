//! Acceptance checks with pinned tolerances, shared by the acceptance test target and the CLI.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::{LN_2, PI};
use std::time::Instant;

use crate::analysis::{
    gaussian_frft_trace_numeric, mod4_probs, optimize_ptot, p1_analytic, p1p2_quadrature, p2_analytic, parity_probs,
    povm_grid, trace_grid, POVM_POINTS,
};
use crate::error::Result;
use crate::fieldgrid::{apply_frft, apply_lct, apply_lct_with, axial_phase_trace, composition_sign, LctMethod, TimeGrid};
use crate::hgmodes::{lct_image, overlap, HGMode};
use crate::raymatrix::{compose, TemporalRayMatrix};
use crate::sorter::{interferometer_pass, run_cascade, DualRailField, SorterSpec, StageSpec};
use crate::spdc::{
    jta_exact_centered_on, jta_gauss, jta_gauss_centered_on, mode_widths, schmidt_analytic, schmidt_lambda,
    schmidt_numeric, design_source, SPDCParams,
};

/// Reference source: τ_o = 2.95 ps, τ_p = 24 ps.
pub const REF_TAU_O: f64 = 2.95;
pub const REF_TAU_P: f64 = 24.0;
pub const DEFAULT_SEED: u64 = 2024;

pub const AC1_RATIO: (f64, f64) = (0.93, 0.01);
pub const AC1_PTOT: (f64, f64) = (0.055, 0.001);
pub const AC1_SECONDS: f64 = 5.0;
pub const AC2_TOL: f64 = 1e-4;
pub const AC2_POINTS: usize = 11;
pub const AC2_SECONDS: f64 = 120.0;
pub const AC3_CROSS_TOL: f64 = 1e-6;
pub const AC3_DIAG_TOL: f64 = 1e-6;
pub const AC4_TOL: f64 = 1e-6;
pub const AC5_TOL: f64 = 1e-6;
pub const AC5_TRIALS: usize = 24;
pub const AC6_LAMBDA_TOL: f64 = 1e-4;
pub const AC6_OVERLAP_TOL: f64 = 1e-6;
pub const AC6_K_TOL: f64 = 1e-3;
pub const AC7_LEAKAGE: f64 = 1e-6;
pub const AC8_EPS: f64 = 0.05;
pub const AC8_TOL: f64 = 1e-6;
pub const AC8_TBP_TOL: f64 = 1e-9;
pub const AC9_F_RF_TOL: f64 = 1.0;
pub const AC9_PS_TOL: f64 = 0.15;
pub const AC10_POINT_TOL: f64 = 1e-6;
pub const AC10_SPAN: f64 = 50.0;
pub const AC10_SHIFT_TOL: f64 = 0.013;
pub const AC11_COMPLETENESS_TOL: f64 = 1e-6;
pub const AC11_ENERGY_TOL: f64 = 1e-9;
pub const AC11_CASCADE_TOL: f64 = 1e-6;
pub const AC11_ORTHO_TOL: f64 = 1e-8;

/// Outcome of one criterion.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub id: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(id: &'static str, name: &'static str, passed: bool, detail: String) -> Self {
        Self { id, name, passed, detail }
    }

    pub fn line(&self) -> String {
        format!("[{}] {} {}: {}", if self.passed { "PASS" } else { "FAIL" }, self.id, self.name, self.detail)
    }
}

/// Criterion identifiers in run order.
pub const CRITERIA: [&str; 12] =
    ["AC1", "AC2", "AC3", "AC4", "AC5", "AC6", "AC7", "AC8", "AC9", "AC10a", "AC10b", "AC11"];

/// Runs one criterion; numeric errors become failures.
pub fn run(id: &str, seed: u64) -> Check {
    let (name, out): (&'static str, Result<Check>) = match id {
        "AC1" => ("mod-4 error minimum", ac1()),
        "AC2" => ("closed forms vs quadrature", ac2()),
        "AC3" => ("parity sorter cross-talk", ac3()),
        "AC4" => ("FrFT eigenvalues", ac4()),
        "AC5" => ("HG image law", ac5(seed)),
        "AC6" => ("Schmidt decomposition K = 4", ac6()),
        "AC7" => ("mod-8 routing", ac7()),
        "AC8" => ("bandwidth under FrFT conditions", ac8()),
        "AC9" => ("source design numbers", ac9()),
        "AC10a" => ("axial phase pointwise", ac10a()),
        "AC10b" => ("accumulated axial shift", ac10b()),
        "AC11" => ("structural invariants", ac11(seed)),
        _ => return Check::new("??", "unknown criterion", false, format!("no criterion named {id}")),
    };
    let id = CRITERIA.iter().copied().find(|c| *c == id).unwrap_or("??");
    match out {
        Ok(c) => Check { id, name, ..c },
        Err(e) => Check::new(id, name, false, format!("error: {e}")),
    }
}

pub fn run_all(seed: u64) -> Vec<Check> {
    CRITERIA.iter().map(|id| run(id, seed)).collect()
}

fn done(passed: bool, detail: String) -> Result<Check> {
    Ok(Check::new("", "", passed, detail))
}

fn ac1() -> Result<Check> {
    let start = Instant::now();
    let o = optimize_ptot(REF_TAU_O, REF_TAU_P)?;
    let secs = start.elapsed().as_secs_f64();
    let ok = (o.ratio - AC1_RATIO.0).abs() <= AC1_RATIO.1
        && (o.ptot_star - AC1_PTOT.0).abs() <= AC1_PTOT.1
        && secs < AC1_SECONDS;
    done(ok, format!("ratio {:.4}, p_tot {:.5}, {secs:.2} s", o.ratio, o.ptot_star))
}

fn ac2() -> Result<Check> {
    let p = SPDCParams::symmetric(REF_TAU_O, REF_TAU_P)?;
    let scale = (REF_TAU_O * REF_TAU_P).sqrt();
    let start = Instant::now();
    let mut worst = 0f64;
    for i in 0..AC2_POINTS {
        let r = 0.5 + i as f64 / (AC2_POINTS - 1) as f64;
        let tau = r * scale;
        let (q1, q2) = p1p2_quadrature(&p, tau, POVM_POINTS)?;
        let d1 = (q1 - p1_analytic(tau, REF_TAU_O, REF_TAU_P)).abs();
        let d2 = (q2 - p2_analytic(tau, REF_TAU_O, REF_TAU_P)).abs();
        worst = worst.max(d1).max(d2);
    }
    let secs = start.elapsed().as_secs_f64();
    done(worst < AC2_TOL && secs < AC2_SECONDS, format!("max |Δ| {worst:.2e} (tol {AC2_TOL:.0e}), {secs:.1} s"))
}

fn ac3() -> Result<Check> {
    let p = SPDCParams::symmetric(REF_TAU_O, REF_TAU_P)?;
    let tau = 0.93 * (REF_TAU_O * REF_TAU_P).sqrt();
    let t = parity_probs(&jta_exact_centered_on(&p, povm_grid(tau, POVM_POINTS)?)?)?;
    let cross = t.get(1, -1).unwrap_or(f64::NAN).max(t.get(-1, 1).unwrap_or(f64::NAN));
    let mut diag = 0f64;
    for k in [1.0, 2.0, 4.0, 8.0] {
        let g = SPDCParams::symmetric_from_t(REF_TAU_O, k - (k * k - 1.0f64).sqrt())?;
        let tau = mode_widths(&g)?.0;
        let t = parity_probs(&jta_gauss_centered_on(&g, povm_grid(tau, POVM_POINTS)?)?)?;
        let e = (t.get(1, 1).unwrap_or(f64::NAN) - 0.5 * (1.0 + 1.0 / k)).abs();
        let o = (t.get(-1, -1).unwrap_or(f64::NAN) - 0.5 * (1.0 - 1.0 / k)).abs();
        diag = diag.max(e).max(o);
    }
    done(
        cross < AC3_CROSS_TOL && diag < AC3_DIAG_TOL,
        format!("exact cross {cross:.2e} (tol {AC3_CROSS_TOL:.0e}), Gaussian diagonal |Δ| {diag:.2e} (tol {AC3_DIAG_TOL:.0e})"),
    )
}

fn ac4() -> Result<Check> {
    let tau = 1.0;
    let grid = TimeGrid::for_modes(tau, 8, 4096)?;
    let mut worst = 0f64;
    for gamma in [-PI / 4.0, -PI / 2.0, -PI] {
        for n in 0..=8 {
            let psi = HGMode::centered(n, tau)?.sample(&grid);
            let out = apply_frft(&psi, gamma, tau)?;
            let want = psi.scaled(Complex64::from_polar(1.0, -gamma * n as f64));
            worst = worst.max(out.relative_l2_error(&want)?);
        }
    }
    done(worst < AC4_TOL, format!("max relative L2 {worst:.2e} (tol {AC4_TOL:.0e})"))
}

fn random_unimodular(rng: &mut ChaCha8Rng, tau: f64) -> Result<TemporalRayMatrix> {
    let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
    let b = sign * rng.random_range(0.5..2.0) * tau * tau;
    let a = rng.random_range(-2.0..2.0);
    let d = rng.random_range(-2.0..2.0);
    TemporalRayMatrix::new(a, b, (a * d - 1.0) / b, d)
}

fn ac5(seed: u64) -> Result<Check> {
    let tau = 1.0;
    let grid = TimeGrid::for_modes(tau, 6, 4096)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0f64;
    for trial in 0..AC5_TRIALS {
        let t = random_unimodular(&mut rng, tau)?;
        let mode = HGMode::centered(trial % 7, tau)?;
        let numeric = apply_lct(&mode.sample(&grid), &t)?;
        let analytic = lct_image(&mode, &t)?.sample(&grid);
        worst = worst.max(numeric.relative_l2_error(&analytic)?);
    }
    done(worst < AC5_TOL, format!("{AC5_TRIALS} matrices, max relative L2 {worst:.2e} (tol {AC5_TOL:.0e})"))
}

fn ac6() -> Result<Check> {
    let p = SPDCParams::symmetric_from_t(REF_TAU_O, 4.0 - 15f64.sqrt())?;
    let ana = schmidt_analytic(&p)?;
    let j = jta_gauss(&p)?;
    let num = schmidt_numeric(&j)?;
    let total: f64 = num.singular_values.iter().map(|s| s * s).sum();
    let mut worst = 0f64;
    for n in 0..10 {
        let l = num.singular_values[n].powi(2) / total;
        worst = worst.max((l / schmidt_lambda(4.0, n) - 1.0).abs());
    }
    let hg = HGMode::new(0, ana.tau1, p.tau_o)?.sample(&j.t_grid);
    let ov = num.left_modes[0].inner(&hg)?.norm();
    let dk = (num.schmidt_number() - ana.k).abs();
    done(
        worst < AC6_LAMBDA_TOL && ov > 1.0 - AC6_OVERLAP_TOL && dk < AC6_K_TOL,
        format!("λ rel {worst:.2e} (tol {AC6_LAMBDA_TOL:.0e}), overlap 1-{:.2e}, |ΔK| {dk:.2e}", 1.0 - ov),
    )
}

fn ac7() -> Result<Check> {
    let spec = SorterSpec::new(3, 1.0)?;
    let mut worst = 0f64;
    let mut slots = Vec::new();
    let mut periodic = true;
    for n in 0..8 {
        let r = run_cascade(n, &spec)?;
        let r8 = run_cascade(n + 8, &spec)?;
        worst = worst.max(r.leakage).max(r8.leakage);
        periodic &= r8.slot == r.slot;
        slots.push(r.slot);
    }
    let mut distinct = slots.clone();
    distinct.sort_unstable();
    distinct.dedup();
    done(
        worst < AC7_LEAKAGE && periodic && distinct.len() == 8,
        format!("slots {slots:?}, max leakage {worst:.2e} (tol {AC7_LEAKAGE:.0e}), n+8 same slot: {periodic}"),
    )
}

fn ac8() -> Result<Check> {
    let dt0 = 1.0 / 2f64.sqrt();
    let mut worst = 0f64;
    let mut tbp = 0f64;
    for gamma in [-PI / 4.0, -PI / 2.0, -PI - AC8_EPS] {
        let n = gaussian_frft_trace_numeric(dt0, gamma, &trace_grid(dt0, gamma)?)?;
        worst = worst.max((n.d_omega2 / n.d_omega0 - 1.0).abs());
        tbp = tbp.max((8.0 * LN_2 * n.dt0 * n.d_omega0 - 4.0 * LN_2).abs());
    }
    done(
        worst < AC8_TOL && tbp < AC8_TBP_TOL,
        format!("bandwidth rel {worst:.2e} (tol {AC8_TOL:.0e}), TBP |Δ| {tbp:.2e} (tol {AC8_TBP_TOL:.0e})"),
    )
}

fn ac9() -> Result<Check> {
    let d = design_source(4.0, 75.0, REF_TAU_O)?;
    let ok = (d.f_rf_min_ghz - 72.0).abs() <= AC9_F_RF_TOL
        && (d.tau_g - 3.5).abs() <= AC9_PS_TOL
        && (d.tau_p - 24.0).abs() <= AC9_PS_TOL
        && (d.tau - 7.3).abs() <= AC9_PS_TOL;
    done(
        ok,
        format!("f_RF_min {:.2} GHz, τ_G {:.3}, τ_p {:.3}, τ {:.3} ps", d.f_rf_min_ghz, d.tau_g, d.tau_p, d.tau),
    )
}

fn axial_sweep(tau0: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let ds: Vec<f64> = (0..=200).map(|i| (i as f64 / 100.0 - 1.0) * AC10_SPAN * tau0 * tau0).collect();
    let phi = axial_phase_trace(tau0, &ds)?;
    Ok((ds, phi))
}

fn ac10a() -> Result<Check> {
    let tau0 = 1.0;
    let (ds, phi) = axial_sweep(tau0)?;
    let worst = ds.iter().zip(&phi).map(|(d, p)| (p + 0.5 * (d / (tau0 * tau0)).atan()).abs()).fold(0.0, f64::max);
    done(worst < AC10_POINT_TOL, format!("{} points, max |Δ| {worst:.2e} rad (tol {AC10_POINT_TOL:.0e})", ds.len()))
}

fn ac10b() -> Result<Check> {
    let (_, phi) = axial_sweep(1.0)?;
    let shift = phi[phi.len() - 1] - phi[0];
    let dev = (shift + PI / 2.0).abs();
    done(dev <= AC10_SHIFT_TOL, format!("shift {shift:.6} rad, |Δ| from -π/2 {dev:.6} (tol {AC10_SHIFT_TOL})"))
}

fn ac11(seed: u64) -> Result<Check> {
    let p = SPDCParams::symmetric(REF_TAU_O, REF_TAU_P)?;
    let tau = 0.93 * (REF_TAU_O * REF_TAU_P).sqrt();
    let j = jta_exact_centered_on(&p, povm_grid(tau, POVM_POINTS)?)?;
    let completeness =
        (parity_probs(&j)?.total() - 1.0).abs().max((mod4_probs(&j, tau)?.total() - 1.0).abs());

    let grid = TimeGrid::for_modes(1.0, 8, 4096)?;
    let mode = |n: usize| HGMode::centered(n, 1.0).map(|m| m.sample(&grid));
    let f = DualRailField::new(mode(3)?, mode(6)?.scaled(Complex64::new(0.0, 0.5)))?;
    let mut energy = 0f64;
    for ell in 1..=3 {
        for theta in [0.0, 0.7, -PI / 4.0] {
            let out = interferometer_pass(&f, &StageSpec { ell, theta, tau: 1.0 })?;
            energy = energy.max((out.total_norm_sq() / f.total_norm_sq() - 1.0).abs());
        }
    }

    let grid6 = TimeGrid::for_modes(1.0, 6, 4096)?;
    let psi = HGMode::centered(2, 1.0)?.sample(&grid6);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cascade = 0f64;
    let mut tried = 0;
    while tried < 8 {
        let (t1, t2) = (random_unimodular(&mut rng, 1.0)?, random_unimodular(&mut rng, 1.0)?);
        let t21 = compose(&t2, &t1);
        if t21.b().abs() < 0.3 {
            continue;
        }
        let once = apply_lct_with(&psi, &t21, LctMethod::ChirpZ)?.scaled(Complex64::new(composition_sign(&t2, &t1)?, 0.0));
        let twice = apply_lct_with(&apply_lct_with(&psi, &t1, LctMethod::ChirpZ)?, &t2, LctMethod::ChirpZ)?;
        cascade = cascade.max(twice.relative_l2_error(&once)?);
        tried += 1;
    }

    let tau = 1.3;
    let g = TimeGrid::centered_span(4096, 12.0 * tau, tau)?;
    let modes = (0..=10).map(|n| HGMode::centered(n, tau).map(|m| m.sample(&g))).collect::<Result<Vec<_>>>()?;
    let mut ortho = 0f64;
    for (n, a) in modes.iter().enumerate() {
        for (m, b) in modes.iter().enumerate() {
            let want = if n == m { 1.0 } else { 0.0 };
            ortho = ortho.max((overlap(a, b)? - want).norm());
        }
    }
    done(
        completeness < AC11_COMPLETENESS_TOL
            && energy < AC11_ENERGY_TOL
            && cascade < AC11_CASCADE_TOL
            && ortho < AC11_ORTHO_TOL,
        format!("completeness {completeness:.1e}, pass energy {energy:.1e}, cascade {cascade:.1e}, HG ortho {ortho:.1e}"),
    )
}
