//! Gaussian pulse `e^{-t²/4Δt0²}` through dispersion `D_in` and a time lens of focal GDD `D_f`.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_2, PI};

use crate::error::{ensure_positive, Error, Result};
use crate::fieldgrid::{apply_lens, disperse, SampledEnvelope, TimeGrid};
use crate::raymatrix::{type1_decomposition, DEGENERATE_SIN_TOL};

/// Widths and chirp along the dispersion–lens path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceReport {
    /// Input intensity standard deviation Δt0.
    pub dt0: f64,
    pub d_in: f64,
    /// Focal GDD; infinite for the identity report.
    pub df: f64,
    /// Intensity standard deviation after the dispersion.
    pub dt1: f64,
    /// Input spectral standard deviation `1/2Δt0`.
    pub d_omega0: f64,
    /// Spectral standard deviation after the lens.
    pub d_omega2: f64,
    /// Residual spectral chirp: the output spectrum carries `e^{iD2 Ω²/2}`.
    pub d2: f64,
    /// FWHM `2√(2 ln 2)·Δt1` of the stretched pulse at the lens.
    pub aperture_t1f: f64,
}

fn fwhm(std: f64) -> f64 {
    2.0 * (2.0 * LN_2).sqrt() * std
}

fn identity_report(dt0: f64) -> TraceReport {
    TraceReport {
        dt0,
        d_in: 0.0,
        df: f64::INFINITY,
        dt1: dt0,
        d_omega0: 0.5 / dt0,
        d_omega2: 0.5 / dt0,
        d2: 0.0,
        aperture_t1f: fwhm(dt0),
    }
}

/// Closed-form trace for arbitrary nonzero `d_in` and finite nonzero `df`.
pub fn gaussian_trace(dt0: f64, d_in: f64, df: f64) -> Result<TraceReport> {
    ensure_positive("dt0", dt0)?;
    if d_in == 0.0 || !d_in.is_finite() || df == 0.0 || !df.is_finite() {
        return Err(Error::InvalidParameter(format!("need finite nonzero D_in and D_f, got {d_in}, {df}")));
    }
    let dt1 = (dt0 * dt0 + d_in * d_in / (4.0 * dt0 * dt0)).sqrt();
    let d_omega0 = 0.5 / dt0;
    let big_r = d_in / df;
    let r = 2.0 * dt0 * dt0 / d_in;
    let d_omega2 = d_omega0 * ((1.0 - big_r).powi(2) + r * r * big_r * big_r).sqrt();
    let c1 = d_in + 4.0 * dt0.powi(4) / d_in;
    let c2 = 1.0 / (1.0 / c1 - 1.0 / df);
    let d2 = 1.0 / (c2 / (4.0 * dt1.powi(4)) + 1.0 / c2);
    Ok(TraceReport { dt0, d_in, df, dt1, d_omega0, d_omega2, d2, aperture_t1f: fwhm(dt1) })
}

/// FrFT settings for angle γ at scale `τ = √2Δt0`; `γ ≡ 0 (mod 2π)` gives the identity report.
fn frft_setup(dt0: f64, gamma: f64) -> Result<Option<(f64, f64)>> {
    ensure_positive("dt0", dt0)?;
    if gamma.sin().abs() <= DEGENERATE_SIN_TOL && gamma.cos() > 0.0 {
        return Ok(None);
    }
    type1_decomposition(gamma, 2f64.sqrt() * dt0).map(Some)
}

pub fn gaussian_frft_trace(dt0: f64, gamma: f64) -> Result<TraceReport> {
    match frft_setup(dt0, gamma)? {
        None => Ok(identity_report(dt0)),
        Some((d, df)) => gaussian_trace(dt0, d, df),
    }
}

/// Grid wide enough for the stretched pulse and fine enough for its chirp.
pub fn trace_grid(dt0: f64, gamma: f64) -> Result<TimeGrid> {
    let a = gaussian_frft_trace(dt0, gamma)?;
    let half = 14.0 * a.dt1.max(dt0);
    let n = ((2.0 * half / (0.1 * dt0)).ceil() as usize + 1).next_power_of_two();
    TimeGrid::centered_span(n, half, 2f64.sqrt() * dt0)
}

/// Simulated trace: measures Δt1 after the dispersion, ΔΩ2 after the lens, and fits D2 to the
/// unwrapped output spectral phase by power-weighted least squares.
pub fn gaussian_frft_trace_numeric(dt0: f64, gamma: f64, grid: &TimeGrid) -> Result<TraceReport> {
    let setup = frft_setup(dt0, gamma)?;
    let y0 = SampledEnvelope::from_fn(*grid, |t| Complex64::new((-t * t / (4.0 * dt0 * dt0)).exp(), 0.0));
    let d_omega0 = y0.spectral_std();
    let (d_in, df, y1, y2) = match setup {
        None => (0.0, f64::INFINITY, y0.clone(), y0.clone()),
        Some((d, df)) => {
            let y1 = disperse(&y0, d);
            let y2 = apply_lens(&y1, df)?;
            (d, df, y1, y2)
        }
    };
    let dt1 = y1.intensity_std();
    Ok(TraceReport {
        dt0: y0.intensity_std(),
        d_in,
        df,
        dt1,
        d_omega0,
        d_omega2: y2.spectral_std(),
        d2: fit_spectral_chirp(&y2),
        aperture_t1f: fwhm(dt1),
    })
}

/// `D` in a fit `arg a(Ω) ≈ c0 + c1 Ω + D Ω²/2` weighted by `|a(Ω)|²`.
fn fit_spectral_chirp(env: &SampledEnvelope) -> f64 {
    let s = env.spectrum();
    let peak = s.values.iter().map(|v| v.norm_sqr()).fold(0.0, f64::max);
    let keep: Vec<usize> = (0..s.omegas.len()).filter(|&i| s.values[i].norm_sqr() > 1e-12 * peak).collect();
    let mut phase = Vec::with_capacity(keep.len());
    let mut prev: Option<f64> = None;
    for &i in &keep {
        let mut p = s.values[i].arg();
        if let Some(q) = prev {
            p += 2.0 * PI * ((q - p) / (2.0 * PI)).round();
        }
        phase.push(p);
        prev = Some(p);
    }
    let wsum: f64 = keep.iter().map(|&i| s.values[i].norm_sqr()).sum();
    let center: f64 = keep.iter().map(|&i| s.values[i].norm_sqr() * s.omegas[i]).sum::<f64>() / wsum;
    let mut ata = Matrix3::zeros();
    let mut atb = Vector3::zeros();
    for (&i, &p) in keep.iter().zip(&phase) {
        let w = s.values[i].norm_sqr() / wsum;
        let x = s.omegas[i] - center;
        let row = Vector3::new(1.0, x, 0.5 * x * x);
        ata += w * row * row.transpose();
        atb += w * p * row;
    }
    ata.lu().solve(&atb).map(|c| c[2]).unwrap_or(f64::NAN)
}

/// Smallest scale τ whose Gaussian fits the aperture `D_f Ω_m` of the lens in an FrFT of angle γ.
pub fn aperture_tau_min(gamma: f64, omega_m: f64) -> Result<f64> {
    ensure_positive("Omega_m", omega_m)?;
    Ok(2.0 * (2.0 * LN_2).sqrt() * (1.0 - gamma.cos()).sqrt() / omega_m)
}
