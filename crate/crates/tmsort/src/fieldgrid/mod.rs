//! Sampled complex envelopes on uniform time grids and the transforms acting on them.
//!
//! Spectra use `a(Ω) = ∫ A(t) e^{iΩt} dt`, discretized as `Σ_k A_k e^{iΩ t_k} dt`.

mod io;
mod lct;

pub use io::{read_csv, write_csv};
pub use lct::{
    apply_frft, apply_frft_with, apply_lct, apply_lct_with, composition_sign, fourier_z4, time_invert, z8, LctMethod, LctPlan,
};

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{ensure_positive, Error, Result};

/// Degeneracy threshold on `|b|`, in units of the grid's declared mode scale squared.
pub const B_MIN_REL: f64 = 1e-9;

/// Relative norm change above which a transform reports a window overflow.
pub const WINDOW_OVERFLOW_TOL: f64 = 1e-6;

/// Uniform time grid `t_k = t_start + k·dt`, `k = 0..n_points`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub t_start: f64,
    pub dt: f64,
    pub n_points: usize,
    /// Declared mode scale τ_ref (ps); sets the degeneracy threshold.
    pub scale: f64,
}

impl TimeGrid {
    pub fn new(t_start: f64, dt: f64, n_points: usize, scale: f64) -> Result<Self> {
        ensure_positive("dt", dt)?;
        ensure_positive("scale", scale)?;
        if !t_start.is_finite() {
            return Err(Error::InvalidParameter("t_start must be finite".into()));
        }
        if n_points < 2 {
            return Err(Error::InvalidParameter("a grid needs at least two points".into()));
        }
        Ok(Self { t_start, dt, n_points, scale })
    }

    /// Grid symmetric about zero: `t_k = (k - (n-1)/2)·dt`.
    pub fn centered(n_points: usize, dt: f64, scale: f64) -> Result<Self> {
        Self::new(-0.5 * (n_points as f64 - 1.0) * dt, dt, n_points, scale)
    }

    /// Symmetric grid whose end points sit at `±half_span`.
    pub fn centered_span(n_points: usize, half_span: f64, scale: f64) -> Result<Self> {
        ensure_positive("half_span", half_span)?;
        if n_points < 2 {
            return Err(Error::InvalidParameter("a grid needs at least two points".into()));
        }
        Self::centered(n_points, 2.0 * half_span / (n_points as f64 - 1.0), scale)
    }

    /// Default oracle grid for Hermite-Gauss modes up to `n_max`: ±12τ√(n_max+1).
    pub fn for_modes(tau: f64, n_max: usize, n_points: usize) -> Result<Self> {
        Self::centered_span(n_points, 12.0 * tau * ((n_max + 1) as f64).sqrt(), tau)
    }

    pub fn t(&self, k: usize) -> f64 {
        self.t_start + k as f64 * self.dt
    }

    pub fn t_end(&self) -> f64 {
        self.t(self.n_points - 1)
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.n_points).map(|k| self.t(k)).collect()
    }

    pub fn span(&self) -> f64 {
        self.t_end() - self.t_start
    }

    /// True when the grid is mirror-symmetric about `t = 0`.
    pub fn is_symmetric(&self) -> bool {
        (self.t_start + self.t_end()).abs() <= 1e-9 * self.dt
    }

    /// True when the span is at least eight times `width`.
    pub fn covers(&self, width: f64) -> bool {
        self.span() >= 8.0 * width
    }

    pub fn b_min(&self) -> f64 {
        B_MIN_REL * self.scale * self.scale
    }

    pub fn same_as(&self, other: &Self) -> bool {
        self.n_points == other.n_points
            && (self.dt - other.dt).abs() <= 1e-12 * self.dt
            && (self.t_start - other.t_start).abs() <= 1e-9 * self.dt
    }

    /// Angular frequencies of the discrete spectrum in FFT order.
    pub fn omegas_fft_order(&self) -> Vec<f64> {
        let n = self.n_points;
        let d_omega = 2.0 * PI / (n as f64 * self.dt);
        (0..n)
            .map(|m| {
                let mm = if m < n.div_ceil(2) { m as f64 } else { m as f64 - n as f64 };
                mm * d_omega
            })
            .collect()
    }

    pub(crate) fn check_same(&self, other: &Self) -> Result<()> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(Error::IncompatibleGrid(format!("{self:?} vs {other:?}")))
        }
    }
}

/// Complex envelope samples on a [`TimeGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct SampledEnvelope {
    pub grid: TimeGrid,
    pub samples: Vec<Complex64>,
}

/// Discrete spectrum sorted by ascending angular frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub omegas: Vec<f64>,
    pub values: Vec<Complex64>,
}

impl SampledEnvelope {
    pub fn new(grid: TimeGrid, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != grid.n_points {
            return Err(Error::IncompatibleGrid(format!(
                "{} samples for a {}-point grid",
                samples.len(),
                grid.n_points
            )));
        }
        Ok(Self { grid, samples })
    }

    pub fn from_fn<F: Fn(f64) -> Complex64>(grid: TimeGrid, f: F) -> Self {
        let samples = (0..grid.n_points).map(|k| f(grid.t(k))).collect();
        Self { grid, samples }
    }

    pub fn zeros(grid: TimeGrid) -> Self {
        Self { grid, samples: vec![Complex64::new(0.0, 0.0); grid.n_points] }
    }

    pub fn norm_sq(&self) -> f64 {
        self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.dt
    }

    /// `Σ conj(self)·other·dt`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.grid.check_same(&other.grid)?;
        let s: Complex64 = self.samples.iter().zip(&other.samples).map(|(f, g)| f.conj() * g).sum();
        Ok(s * self.grid.dt)
    }

    /// `‖self - reference‖ / ‖reference‖`.
    pub fn relative_l2_error(&self, reference: &Self) -> Result<f64> {
        reference.grid.check_same(&self.grid)?;
        let num: f64 = self.samples.iter().zip(&reference.samples).map(|(a, b)| (a - b).norm_sqr()).sum();
        let den: f64 = reference.samples.iter().map(|z| z.norm_sqr()).sum();
        Ok((num / den).sqrt())
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self { grid: self.grid, samples: self.samples.iter().map(|z| z * c).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.grid.check_same(&other.grid)?;
        let samples = self.samples.iter().zip(&other.samples).map(|(a, b)| a + b).collect();
        Ok(Self { grid: self.grid, samples })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scaled(Complex64::new(-1.0, 0.0)))
    }

    /// Bandlimited (Whittaker) interpolation at an arbitrary time.
    pub fn interpolate(&self, t: f64) -> Complex64 {
        let x = (t - self.grid.t_start) / self.grid.dt;
        let nearest = x.round();
        if (x - nearest).abs() < 1e-12 && nearest >= 0.0 && nearest < self.grid.n_points as f64 {
            return self.samples[nearest as usize];
        }
        self.samples
            .iter()
            .enumerate()
            .map(|(k, a)| a * crate::numerics::sinc(PI * (x - k as f64)))
            .sum()
    }

    /// Discrete spectrum `a(Ω_m) = Σ_k A_k e^{iΩ_m t_k} dt`, sorted by Ω.
    pub fn spectrum(&self) -> Spectrum {
        let n = self.grid.n_points;
        let mut buf = self.samples.clone();
        FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
        let omegas = self.grid.omegas_fft_order();
        let mut pairs: Vec<(f64, Complex64)> = omegas
            .iter()
            .zip(&buf)
            .map(|(&w, &v)| (w, v * Complex64::from_polar(self.grid.dt, w * self.grid.t_start)))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        Spectrum { omegas: pairs.iter().map(|p| p.0).collect(), values: pairs.iter().map(|p| p.1).collect() }
    }

    /// Standard deviation of the intensity `|A(t)|²`.
    pub fn intensity_std(&self) -> f64 {
        weighted_std(&self.grid.times(), &self.samples)
    }

    /// Standard deviation of the intensity spectrum `|a(Ω)|²`.
    pub fn spectral_std(&self) -> f64 {
        let s = self.spectrum();
        weighted_std(&s.omegas, &s.values)
    }

    /// Fraction of the norm carried by the outer `frac` of the grid on each side.
    pub fn edge_energy_fraction(&self, frac: f64) -> f64 {
        let n = self.grid.n_points;
        let m = ((frac * n as f64).ceil() as usize).min(n / 2);
        let total: f64 = self.samples.iter().map(|z| z.norm_sqr()).sum();
        if total == 0.0 {
            return 0.0;
        }
        let edge: f64 = self.samples[..m].iter().chain(&self.samples[n - m..]).map(|z| z.norm_sqr()).sum();
        edge / total
    }

    /// Fraction of the spectral power in the outer `frac` of the Nyquist band on each side.
    pub fn spectral_edge_fraction(&self, frac: f64) -> f64 {
        let s = self.spectrum();
        let w_max = s.omegas.iter().fold(0f64, |m, w| m.max(w.abs()));
        let total: f64 = s.values.iter().map(|z| z.norm_sqr()).sum();
        if total == 0.0 {
            return 0.0;
        }
        let edge: f64 = s
            .omegas
            .iter()
            .zip(&s.values)
            .filter(|(w, _)| w.abs() > (1.0 - frac) * w_max)
            .map(|(_, v)| v.norm_sqr())
            .sum();
        edge / total
    }
}

fn weighted_std(x: &[f64], v: &[Complex64]) -> f64 {
    let (mut w, mut m1, mut m2) = (0.0, 0.0, 0.0);
    for (&xi, vi) in x.iter().zip(v) {
        let p = vi.norm_sqr();
        w += p;
        m1 += p * xi;
        m2 += p * xi * xi;
    }
    let mean = m1 / w;
    (m2 / w - mean * mean).max(0.0).sqrt()
}

/// Returns an error when `after` lost or gained more than [`WINDOW_OVERFLOW_TOL`] of the norm of `before`.
pub fn check_window(before: &SampledEnvelope, after: &SampledEnvelope) -> Result<()> {
    let n0 = before.norm_sq();
    if n0 == 0.0 {
        return Ok(());
    }
    let fraction = (1.0 - after.norm_sq() / n0).abs();
    if fraction > WINDOW_OVERFLOW_TOL {
        Err(Error::WindowOverflow { fraction })
    } else {
        Ok(())
    }
}

/// Group-delay dispersion `D`: multiplies the spectrum by `e^{iDΩ²/2}`.
pub fn disperse(env: &SampledEnvelope, d: f64) -> SampledEnvelope {
    if d == 0.0 {
        return env.clone();
    }
    let n = env.grid.n_points;
    let mut planner = FftPlanner::new();
    let mut buf = env.samples.clone();
    planner.plan_fft_forward(n).process(&mut buf);
    // The phase factor is even in Ω, so the transform sign convention drops out.
    for (z, w) in buf.iter_mut().zip(env.grid.omegas_fft_order()) {
        *z *= Complex64::from_polar(1.0 / n as f64, 0.5 * d * w * w);
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    SampledEnvelope { grid: env.grid, samples: buf }
}

/// Time lens: multiplies the envelope by `e^{it²/2Df}`.
pub fn apply_lens(env: &SampledEnvelope, df: f64) -> Result<SampledEnvelope> {
    if df == 0.0 || !df.is_finite() {
        return Err(Error::InvalidParameter(format!("focal GDD must be finite and nonzero, got {df}")));
    }
    let samples = env
        .samples
        .iter()
        .enumerate()
        .map(|(k, a)| {
            let t = env.grid.t(k);
            a * Complex64::from_polar(1.0, t * t / (2.0 * df))
        })
        .collect();
    Ok(SampledEnvelope { grid: env.grid, samples })
}

/// Temporal-axial phase `Φ = -arg(A_D(0)/A_in(0))` of a Gaussian `e^{-t²/2τ0²}` after each dispersion in `d_list`.
///
/// With the field written as `e^{-iΦ}·(...)`, this equals `-½ arctan(D/τ0²)`.
pub fn axial_phase_trace(tau0: f64, d_list: &[f64]) -> Result<Vec<f64>> {
    ensure_positive("tau0", tau0)?;
    let d_max = d_list.iter().fold(0f64, |m, d| m.max(d.abs()));
    let width = tau0 * (1.0 + (d_max / (tau0 * tau0)).powi(2)).sqrt();
    let half = 10.0 * width;
    let mut n = ((2.0 * half / (0.2 * tau0)).ceil() as usize).max(1025);
    if n % 2 == 0 {
        n += 1;
    }
    let grid = TimeGrid::centered_span(n, half, tau0)?;
    let input = SampledEnvelope::from_fn(grid, |t| Complex64::new((-t * t / (2.0 * tau0 * tau0)).exp(), 0.0));
    let mid = n / 2;
    Ok(d_list
        .iter()
        .map(|&d| {
            let out = disperse(&input, d);
            -(out.samples[mid] / input.samples[mid]).arg()
        })
        .collect())
}
