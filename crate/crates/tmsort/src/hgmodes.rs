//! Hermite-Gauss temporal modes `Ψ_n(t) = h_n((t - t0)/τ)/√τ` and their images under LCTs.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{ensure_positive, Error, Result};
use crate::fieldgrid::{SampledEnvelope, TimeGrid};
use crate::numerics::gauss_legendre;
use crate::raymatrix::{gouy_params, TemporalRayMatrix};

/// Hermite-Gauss mode of order `n`, scale `tau` (ps), centered at `t0` (ps).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HGMode {
    pub n: usize,
    pub tau: f64,
    pub t0: f64,
}

/// Closed-form image of a centered mode under an LCT.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformedHG {
    pub base: HGMode,
    pub alpha: Complex64,
    pub beta: f64,
    pub gamma: f64,
    /// `e^{-iγ(n+½)}`.
    pub phase: Complex64,
}

/// Normalized Hermite functions `h_0(x) .. h_n(x)` by the three-term recurrence.
pub fn hermite_functions(n: usize, x: f64) -> Vec<f64> {
    let mut h = Vec::with_capacity(n + 1);
    h.push(PI.powf(-0.25) * (-0.5 * x * x).exp());
    if n >= 1 {
        h.push(2f64.sqrt() * x * h[0]);
    }
    for k in 1..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * h[k] - (kf / (kf + 1.0)).sqrt() * h[k - 1];
        h.push(next);
    }
    h
}

/// `h_n(x)`.
pub fn hermite_function(n: usize, x: f64) -> f64 {
    hermite_functions(n, x)[n]
}

impl HGMode {
    pub fn new(n: usize, tau: f64, t0: f64) -> Result<Self> {
        ensure_positive("tau", tau)?;
        if !t0.is_finite() {
            return Err(Error::InvalidParameter("t0 must be finite".into()));
        }
        Ok(Self { n, tau, t0 })
    }

    pub fn centered(n: usize, tau: f64) -> Result<Self> {
        Self::new(n, tau, 0.0)
    }

    pub fn value(&self, t: f64) -> f64 {
        hermite_function(self.n, (t - self.t0) / self.tau) / self.tau.sqrt()
    }

    pub fn sample(&self, grid: &TimeGrid) -> SampledEnvelope {
        SampledEnvelope::from_fn(*grid, |t| Complex64::new(self.value(t), 0.0))
    }
}

/// `Ψ_n(t)`.
pub fn eval(mode: &HGMode, t: f64) -> Complex64 {
    Complex64::new(mode.value(t), 0.0)
}

/// `Σ conj(f)·g·dt` on a shared grid.
pub fn overlap(f: &SampledEnvelope, g: &SampledEnvelope) -> Result<Complex64> {
    f.inner(g)
}

/// `ψ_n(Ω) = ∫ Ψ_n(t) e^{iΩt} dt` by composite Gauss-Legendre quadrature.
pub fn spectrum(mode: &HGMode, omega: f64) -> Complex64 {
    let half = 12.0 * mode.tau * ((mode.n + 1) as f64).sqrt();
    let k_max = omega.abs() + (2.0 * mode.n as f64 + 1.0).sqrt() / mode.tau;
    let panels = ((2.0 * half * k_max / PI).ceil() as usize + 8).max(16);
    let (x, w) = gauss_legendre(20);
    let width = 2.0 * half / panels as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    for p in 0..panels {
        let lo = mode.t0 - half + p as f64 * width;
        for (xi, wi) in x.iter().zip(&w) {
            let t = lo + 0.5 * width * (xi + 1.0);
            sum += Complex64::from_polar(wi * 0.5 * width * mode.value(t), omega * t);
        }
    }
    sum
}

/// Closed-form image of a centered mode under the LCT of `t`.
pub fn lct_image(mode: &HGMode, t: &TemporalRayMatrix) -> Result<TransformedHG> {
    if mode.t0 != 0.0 {
        return Err(Error::UnsupportedInput(format!("image law needs a centered mode, got t0 = {}", mode.t0)));
    }
    let g = gouy_params(t, mode.tau)?;
    let phase = Complex64::from_polar(1.0, -g.gamma * (mode.n as f64 + 0.5));
    Ok(TransformedHG { base: *mode, alpha: g.alpha, beta: g.beta, gamma: g.gamma, phase })
}

impl TransformedHG {
    /// `e^{-iγ(n+½)} (τβ)^{-1/2} h_n(t/τβ) e^{-α(t/τ)²/2}`.
    pub fn eval(&self, t: f64) -> Complex64 {
        let tau = self.base.tau;
        let s = tau * self.beta;
        let x = t / tau;
        let env = hermite_function(self.base.n, t / s) / s.sqrt();
        self.phase * env * (-0.5 * self.alpha * x * x).exp()
    }

    pub fn sample(&self, grid: &TimeGrid) -> SampledEnvelope {
        SampledEnvelope::from_fn(*grid, |t| self.eval(t))
    }
}
