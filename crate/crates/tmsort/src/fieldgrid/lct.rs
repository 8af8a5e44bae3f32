use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::Arc;

use super::{check_window, SampledEnvelope, TimeGrid};
use crate::error::{ensure_positive, Error, Result};
use crate::raymatrix::{compose, frft_matrix, TemporalRayMatrix};

/// Discretization of the LCT integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LctMethod {
    /// Direct O(N²) quadrature of the kernel (reference).
    #[default]
    Quadrature,
    /// Chirp × convolution × chirp via FFT, O(N log N).
    ChirpZ,
}

/// Largest grid for which the quadrature kernel is stored as a dense matrix.
const DENSE_LIMIT: usize = 2048;

/// A transform precomputed for one grid; maps a sample vector to a sample vector on the same grid.
#[derive(Clone)]
pub struct LctPlan {
    grid: TimeGrid,
    kind: PlanKind,
}

#[derive(Clone)]
enum PlanKind {
    /// `out(t) = factor · e^{i·chirp·t²} · A(t·stretch)`.
    Delta { factor: Complex64, chirp: f64, stretch: f64 },
    Dense { kernel: Vec<Complex64> },
    Direct { pre: Complex64, a: f64, b: f64, d: f64 },
    Chirp {
        pre: Vec<Complex64>,
        post: Vec<Complex64>,
        kernel_hat: Vec<Complex64>,
        fft: Arc<dyn Fft<f64>>,
        ifft: Arc<dyn Fft<f64>>,
    },
}

impl std::fmt::Debug for LctPlan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let kind = match &self.kind {
            PlanKind::Delta { .. } => "delta",
            PlanKind::Dense { .. } => "dense",
            PlanKind::Direct { .. } => "direct",
            PlanKind::Chirp { .. } => "chirp",
        };
        f.debug_struct("LctPlan").field("grid", &self.grid).field("kind", &kind).finish()
    }
}

impl LctPlan {
    /// Plan for the kernel of `t`; `|b| ≤ b_min` takes the delta-kernel path.
    pub fn new(grid: &TimeGrid, t: &TemporalRayMatrix, method: LctMethod) -> Result<Self> {
        Self::with_phase(grid, t, method, Complex64::new(1.0, 0.0))
    }

    /// Fractional Fourier transform of angle `gamma`, including the `e^{iγ/2}` kernel phase.
    pub fn frft(grid: &TimeGrid, gamma: f64, tau: f64, method: LctMethod) -> Result<Self> {
        ensure_positive("tau", tau)?;
        let b = tau * tau * gamma.sin();
        if b.abs() <= grid.b_min() {
            // γ = πm: e^{iγ/2}·√((-1)^m)·δ(t - (-1)^m t'), with √((-1)^m) = e^{-iπm/2}.
            let m = (gamma / PI).round();
            let factor = Complex64::from_polar(1.0, 0.5 * (gamma - PI * m));
            let stretch = if (m as i64).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            return Ok(Self { grid: *grid, kind: PlanKind::Delta { factor, chirp: 0.0, stretch } });
        }
        Self::with_phase(grid, &frft_matrix(gamma, tau)?, method, Complex64::from_polar(1.0, 0.5 * gamma))
    }

    fn with_phase(grid: &TimeGrid, t: &TemporalRayMatrix, method: LctMethod, phase: Complex64) -> Result<Self> {
        let (a, b, c, d) = (t.a(), t.b(), t.c(), t.d());
        if b.abs() <= grid.b_min() {
            return Self::degenerate(grid, a, b, c, phase);
        }
        let n = grid.n_points;
        let h = grid.dt;
        let pre = phase * h / Complex64::new(0.0, 2.0 * PI * b).sqrt();
        let kind = match method {
            LctMethod::Quadrature if n <= DENSE_LIMIT => {
                let ts = grid.times();
                let kernel = (0..n * n)
                    .into_par_iter()
                    .map(|idx| {
                        let (tj, tk) = (ts[idx / n], ts[idx % n]);
                        pre * Complex64::from_polar(1.0, (d * tj * tj - 2.0 * tj * tk + a * tk * tk) / (2.0 * b))
                    })
                    .collect();
                PlanKind::Dense { kernel }
            }
            LctMethod::Quadrature => PlanKind::Direct { pre, a, b, d },
            LctMethod::ChirpZ => {
                let len = (2 * n - 1).next_power_of_two();
                let mut planner = FftPlanner::new();
                let fft = planner.plan_fft_forward(len);
                let ifft = planner.plan_fft_inverse(len);
                let mut kernel_hat = vec![Complex64::new(0.0, 0.0); len];
                for m in 0..n {
                    let g = Complex64::from_polar(1.0 / len as f64, h * h * (m * m) as f64 / (2.0 * b));
                    kernel_hat[m] = g;
                    if m > 0 {
                        kernel_hat[len - m] = g;
                    }
                }
                fft.process(&mut kernel_hat);
                let pre_v = (0..n)
                    .map(|j| {
                        let tj = grid.t(j);
                        pre * Complex64::from_polar(1.0, (d - 1.0) * tj * tj / (2.0 * b))
                    })
                    .collect();
                let post = (0..n)
                    .map(|k| {
                        let tk = grid.t(k);
                        Complex64::from_polar(1.0, (a - 1.0) * tk * tk / (2.0 * b))
                    })
                    .collect();
                PlanKind::Chirp { pre: pre_v, post, kernel_hat, fft, ifft }
            }
        };
        Ok(Self { grid: *grid, kind })
    }

    fn degenerate(grid: &TimeGrid, a: f64, b: f64, c: f64, phase: Complex64) -> Result<Self> {
        // K = √a e^{ict²/2a} δ(t - a t'), so A_out(t) = (√a/|a|) e^{ict²/2a} A(t/a).
        let root = if a > 0.0 {
            Complex64::new(1.0 / a.sqrt(), 0.0)
        } else if (a + 1.0).abs() <= 1e-12 {
            // b → 0⁺ selects -i, b → 0⁻ selects +i; b = 0 exactly uses the principal root i.
            if b > 0.0 {
                Complex64::new(0.0, -1.0)
            } else {
                Complex64::new(0.0, 1.0)
            }
        } else {
            return Err(Error::UnsupportedDegenerate { a, b });
        };
        Ok(Self { grid: *grid, kind: PlanKind::Delta { factor: phase * root, chirp: c / (2.0 * a), stretch: 1.0 / a } })
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    /// Applies the plan to a sample vector of the plan's grid length.
    pub fn apply(&self, input: &[Complex64]) -> Vec<Complex64> {
        let n = self.grid.n_points;
        assert_eq!(input.len(), n, "sample vector length does not match the plan grid");
        match &self.kind {
            PlanKind::Delta { factor, chirp, stretch } => {
                let g = &self.grid;
                let resampled: Vec<Complex64> = if *stretch == 1.0 {
                    input.to_vec()
                } else if *stretch == -1.0 && g.is_symmetric() {
                    input.iter().rev().copied().collect()
                } else {
                    let env = SampledEnvelope { grid: *g, samples: input.to_vec() };
                    (0..n).into_par_iter().map(|j| env.interpolate(g.t(j) * stretch)).collect()
                };
                resampled
                    .iter()
                    .enumerate()
                    .map(|(j, v)| {
                        let t = g.t(j);
                        factor * Complex64::from_polar(1.0, chirp * t * t) * v
                    })
                    .collect()
            }
            PlanKind::Dense { kernel } => kernel
                .par_chunks(n)
                .map(|row| row.iter().zip(input).map(|(k, x)| k * x).sum())
                .collect(),
            PlanKind::Direct { pre, a, b, d } => {
                let ts = self.grid.times();
                (0..n)
                    .into_par_iter()
                    .map(|j| {
                        let tj = ts[j];
                        let s: Complex64 = ts
                            .iter()
                            .zip(input)
                            .map(|(tk, x)| x * Complex64::from_polar(1.0, (d * tj * tj - 2.0 * tj * tk + a * tk * tk) / (2.0 * b)))
                            .sum();
                        pre * s
                    })
                    .collect()
            }
            PlanKind::Chirp { pre, post, kernel_hat, fft, ifft } => {
                let len = kernel_hat.len();
                let mut buf = vec![Complex64::new(0.0, 0.0); len];
                for k in 0..n {
                    buf[k] = input[k] * post[k];
                }
                fft.process(&mut buf);
                for (x, g) in buf.iter_mut().zip(kernel_hat) {
                    *x *= g;
                }
                ifft.process(&mut buf);
                (0..n).map(|j| pre[j] * buf[j]).collect()
            }
        }
    }

    pub fn apply_env(&self, env: &SampledEnvelope) -> Result<SampledEnvelope> {
        self.grid.check_same(&env.grid)?;
        Ok(SampledEnvelope { grid: env.grid, samples: self.apply(&env.samples) })
    }
}

/// LCT with the kernel of `t` by direct quadrature; reports window overflow.
pub fn apply_lct(env: &SampledEnvelope, t: &TemporalRayMatrix) -> Result<SampledEnvelope> {
    apply_lct_with(env, t, LctMethod::Quadrature)
}

pub fn apply_lct_with(env: &SampledEnvelope, t: &TemporalRayMatrix, method: LctMethod) -> Result<SampledEnvelope> {
    let out = LctPlan::new(&env.grid, t, method)?.apply_env(env)?;
    check_window(env, &out)?;
    Ok(out)
}

/// Sign `s` in `∫ K_{T2}(t,t'')K_{T1}(t'',t')dt'' = s·K_{T2T1}(t,t')` for the principal-branch
/// prefactor `(2πib)^{-1/2}`; the kernels compose up to this metaplectic sign.
pub fn composition_sign(t2: &TemporalRayMatrix, t1: &TemporalRayMatrix) -> Result<f64> {
    let t21 = compose(t2, t1);
    let scale = t21.max_abs_diff(&TemporalRayMatrix::identity()).max(1.0);
    for (name, b) in [("b1", t1.b()), ("b2", t2.b()), ("b21", t21.b())] {
        if b.abs() <= 1e-12 * scale {
            return Err(Error::InvalidParameter(format!("composition sign needs nonzero {name}, got {b}")));
        }
    }
    let i = Complex64::i();
    let alpha = t21.b() / (2.0 * t1.b() * t2.b());
    // Positive factors cancel; the Gaussian integral over t'' contributes (-iα)^{-1/2}.
    let s = (i * t21.b()).sqrt() / ((-i * alpha).sqrt() * (i * t2.b()).sqrt() * (i * t1.b()).sqrt());
    Ok(s.re.signum())
}

/// Fractional Fourier transform of angle `gamma` and scale `tau`; eigenvalue `e^{-iγn}` on Ψ_n.
pub fn apply_frft(env: &SampledEnvelope, gamma: f64, tau: f64) -> Result<SampledEnvelope> {
    apply_frft_with(env, gamma, tau, LctMethod::Quadrature)
}

pub fn apply_frft_with(env: &SampledEnvelope, gamma: f64, tau: f64, method: LctMethod) -> Result<SampledEnvelope> {
    let out = LctPlan::frft(&env.grid, gamma, tau, method)?.apply_env(env)?;
    check_window(env, &out)?;
    Ok(out)
}

/// Z2 gate: `A(t) → A(-t)`.
pub fn time_invert(env: &SampledEnvelope) -> Result<SampledEnvelope> {
    apply_frft(env, -PI, env.grid.scale)
}

/// Z4 gate: FrFT of angle -π/2 (temporal Fourier processor).
pub fn fourier_z4(env: &SampledEnvelope, tau: f64) -> Result<SampledEnvelope> {
    apply_frft(env, -PI / 2.0, tau)
}

/// Z8 gate: FrFT of angle -π/4.
pub fn z8(env: &SampledEnvelope, tau: f64) -> Result<SampledEnvelope> {
    apply_frft(env, -PI / 4.0, tau)
}
