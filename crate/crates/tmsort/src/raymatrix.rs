//! Temporal ray matrices `(a, b; c, d)` with `ad - bc = 1`.
//!
//! Units: `a`, `d` dimensionless, `b` in ps², `c` in ps⁻².

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{ensure_positive, Error, Result};

/// Absolute unimodularity tolerance, scaled by the magnitude of the products `ad` and `bc`.
pub const UNIMODULAR_TOL: f64 = 1e-12;

/// Threshold on `|sin γ|` below which an angle is treated as a multiple of π.
pub const DEGENERATE_SIN_TOL: f64 = 1e-12;

/// Real 2×2 unimodular matrix describing a temporal linear canonical transform.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TemporalRayMatrix {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

/// Parameters of the Hermite-Gauss image law for a matrix and a mode scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GouyParams {
    /// Residual chirp, dimensionless.
    pub alpha: Complex64,
    /// Magnification, `|a + i b/τ²|`.
    pub beta: f64,
    /// Accumulated Gouy phase in `(-π, π]`.
    pub gamma: f64,
}

impl TemporalRayMatrix {
    /// Builds a matrix, rejecting non-finite entries and `|ad - bc - 1|` above tolerance.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        if ![a, b, c, d].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidParameter("matrix entries must be finite".into()));
        }
        let det = a * d - b * c;
        let scale = 1f64.max((a * d).abs()).max((b * c).abs());
        if (det - 1.0).abs() > UNIMODULAR_TOL * scale {
            return Err(Error::NotUnimodular { det });
        }
        Ok(Self { a, b, c, d })
    }

    pub fn identity() -> Self {
        Self { a: 1.0, b: 0.0, c: 0.0, d: 1.0 }
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn entries(&self) -> [[f64; 2]; 2] {
        [[self.a, self.b], [self.c, self.d]]
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    /// Inverse matrix `(d, -b; -c, a)`.
    pub fn inverse(&self) -> Self {
        Self { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    /// Largest absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let (p, q) = (self.entries(), other.entries());
        let mut m: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                m = m.max((p[i][j] - q[i][j]).abs());
            }
        }
        m
    }
}

/// Dispersive propagation with group-delay dispersion `D` (ps²).
pub fn prop(d: f64) -> TemporalRayMatrix {
    TemporalRayMatrix { a: 1.0, b: -d, c: 0.0, d: 1.0 }
}

/// Time lens with focal GDD `Df` (ps²).
pub fn lens(df: f64) -> Result<TemporalRayMatrix> {
    if df == 0.0 || !df.is_finite() {
        return Err(Error::InvalidParameter(format!("focal GDD must be finite and nonzero, got {df}")));
    }
    Ok(TemporalRayMatrix { a: 1.0, b: 0.0, c: 1.0 / df, d: 1.0 })
}

/// Fractional Fourier transform matrix of angle `gamma` and scale `tau`.
pub fn frft_matrix(gamma: f64, tau: f64) -> Result<TemporalRayMatrix> {
    ensure_positive("tau", tau)?;
    let (s, c) = gamma.sin_cos();
    let t2 = tau * tau;
    Ok(TemporalRayMatrix { a: c, b: t2 * s, c: -s / t2, d: c })
}

/// Matrix product `t2 · t1` (apply `t1` first).
pub fn compose(t2: &TemporalRayMatrix, t1: &TemporalRayMatrix) -> TemporalRayMatrix {
    TemporalRayMatrix {
        a: t2.a * t1.a + t2.b * t1.c,
        b: t2.a * t1.b + t2.b * t1.d,
        c: t2.c * t1.a + t2.d * t1.c,
        d: t2.c * t1.b + t2.d * t1.d,
    }
}

/// Gouy parameters of `t` for mode scale `tau`.
///
/// `γ = arg(a + i b/τ²)`; a zero `b` is read as `+0`, so `a < 0, b = 0` gives `γ = π`.
pub fn gouy_params(t: &TemporalRayMatrix, tau: f64) -> Result<GouyParams> {
    ensure_positive("tau", tau)?;
    let t2 = tau * tau;
    let bn = if t.b == 0.0 { 0.0 } else { t.b / t2 };
    let z = Complex64::new(t.a, bn);
    let beta = z.norm();
    let mut gamma = bn.atan2(t.a);
    if gamma <= -PI {
        gamma += 2.0 * PI;
    }
    let lhs = Complex64::new(t.d, -t.c * t2) * z.conj() - 1.0;
    let alpha = lhs / (beta * beta);
    Ok(GouyParams { alpha, beta, gamma })
}

/// Dispersion `D` and focal GDD `Df` of the prop-lens-prop chain equal to `frft_matrix(gamma, tau)`.
pub fn type1_decomposition(gamma: f64, tau: f64) -> Result<(f64, f64)> {
    ensure_positive("tau", tau)?;
    let (s, c) = gamma.sin_cos();
    if s.abs() <= DEGENERATE_SIN_TOL {
        return Err(Error::DegenerateAngle { gamma });
    }
    let df = -tau * tau / s;
    Ok((df * (1.0 - c), df))
}
