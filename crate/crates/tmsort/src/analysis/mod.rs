//! Outcome probabilities of parity and modulo-4 sorting of a biphoton, the closed-form
//! modulo-4 error terms with their quadrature oracle, and the Gaussian FrFT trace.

mod operators;
mod trace;

pub use operators::{apply_adjoint, apply_op, inner, KernelOperator, OperatorKind};
pub use trace::{
    aperture_tau_min, gaussian_frft_trace, gaussian_frft_trace_numeric, gaussian_trace, trace_grid, TraceReport,
};

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_2, PI};

use crate::error::{ensure_positive, Error, Result};
use crate::fieldgrid::TimeGrid;
use crate::numerics::{erf, golden_section, sine_integral};
use crate::spdc::{jta_exact_centered_on, JointAmplitude, SPDCParams};

/// Grid points per axis for POVM quadrature.
pub const POVM_POINTS: usize = 768;

/// Search interval for τ/√(τ_oτ_p).
pub const TAU_RATIO_RANGE: (f64, f64) = (0.3, 3.0);

/// Golden-section tolerance in τ/√(τ_oτ_p).
pub const TAU_RATIO_TOL: f64 = 1e-4;

/// Probabilities keyed by outcome pairs, normalized by the kernel's squared norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityTable {
    pub labels: Vec<(i32, i32)>,
    pub values: Vec<f64>,
    /// Squared norm used for normalization.
    pub norm: f64,
}

impl ProbabilityTable {
    pub fn get(&self, a: i32, b: i32) -> Option<f64> {
        self.labels.iter().position(|&l| l == (a, b)).map(|i| self.values[i])
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Same-parity cross-talk `(P02 + P20)/P` of a modulo-4 table.
    pub fn p_even(&self) -> f64 {
        self.get(0, 2).unwrap_or(0.0) + self.get(2, 0).unwrap_or(0.0)
    }

    /// `(P13 + P31)/P` of a modulo-4 table.
    pub fn p_odd(&self) -> f64 {
        self.get(1, 3).unwrap_or(0.0) + self.get(3, 1).unwrap_or(0.0)
    }

    pub fn p_tot(&self) -> f64 {
        self.p_even() + self.p_odd()
    }
}

/// Detection settings; `half_window` restricts the detected norm to `|t|, |t'| ≤ half_window`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct PovmOptions {
    pub half_window: Option<f64>,
}

fn require_symmetric(j: &JointAmplitude) -> Result<()> {
    if !j.t_grid.is_symmetric() || !j.tprime_grid.is_symmetric() {
        return Err(Error::IncompatibleGrid("POVM evaluation needs grids symmetric about zero".into()));
    }
    Ok(())
}

fn mask<'a>(j: &'a JointAmplitude, opts: &PovmOptions) -> impl Fn(usize, usize) -> bool + 'a {
    let h = opts.half_window;
    move |a, b| match h {
        None => true,
        Some(w) => j.t_grid.t(a).abs() <= w && j.tprime_grid.t(b).abs() <= w,
    }
}

/// `‖(Z2 + j)(Z2' + k) Y‖²` over the detection window, without the cell factor.
fn parity_projected_norm(y: &Array2<Complex64>, j: f64, k: f64, inside: &impl Fn(usize, usize) -> bool) -> f64 {
    let (n, m) = y.dim();
    let mut s = 0.0;
    for a in 0..n {
        let ra = n - 1 - a;
        for b in 0..m {
            if !inside(a, b) {
                continue;
            }
            let rb = m - 1 - b;
            let x = y[[ra, rb]] + k * y[[ra, b]] + j * y[[a, rb]] + j * k * y[[a, b]];
            s += x.norm_sqr();
        }
    }
    s
}

const SIGNS: [f64; 2] = [1.0, -1.0];

pub fn parity_probs(j0: &JointAmplitude) -> Result<ProbabilityTable> {
    parity_probs_with(j0, &PovmOptions::default())
}

/// `P_jk = ‖¼(Z2 + j)(Z2' + k) J0‖² / ‖J0‖²`, labels `(j, k)` with `j, k = ±1`.
pub fn parity_probs_with(j0: &JointAmplitude, opts: &PovmOptions) -> Result<ProbabilityTable> {
    require_symmetric(j0)?;
    let norm = j0.norm_sq();
    let inside = mask(j0, opts);
    let mut labels = Vec::new();
    let mut values = Vec::new();
    for j in SIGNS {
        for k in SIGNS {
            labels.push((j as i32, k as i32));
            values.push(parity_projected_norm(&j0.values, j, k, &inside) / 16.0 * j0.cell() / norm);
        }
    }
    Ok(ProbabilityTable { labels, values, norm })
}

/// Mode index `u` of the interference signs `(j, l)`: (+1,+1)→0, (-1,-1)→1, (+1,-1)→2, (-1,+1)→3.
pub fn mode_label(j: f64, l: f64) -> i32 {
    match (j > 0.0, l > 0.0) {
        (true, true) => 0,
        (false, false) => 1,
        (true, false) => 2,
        (false, true) => 3,
    }
}

fn rho(j: f64) -> Complex64 {
    if j > 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        Complex64::new(0.0, 1.0)
    }
}

pub fn mod4_probs(j0: &JointAmplitude, tau: f64) -> Result<ProbabilityTable> {
    mod4_probs_with(j0, tau, &PovmOptions::default())
}

/// `P_uv = ‖Q_uv J0‖² / ‖J0‖²` with `Q_uv = (1/16)(Z2 + j)(Z2' + k)(ρ_j Z4 + l)(ρ_k Z4' + m)`,
/// expanded by applying the operators in sequence.
pub fn mod4_probs_with(j0: &JointAmplitude, tau: f64, opts: &PovmOptions) -> Result<ProbabilityTable> {
    require_symmetric(j0)?;
    let z4 = apply_op(&KernelOperator::new(OperatorKind::Z4, tau), j0)?;
    let z4p = apply_op(&KernelOperator::new(OperatorKind::Z4Prime, tau), j0)?;
    let z44 = apply_op(&KernelOperator::new(OperatorKind::Z4, tau), &z4p)?;
    let norm = j0.norm_sq();
    let inside = mask(j0, opts);
    let mut labels = Vec::new();
    let mut values = Vec::new();
    for j in SIGNS {
        for l in SIGNS {
            for k in SIGNS {
                for m in SIGNS {
                    let (rj, rk) = (rho(j), rho(k));
                    let y = &z44.values * (rj * rk) + &z4.values * (rj * m) + &z4p.values * (rk * l)
                        + &j0.values * Complex64::new(l * m, 0.0);
                    let p = parity_projected_norm(&y, j, k, &inside) / 256.0 * j0.cell() / norm;
                    labels.push((mode_label(j, l), mode_label(k, m)));
                    values.push(p);
                }
            }
        }
    }
    Ok(ProbabilityTable { labels, values, norm })
}

/// Grid matched to the discrete Fourier transform at scale τ: `dt = τ√(2π/N)`, centered.
pub fn povm_grid(tau: f64, n: usize) -> Result<TimeGrid> {
    ensure_positive("tau", tau)?;
    TimeGrid::centered(n, tau * (2.0 * PI / n as f64).sqrt(), tau)
}

/// Fourier-matched grid with `N` in `[n_target, 5n_target/4)` chosen so the rectangle edges
/// `|t - t'| = 2τ_o` fall as close as possible to the midpoint between grid differences.
pub fn povm_grid_aligned(params: &SPDCParams, tau: f64, n_target: usize) -> Result<TimeGrid> {
    ensure_positive("tau", tau)?;
    if n_target < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 points, got {n_target}")));
    }
    let offset = |n: usize| {
        let x = 2.0 * params.tau_o / (tau * (2.0 * PI / n as f64).sqrt());
        (x.fract() - 0.5).abs()
    };
    let n = (n_target..n_target + n_target.div_ceil(4))
        .min_by(|&a, &b| offset(a).total_cmp(&offset(b)))
        .unwrap_or(n_target);
    povm_grid(tau, n)
}

/// Half-span `max(2.8/Ω_p, 4.5τ_o, 3.5τ²Ω_p)` of the oracle grid.
pub fn oracle_half_span(params: &SPDCParams, tau: f64) -> f64 {
    let op = params.omega_p();
    (2.8 / op).max(4.5 * params.tau_o).max(3.5 * tau * tau * op)
}

/// Centered grid whose spacing divides `2τ_o`, so the rectangle edges of the exact kernel
/// fall on grid differences.
pub fn oracle_grid(params: &SPDCParams, tau: f64, n: usize) -> Result<TimeGrid> {
    ensure_positive("tau", tau)?;
    let nominal = 2.0 * oracle_half_span(params, tau) / (n as f64 - 1.0);
    let steps = (2.0 * params.tau_o / nominal).ceil();
    TimeGrid::centered(n, 2.0 * params.tau_o / steps, tau)
}

/// Modulo-4 error terms by 2D quadrature of the exact zero-centered kernel, normalized by the
/// analytic `P_b'`:
/// `p1 = (J0|1 - Z2 Z4 Z4'|J0)/8P_b'`, `p2 = (J0|Z2 - Z4 Z4'|J0)/8P_b'`.
pub fn p1p2_quadrature(params: &SPDCParams, tau: f64, n: usize) -> Result<(f64, f64)> {
    let grid = oracle_grid(params, tau, n)?;
    let j0 = jta_exact_centered_on(params, grid)?;
    let pb = params.pb_exact()?;
    let z4p = apply_op(&KernelOperator::new(OperatorKind::Z4Prime, tau), &j0)?;
    let f = apply_op(&KernelOperator::new(OperatorKind::Z4, tau), &z4p)?;
    let z2 = KernelOperator::new(OperatorKind::Z2, tau);
    let zf = apply_op(&z2, &f)?;
    let zj = apply_op(&z2, &j0)?;
    let p1 = (pb - inner(&j0, &zf)?.re) / (8.0 * pb);
    let p2 = (inner(&j0, &zj)?.re - inner(&j0, &f)?.re) / (8.0 * pb);
    Ok((p1, p2))
}

/// Closed-form `p1`; a function of `τ²/(τ_oτ_p)` only.
pub fn p1_analytic(tau: f64, tau_o: f64, tau_p: f64) -> f64 {
    let x2 = tau * tau / (tau_o * tau_p);
    let e = erf(1.0 / ((2.0 * LN_2).sqrt() * x2));
    (1.0 - (PI * LN_2).sqrt() * x2 * e * e) / 8.0
}

/// Closed-form `p2`.
pub fn p2_analytic(tau: f64, tau_o: f64, tau_p: f64) -> f64 {
    let e = erf((2.0 * LN_2).sqrt() * tau_o / tau_p);
    let first = (PI / (4.0 * LN_2)).sqrt() * tau_p / tau_o * e * e;
    let root = (1.0 + (2.0 * LN_2).powi(2) * tau.powi(4) / tau_p.powi(4)).sqrt();
    let second = (4.0 * LN_2 / PI).sqrt() * tau * tau / (tau_o * tau_p * root)
        * sine_integral(2.0 * tau_o * tau_o / (tau * tau));
    (first - second) / 8.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PtotOptimum {
    pub tau_star: f64,
    /// `τ*/√(τ_oτ_p)`.
    pub ratio: f64,
    pub ptot_star: f64,
}

/// Minimizes `p_tot = 4 p1` over `τ/√(τ_oτ_p) ∈ [0.3, 3]`.
pub fn optimize_ptot(tau_o: f64, tau_p: f64) -> Result<PtotOptimum> {
    ensure_positive("tau_o", tau_o)?;
    ensure_positive("tau_p", tau_p)?;
    let s = (tau_o * tau_p).sqrt();
    let m = golden_section(|r| 4.0 * p1_analytic(r * s, tau_o, tau_p), TAU_RATIO_RANGE.0, TAU_RATIO_RANGE.1, TAU_RATIO_TOL);
    Ok(PtotOptimum { tau_star: m.x * s, ratio: m.x, ptot_star: m.value })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvenOddSplit {
    pub tau: f64,
    pub p1: f64,
    pub p2: f64,
    pub p_even: f64,
    pub p_odd: f64,
}

impl EvenOddSplit {
    fn from_p(tau: f64, p1: f64, p2: f64) -> Self {
        Self { tau, p1, p2, p_even: 2.0 * (p1 + p2), p_odd: 2.0 * (p1 - p2) }
    }

    pub fn p_tot(&self) -> f64 {
        self.p_even + self.p_odd
    }
}

/// Even and odd cross-talk `2(p1 ± p2)` at the optimal τ.
pub fn even_odd_split(tau_o: f64, tau_p: f64) -> Result<EvenOddSplit> {
    let tau = optimize_ptot(tau_o, tau_p)?.tau_star;
    Ok(EvenOddSplit::from_p(tau, p1_analytic(tau, tau_o, tau_p), p2_analytic(tau, tau_o, tau_p)))
}

/// Quadrature counterpart of [`even_odd_split`] at a given τ.
pub fn even_odd_quadrature(params: &SPDCParams, tau: f64, n: usize) -> Result<EvenOddSplit> {
    let (p1, p2) = p1p2_quadrature(params, tau, n)?;
    Ok(EvenOddSplit::from_p(tau, p1, p2))
}
