//! Type-II SPDC biphoton kernels in the low-gain regime with linearized dispersion.
//!
//! Times in ps, frequencies in rad/ps. `gain` is the dimensionless product κLα₀.

use nalgebra::DMatrix;
use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_2, PI};
use std::io::Write;

use crate::error::{ensure_positive, Error, Result};
use crate::fieldgrid::{SampledEnvelope, TimeGrid};
use crate::numerics::sinc;

/// Width constant of the Gaussian replacing the phase-matching sinc (equal FWHM).
pub const SIGMA_S: f64 = 1.61;

/// Upper bound on `gain·Ω_p` accepted as low-gain.
pub const LOW_GAIN_LIMIT: f64 = 0.1;

/// Default gain κLα₀.
pub const DEFAULT_GAIN: f64 = 1e-3;

/// Points per axis of the default kernel grid.
pub const DEFAULT_JTA_POINTS: usize = 512;

/// Tolerance for deciding `|x| = ½` at the rectangle edge and `τ_o = -τ_e`.
const EDGE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SPDCParams {
    pub tau_o: f64,
    pub tau_e: f64,
    /// Pump intensity FWHM (ps).
    pub tau_p: f64,
    #[serde(default = "default_gain")]
    pub gain: f64,
    #[serde(default = "default_sigma_s")]
    pub sigma_s: f64,
}

fn default_gain() -> f64 {
    DEFAULT_GAIN
}

fn default_sigma_s() -> f64 {
    SIGMA_S
}

impl SPDCParams {
    pub fn new(tau_o: f64, tau_e: f64, tau_p: f64) -> Result<Self> {
        Self { tau_o, tau_e, tau_p, gain: DEFAULT_GAIN, sigma_s: SIGMA_S }.validated()
    }

    /// Symmetric group-velocity matching, `τ_e = -τ_o`.
    pub fn symmetric(tau_o: f64, tau_p: f64) -> Result<Self> {
        Self::new(tau_o, -tau_o, tau_p)
    }

    /// Symmetric source with `T_o = T`, i.e. `τ_p = √2·√(2 ln 2)·τ_o/(σ_s T)`.
    pub fn symmetric_from_t(tau_o: f64, t: f64) -> Result<Self> {
        ensure_positive("T", t)?;
        Self::symmetric(tau_o, delta_s(SIGMA_S) * tau_o / t)
    }

    pub fn validated(self) -> Result<Self> {
        ensure_positive("tau_p", self.tau_p)?;
        ensure_positive("gain", self.gain)?;
        ensure_positive("sigma_s", self.sigma_s)?;
        if !self.tau_o.is_finite() || !self.tau_e.is_finite() {
            return Err(Error::InvalidParameter("tau_o and tau_e must be finite".into()));
        }
        let g = self.gain * self.omega_p();
        if g >= LOW_GAIN_LIMIT {
            return Err(Error::InvalidParameter(format!(
                "gain·Ω_p = {g} is outside the low-gain regime (< {LOW_GAIN_LIMIT})"
            )));
        }
        Ok(self)
    }

    /// Pump spectral half-width `Ω_p = √(2 ln 2)/τ_p`.
    pub fn omega_p(&self) -> f64 {
        (2.0 * LN_2).sqrt() / self.tau_p
    }

    /// `T_o = √2·Ω_p·τ_o/σ_s`.
    pub fn t_o(&self) -> f64 {
        2f64.sqrt() * self.omega_p() * self.tau_o / self.sigma_s
    }

    pub fn t_e(&self) -> f64 {
        2f64.sqrt() * self.omega_p() * self.tau_e / self.sigma_s
    }

    pub fn tau_minus(&self) -> f64 {
        self.tau_o - self.tau_e
    }

    pub fn is_symmetric(&self) -> bool {
        self.tau_o > 0.0 && (self.tau_o + self.tau_e).abs() <= EDGE_TOL * self.tau_o
    }

    /// Gaussian-model generation probability `P_b = 2π(gΩ_p)²/|T_o - T_e|`.
    pub fn pb(&self) -> Result<f64> {
        let dt = self.t_o() - self.t_e();
        if dt == 0.0 {
            return Err(Error::SingularConfiguration("T_o = T_e".into()));
        }
        Ok(2.0 * PI * (self.gain * self.omega_p()).powi(2) / dt.abs())
    }

    /// Exact-kernel generation probability `P_b' = 2(π/2)^{3/2} g² Ω_p/τ_o` (symmetric case).
    pub fn pb_exact(&self) -> Result<f64> {
        self.require_symmetric()?;
        Ok(2.0 * (PI / 2.0).powf(1.5) * self.gain.powi(2) * self.omega_p() / self.tau_o)
    }

    fn require_symmetric(&self) -> Result<()> {
        if !self.is_symmetric() {
            return Err(Error::InvalidParameter(format!(
                "zero-centered kernels need τ_o = -τ_e > 0, got τ_o = {}, τ_e = {}",
                self.tau_o, self.tau_e
            )));
        }
        Ok(())
    }
}

/// `δ_s = 2√ln2/σ_s`; `τ_p = δ_s τ_o` gives a separable symmetric source.
pub fn delta_s(sigma_s: f64) -> f64 {
    2.0 * LN_2.sqrt() / sigma_s
}

/// `c_m = 2√ln2·σ_s`; the aperture condition reads `Ω_m > c_m/τ_o`.
pub fn c_m(sigma_s: f64) -> f64 {
    2.0 * LN_2.sqrt() * sigma_s
}

/// ppKTP pumped at 791.5 nm, 40 mm long, poling period 47.6 μm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrystalPreset {
    pub name: &'static str,
    pub length_mm: f64,
    pub pump_wavelength_nm: f64,
    pub poling_period_um: f64,
    pub tau_o: f64,
}

pub const PPKTP: CrystalPreset =
    CrystalPreset { name: "ppKTP", length_mm: 40.0, pump_wavelength_nm: 791.5, poling_period_um: 47.6, tau_o: 2.95 };

impl CrystalPreset {
    pub fn params(&self, tau_p: f64) -> Result<SPDCParams> {
        SPDCParams::symmetric(self.tau_o, tau_p)
    }
}

/// Joint spectral amplitude `2πg·exp(-(Ω+Ω')²/4Ω_p² + i(τ_oΩ+τ_eΩ'))·sinc(τ_oΩ+τ_eΩ')`.
pub fn jsa(params: &SPDCParams, omega: f64, omega_prime: f64) -> Complex64 {
    let op = params.omega_p();
    let x = params.tau_o * omega + params.tau_e * omega_prime;
    let s = omega + omega_prime;
    2.0 * PI * params.gain * (-s * s / (4.0 * op * op)).exp() * sinc(x) * Complex64::from_polar(1.0, x)
}

/// Sampled two-time kernel; rows index `t`, columns index `t'`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointAmplitude {
    pub t_grid: TimeGrid,
    pub tprime_grid: TimeGrid,
    pub values: Array2<Complex64>,
}

impl JointAmplitude {
    pub fn new(t_grid: TimeGrid, tprime_grid: TimeGrid, values: Array2<Complex64>) -> Result<Self> {
        if values.dim() != (t_grid.n_points, tprime_grid.n_points) {
            return Err(Error::IncompatibleGrid(format!(
                "values have shape {:?}, grids need ({}, {})",
                values.dim(),
                t_grid.n_points,
                tprime_grid.n_points
            )));
        }
        Ok(Self { t_grid, tprime_grid, values })
    }

    /// Samples `f(t, t')`, rows in parallel.
    pub fn from_fn<F: Fn(f64, f64) -> Complex64 + Sync>(t_grid: TimeGrid, tprime_grid: TimeGrid, f: F) -> Self {
        let (n, m) = (t_grid.n_points, tprime_grid.n_points);
        let data: Vec<Complex64> = (0..n)
            .into_par_iter()
            .flat_map_iter(|i| {
                let t = t_grid.t(i);
                (0..m).map(move |j| (t, j))
            })
            .map(|(t, j)| f(t, tprime_grid.t(j)))
            .collect();
        let values = Array2::from_shape_vec((n, m), data).expect("shape matches the grids");
        Self { t_grid, tprime_grid, values }
    }

    pub fn cell(&self) -> f64 {
        self.t_grid.dt * self.tprime_grid.dt
    }

    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.cell()
    }

    pub fn check_same(&self, other: &Self) -> Result<()> {
        self.t_grid.check_same(&other.t_grid)?;
        self.tprime_grid.check_same(&other.tprime_grid)
    }

    /// `∫∫ f* g dt dt'`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.check_same(other)?;
        let s: Complex64 = self.values.iter().zip(other.values.iter()).map(|(a, b)| a.conj() * b).sum();
        Ok(s * self.cell())
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self { t_grid: self.t_grid, tprime_grid: self.tprime_grid, values: self.values.mapv(|z| z * c) }
    }

    pub fn is_square(&self) -> bool {
        self.t_grid.same_as(&self.tprime_grid)
    }

    /// Largest `|J(t,t') - J(-t,-t')|` relative to `max |J|`; needs symmetric grids.
    pub fn central_asymmetry(&self) -> f64 {
        let (n, m) = self.values.dim();
        let peak = self.values.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..m {
                worst = worst.max((self.values[[i, j]] - self.values[[n - 1 - i, m - 1 - j]]).norm());
            }
        }
        worst / peak
    }

    /// Largest `|J(t,t') - J(t',t)|` relative to `max |J|`; needs a square grid.
    pub fn exchange_asymmetry(&self) -> f64 {
        let peak = self.values.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let worst = self.values.iter().zip(self.values.t().iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        worst / peak
    }

    /// Writes `t_ps,tprime_ps,re,im` rows with 12 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "t_ps,tprime_ps,re,im")?;
        for ((i, j), z) in self.values.indexed_iter() {
            writeln!(w, "{:.11e},{:.11e},{:.11e},{:.11e}", self.t_grid.t(i), self.tprime_grid.t(j), z.re, z.im)?;
        }
        Ok(())
    }
}

/// Default grid pair: 512 points per axis over `±6·max(τ_1, τ_2, 2|τ_o|, 2|τ_e|)`,
/// centered on `(τ_o, τ_e)`, or on the origin when `centered`.
pub fn default_grids(params: &SPDCParams, centered: bool) -> Result<(TimeGrid, TimeGrid)> {
    default_grids_n(params, centered, DEFAULT_JTA_POINTS)
}

pub fn default_grids_n(params: &SPDCParams, centered: bool, n: usize) -> Result<(TimeGrid, TimeGrid)> {
    let (tau1, tau2) = mode_widths(params)?;
    let half = 6.0 * tau1.max(tau2).max(2.0 * params.tau_o.abs()).max(2.0 * params.tau_e.abs());
    let scale = tau1.max(tau2);
    let g = TimeGrid::centered_span(n, half, scale)?;
    if centered {
        return Ok((g, g));
    }
    let shift = |c: f64| TimeGrid::new(g.t_start + c, g.dt, n, scale);
    Ok((shift(params.tau_o)?, shift(params.tau_e)?))
}

fn rect(x: f64) -> f64 {
    let d = x.abs() - 0.5;
    if d.abs() <= EDGE_TOL {
        0.5
    } else if d < 0.0 {
        1.0
    } else {
        0.0
    }
}

fn j_n(params: &SPDCParams) -> Result<f64> {
    let tm = params.tau_minus();
    if tm == 0.0 {
        return Err(Error::SingularConfiguration("τ_o = τ_e makes the kernel singular".into()));
    }
    Ok(PI.sqrt() * params.gain * params.omega_p() / tm.abs())
}

/// Exact kernel `J_N Π((t-t')/2τ_- - ½) exp(-(tτ_e - t'τ_o)²Ω_p²/τ_-²)` on the given grids.
pub fn jta_exact_on(params: &SPDCParams, t_grid: TimeGrid, tprime_grid: TimeGrid) -> Result<JointAmplitude> {
    let jn = j_n(params)?;
    let (to, te, tm, op) = (params.tau_o, params.tau_e, params.tau_minus(), params.omega_p());
    Ok(JointAmplitude::from_fn(t_grid, tprime_grid, |t, tp| {
        let q = (t * te - tp * to) * op / tm;
        Complex64::new(jn * rect((t - tp) / (2.0 * tm) - 0.5) * (-q * q).exp(), 0.0)
    }))
}

pub fn jta_exact(params: &SPDCParams) -> Result<JointAmplitude> {
    j_n(params)?;
    let (g, gp) = default_grids(params, false)?;
    jta_exact_on(params, g, gp)
}

/// Zero-centered symmetric kernel `J_N Π((t-t')/4τ_o) e^{-(t+t')²Ω_p²/4}`; norm `P_b'`.
pub fn jta_exact_centered_on(params: &SPDCParams, grid: TimeGrid) -> Result<JointAmplitude> {
    params.require_symmetric()?;
    let jn = j_n(params)?;
    let (to, op) = (params.tau_o, params.omega_p());
    Ok(JointAmplitude::from_fn(grid, grid, |t, tp| {
        let s = (t + tp) * op;
        Complex64::new(jn * rect((t - tp) / (4.0 * to)) * (-s * s / 4.0).exp(), 0.0)
    }))
}

pub fn jta_exact_centered(params: &SPDCParams) -> Result<JointAmplitude> {
    params.require_symmetric()?;
    jta_exact_centered_on(params, default_grids(params, true)?.0)
}

/// Quadratic-form matrix of the double-Gaussian kernel.
pub fn gauss_matrix(params: &SPDCParams) -> Result<[[f64; 2]; 2]> {
    let (to, te) = (params.t_o(), params.t_e());
    if to == te {
        return Err(Error::SingularConfiguration("T_o = T_e".into()));
    }
    let f = params.omega_p().powi(2) / (to - te).powi(2);
    let off = -f * (1.0 + to * te);
    Ok([[f * (1.0 + te * te), off], [off, f * (1.0 + to * to)]])
}

/// Gaussian kernel `J_1 exp(-(x, y) M (x, y)ᵀ)`, `x = t - τ_o`, `y = t' - τ_e`.
pub fn jta_gauss_on(params: &SPDCParams, t_grid: TimeGrid, tprime_grid: TimeGrid) -> Result<JointAmplitude> {
    let m = gauss_matrix(params)?;
    let j1 = 2.0 * params.gain * params.omega_p().powi(2) / (params.t_o() - params.t_e()).abs();
    let (to, te) = (params.tau_o, params.tau_e);
    Ok(JointAmplitude::from_fn(t_grid, tprime_grid, |t, tp| {
        let (x, y) = (t - to, tp - te);
        Complex64::new(j1 * (-m[0][0] * x * x - m[1][1] * y * y - 2.0 * m[0][1] * x * y).exp(), 0.0)
    }))
}

pub fn jta_gauss(params: &SPDCParams) -> Result<JointAmplitude> {
    gauss_matrix(params)?;
    let (g, gp) = default_grids(params, false)?;
    jta_gauss_on(params, g, gp)
}

/// Zero-centered symmetric Gaussian kernel `√(P_b Ω_p²/πT) e^{-M11(t²+t'²) - 2M12 tt'}`.
pub fn jta_gauss_centered_on(params: &SPDCParams, grid: TimeGrid) -> Result<JointAmplitude> {
    params.require_symmetric()?;
    let t = params.t_o();
    let op2 = params.omega_p().powi(2);
    let m11 = op2 * (t * t + 1.0) / (4.0 * t * t);
    let m12 = op2 * (t * t - 1.0) / (4.0 * t * t);
    let amp = (params.pb()? * op2 / (PI * t)).sqrt();
    Ok(JointAmplitude::from_fn(grid, grid, |x, y| {
        Complex64::new(amp * (-m11 * (x * x + y * y) - 2.0 * m12 * x * y).exp(), 0.0)
    }))
}

pub fn jta_gauss_centered(params: &SPDCParams) -> Result<JointAmplitude> {
    params.require_symmetric()?;
    jta_gauss_centered_on(params, default_grids(params, true)?.0)
}

/// Schmidt-mode widths `τ_{1,2}` of the Gaussian kernel (no regime check).
pub fn mode_widths(params: &SPDCParams) -> Result<(f64, f64)> {
    let (to, te) = (params.t_o(), params.t_e());
    if to == te {
        return Err(Error::SingularConfiguration("T_o = T_e".into()));
    }
    let base = (to - te).abs().sqrt() / (2f64.sqrt() * params.omega_p());
    let r = (1.0 + to * to) / (1.0 + te * te);
    Ok((base * r.powf(0.25), base * r.powf(-0.25)))
}

/// `K = √((1+T_o²)(1+T_e²))/|T_o - T_e|`, valid for either sign of `1 + T_oT_e`.
pub fn schmidt_number(params: &SPDCParams) -> Result<f64> {
    let (to, te) = (params.t_o(), params.t_e());
    if to == te {
        return Err(Error::SingularConfiguration("T_o = T_e".into()));
    }
    Ok(((1.0 + to * to) * (1.0 + te * te)).sqrt() / (to - te).abs())
}

/// Symmetric-source Schmidt number `½(T + 1/T)`.
pub fn schmidt_number_symmetric(t: f64) -> Result<f64> {
    ensure_positive("T", t)?;
    Ok(0.5 * (t + 1.0 / t))
}

/// Schmidt weights `λ_n = (2/(K+1))((K-1)/(K+1))^n`.
pub fn schmidt_lambda(k: f64, n: usize) -> f64 {
    2.0 / (k + 1.0) * ((k - 1.0) / (k + 1.0)).powi(n as i32)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchmidtData {
    #[serde(rename = "K")]
    pub k: f64,
    /// Leading weights, truncated once the remaining tail is below 1e-12.
    pub lambdas: Vec<f64>,
    pub tau1: f64,
    pub tau2: f64,
    #[serde(rename = "Pb")]
    pub pb: f64,
}

const LAMBDA_TAIL: f64 = 1e-12;
const MAX_LAMBDAS: usize = 100_000;

/// Analytic Schmidt decomposition of the Gaussian kernel, for `1 + T_oT_e > 0`.
pub fn schmidt_analytic(params: &SPDCParams) -> Result<SchmidtData> {
    let reg = 1.0 + params.t_o() * params.t_e();
    if reg < -EDGE_TOL {
        return Err(Error::OutOfRegime(format!("1 + T_oT_e = {reg} is negative")));
    }
    let k = schmidt_number(params)?;
    let (tau1, tau2) = mode_widths(params)?;
    let ratio = (k - 1.0) / (k + 1.0);
    let count = if ratio <= 0.0 {
        1
    } else {
        ((LAMBDA_TAIL.ln() / ratio.ln()).ceil() as usize).clamp(1, MAX_LAMBDAS)
    };
    let lambdas = (0..count).map(|n| schmidt_lambda(k, n)).collect();
    Ok(SchmidtData { k, lambdas, tau1, tau2, pb: params.pb()? })
}

/// Numeric Schmidt decomposition by SVD of the sampled kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericSchmidt {
    /// Singular values of the kernel operator, descending; their squares sum to `‖J‖²`.
    pub singular_values: Vec<f64>,
    pub left_modes: Vec<SampledEnvelope>,
    pub right_modes: Vec<SampledEnvelope>,
}

impl NumericSchmidt {
    /// `K = (Σ s²)² / Σ s⁴`.
    pub fn schmidt_number(&self) -> f64 {
        let s2: f64 = self.singular_values.iter().map(|s| s * s).sum();
        let s4: f64 = self.singular_values.iter().map(|s| s.powi(4)).sum();
        s2 * s2 / s4
    }

    pub fn weights(&self) -> Vec<f64> {
        let s2: f64 = self.singular_values.iter().map(|s| s * s).sum();
        self.singular_values.iter().map(|s| s * s / s2).collect()
    }
}

/// SVD of `J·√(dt·dt')`; `J(t,t') = Σ s_n ψ_n(t) φ_n(t')` with unit-norm sampled modes.
pub fn schmidt_numeric(j: &JointAmplitude) -> Result<NumericSchmidt> {
    let (n, m) = j.values.dim();
    if n != m {
        return Err(Error::IncompatibleGrid(format!("kernel must be square, got {n}×{m}")));
    }
    let w = j.cell().sqrt();
    let (sdt, sdtp) = (j.t_grid.dt.sqrt(), j.tprime_grid.dt.sqrt());
    let real = j.values.iter().all(|z| z.im == 0.0);
    let (s, u, vt): (Vec<f64>, DMatrix<Complex64>, DMatrix<Complex64>) = if real {
        let a = DMatrix::from_fn(n, m, |r, c| j.values[[r, c]].re * w);
        let svd = a.svd(true, true);
        let u = svd.u.expect("requested U").map(|x| Complex64::new(x, 0.0));
        let vt = svd.v_t.expect("requested Vᵀ").map(|x| Complex64::new(x, 0.0));
        (svd.singular_values.iter().copied().collect(), u, vt)
    } else {
        let a = DMatrix::from_fn(n, m, |r, c| j.values[[r, c]] * w);
        let svd = a.svd(true, true);
        (svd.singular_values.iter().copied().collect(), svd.u.expect("requested U"), svd.v_t.expect("requested Vᴴ"))
    };
    let mut order: Vec<usize> = (0..s.len()).collect();
    order.sort_by(|&a, &b| s[b].total_cmp(&s[a]));
    let left_modes = order
        .iter()
        .map(|&k| SampledEnvelope { grid: j.t_grid, samples: u.column(k).iter().map(|z| z / sdt).collect() })
        .collect();
    let right_modes = order
        .iter()
        .map(|&k| SampledEnvelope { grid: j.tprime_grid, samples: vt.row(k).iter().map(|z| z / sdtp).collect() })
        .collect();
    Ok(NumericSchmidt { singular_values: order.iter().map(|&k| s[k]).collect(), left_modes, right_modes })
}

/// Source design for a Fresnel time lens of RF bandwidth `f_rf_ghz`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignReport {
    pub k_target: f64,
    pub f_rf_ghz: f64,
    pub tau_o: f64,
    pub tau_p: f64,
    pub tau: f64,
    #[serde(rename = "tau_G")]
    pub tau_g: f64,
    #[serde(rename = "Omega_m")]
    pub omega_m: f64,
    pub aperture_ok: bool,
    #[serde(rename = "f_RF_min_ghz")]
    pub f_rf_min_ghz: f64,
}

/// Symmetric source with Schmidt number `k_target` and its time-lens aperture check.
pub fn design_source(k_target: f64, f_rf_ghz: f64, tau_o: f64) -> Result<DesignReport> {
    design_source_with(k_target, f_rf_ghz, tau_o, SIGMA_S)
}

pub fn design_source_with(k_target: f64, f_rf_ghz: f64, tau_o: f64, sigma_s: f64) -> Result<DesignReport> {
    ensure_positive("f_RF", f_rf_ghz)?;
    ensure_positive("tau_o", tau_o)?;
    ensure_positive("sigma_s", sigma_s)?;
    if !(k_target >= 1.0) {
        return Err(Error::InfeasibleDesign(format!("Schmidt number {k_target} < 1 has no real pump duration")));
    }
    // GHz to rad/ps.
    let omega_m = 4.0 * PI * f_rf_ghz * 1e-3;
    let tau_g = 4.0 * LN_2.sqrt() / omega_m;
    let x = k_target + (k_target * k_target - 1.0).sqrt();
    let tau_p = delta_s(sigma_s) * tau_o * x;
    let tau = (tau_o * tau_p / (sigma_s * LN_2.sqrt())).sqrt();
    Ok(DesignReport {
        k_target,
        f_rf_ghz,
        tau_o,
        tau_p,
        tau,
        tau_g,
        omega_m,
        aperture_ok: tau > k_target.sqrt() * tau_g,
        f_rf_min_ghz: c_m(sigma_s) / (4.0 * PI * tau_o) * 1e3,
    })
}
