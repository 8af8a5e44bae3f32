//! Mach-Zehnder cascade sorting Hermite-Gauss modes by order modulo `2^m`.
//!
//! Stage `ℓ` splits the field on a symmetric beam splitter, applies `e^{iθ} Z_{2^ℓ}` in arm A and
//! recombines. Each stage-`ℓ` output port feeds its own time window of stage `ℓ + 1`, entering on
//! the same port it left, with vacuum on the other port. Windows are simulated as separate runs.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{ensure_positive, Error, Result};
use crate::fieldgrid::{apply_frft, apply_lens, disperse, LctMethod, LctPlan, SampledEnvelope, TimeGrid, WINDOW_OVERFLOW_TOL};
use crate::hgmodes::HGMode;
use crate::raymatrix::type1_decomposition;

/// Output port of an interferometer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Port {
    A,
    B,
}

impl Port {
    fn flipped(self) -> Self {
        match self {
            Port::A => Port::B,
            Port::B => Port::A,
        }
    }

    fn index(self) -> usize {
        match self {
            Port::A => 0,
            Port::B => 1,
        }
    }
}

/// Envelopes in the two arms, on a shared grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DualRailField {
    pub beam_a: SampledEnvelope,
    pub beam_b: SampledEnvelope,
}

impl DualRailField {
    pub fn new(beam_a: SampledEnvelope, beam_b: SampledEnvelope) -> Result<Self> {
        beam_a.grid.check_same(&beam_b.grid)?;
        Ok(Self { beam_a, beam_b })
    }

    /// Field in one port, vacuum in the other.
    pub fn single(env: SampledEnvelope, port: Port) -> Self {
        let vac = SampledEnvelope::zeros(env.grid);
        match port {
            Port::A => Self { beam_a: env, beam_b: vac },
            Port::B => Self { beam_a: vac, beam_b: env },
        }
    }

    pub fn total_norm_sq(&self) -> f64 {
        self.beam_a.norm_sq() + self.beam_b.norm_sq()
    }

    fn port(&self, p: Port) -> &SampledEnvelope {
        match p {
            Port::A => &self.beam_a,
            Port::B => &self.beam_b,
        }
    }
}

/// One interferometer: gate order `2^ell`, phase `theta` in arm A, gate scale `tau`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StageSpec {
    pub ell: u32,
    pub theta: f64,
    pub tau: f64,
}

impl StageSpec {
    /// FrFT angle of the `Z_{2^ℓ}` gate, `-2π/2^ℓ`.
    pub fn gamma(&self) -> f64 {
        -2.0 * PI / (1u64 << self.ell) as f64
    }
}

/// How the `Z_{2^ℓ}` gates are realized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GateRealization {
    /// Direct FrFT kernel.
    #[default]
    IdealFrft,
    /// Dispersion, time lens, dispersion (sin γ ≠ 0 only; Z2 stays an exact reflection).
    DecomposedChain,
}

/// Cascade description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SorterSpec {
    /// Number of interferometers.
    pub m: u32,
    /// Gate design scale (ps).
    pub tau: f64,
    /// Inter-stage delay Δt (ps).
    pub delta_t: f64,
    pub gate: GateRealization,
    pub method: LctMethod,
    /// Grid points per window.
    pub n_points: usize,
    /// Explicit `(stage, window) → θ` entries overriding the default schedule.
    pub theta_overrides: Vec<((u32, usize), f64)>,
}

impl SorterSpec {
    pub fn new(m: u32, tau: f64) -> Result<Self> {
        if !(1..=10).contains(&m) {
            return Err(Error::InvalidParameter(format!("stage count m must be in 1..=10, got {m}")));
        }
        ensure_positive("tau", tau)?;
        let delta_t = 12.0 * tau * ((1u64 << (m + 1)) as f64).sqrt();
        Ok(Self {
            m,
            tau,
            delta_t,
            gate: GateRealization::IdealFrft,
            method: LctMethod::ChirpZ,
            n_points: 4096,
            theta_overrides: Vec::new(),
        })
    }

    /// Stage templates with θ = 0.
    pub fn stages(&self) -> Vec<StageSpec> {
        (1..=self.m).map(|ell| StageSpec { ell, theta: 0.0, tau: self.tau }).collect()
    }

    /// Phase θ_ℓ for time window `window` of stage `ell`.
    ///
    /// θ₁ = 0; θ₂ = 0 for window 0 and π/2 for window 1; for ℓ ≥ 3 the window carrying the
    /// lowest order `r` gets θ = -2πr/2^ℓ so that Ψ_r interferes constructively.
    pub fn theta(&self, ell: u32, window: usize) -> f64 {
        if let Some((_, v)) = self.theta_overrides.iter().find(|(k, _)| *k == (ell, window)) {
            return *v;
        }
        match ell {
            1 => 0.0,
            2 => {
                if window == 0 {
                    0.0
                } else {
                    PI / 2.0
                }
            }
            _ => -2.0 * PI * window as f64 / (1u64 << ell) as f64,
        }
    }

    pub fn n_slots(&self) -> usize {
        1 << self.m
    }

    /// Grid wide enough for modes up to `n_max`.
    pub fn grid(&self, n_max: usize) -> Result<TimeGrid> {
        TimeGrid::for_modes(self.tau, n_max, self.n_points)
    }

    fn check_delay(&self, n_max: usize) -> Result<()> {
        let need = 6.0 * self.tau * (n_max.max(1) as f64).sqrt();
        if self.delta_t < need {
            return Err(Error::InvalidParameter(format!(
                "inter-stage delay {} ps is shorter than 6τ√n_max = {need} ps",
                self.delta_t
            )));
        }
        Ok(())
    }
}

/// Routing of one mode through the cascade.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoutingResult {
    pub n: usize,
    /// Designated exit port of each stage.
    pub ports: Vec<Port>,
    /// +1 for constructive (same port), -1 for destructive interference, per stage.
    pub interference: Vec<i8>,
    /// Final time window.
    pub time_slot: usize,
    /// Designated slot index `2·window + port`.
    pub slot: usize,
    /// Power in every slot, in slot order.
    pub slots: Vec<f64>,
    /// Fraction of the output power outside the designated slot.
    pub leakage: f64,
}

/// `(A, B) → ((A + B)/√2, (-A + B)/√2)`.
pub fn beamsplit(field: &DualRailField) -> Result<DualRailField> {
    let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let a = field.beam_a.add(&field.beam_b)?.scaled(s);
    let b = field.beam_b.sub(&field.beam_a)?.scaled(s);
    Ok(DualRailField { beam_a: a, beam_b: b })
}

/// Conjugate transpose of [`beamsplit`].
pub fn beamsplit_inverse(field: &DualRailField) -> Result<DualRailField> {
    let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let a = field.beam_a.sub(&field.beam_b)?.scaled(s);
    let b = field.beam_a.add(&field.beam_b)?.scaled(s);
    Ok(DualRailField { beam_a: a, beam_b: b })
}

enum GateOp {
    Plan(LctPlan),
    Chain { d: f64, df: f64, phase: Complex64 },
}

struct Gate {
    op: GateOp,
}

impl Gate {
    fn new(grid: &TimeGrid, ell: u32, tau: f64, realization: GateRealization, method: LctMethod) -> Result<Self> {
        let gamma = StageSpec { ell, theta: 0.0, tau }.gamma();
        let op = match realization {
            GateRealization::DecomposedChain if ell > 1 => {
                let (d, df) = type1_decomposition(gamma, tau)?;
                GateOp::Chain { d, df, phase: Complex64::from_polar(1.0, gamma / 2.0) }
            }
            _ => GateOp::Plan(LctPlan::frft(grid, gamma, tau, method)?),
        };
        Ok(Self { op })
    }

    fn apply(&self, env: &SampledEnvelope) -> Result<SampledEnvelope> {
        match &self.op {
            GateOp::Plan(p) => p.apply_env(env),
            GateOp::Chain { d, df, phase } => Ok(disperse(&apply_lens(&disperse(env, *d), *df)?, *d).scaled(*phase)),
        }
    }
}

/// `reference` is the cascade input power; losses are measured against it so that
/// near-empty windows do not report round-off as overflow.
fn pass_with(field: &DualRailField, theta: f64, gate: &Gate, reference: f64) -> Result<DualRailField> {
    let split = beamsplit(field)?;
    let gated = gate.apply(&split.beam_a)?.scaled(Complex64::from_polar(1.0, theta));
    let out = beamsplit_inverse(&DualRailField { beam_a: gated, beam_b: split.beam_b })?;
    if reference > 0.0 {
        let fraction = (field.total_norm_sq() - out.total_norm_sq()).abs() / reference;
        if fraction > WINDOW_OVERFLOW_TOL {
            return Err(Error::WindowOverflow { fraction });
        }
    }
    Ok(out)
}

/// One interferometer pass `U†·diag(e^{iθ} Z_{2^ℓ}, 1)·U` with a quadrature FrFT gate.
pub fn interferometer_pass(field: &DualRailField, stage: &StageSpec) -> Result<DualRailField> {
    let split = beamsplit(field)?;
    let gated = apply_frft(&split.beam_a, stage.gamma(), stage.tau)?.scaled(Complex64::from_polar(1.0, stage.theta));
    beamsplit_inverse(&DualRailField { beam_a: gated, beam_b: split.beam_b })
}

/// Ideal routing from the gate eigenvalues `e^{i2πn/2^ℓ}`: (ports, interference signs, window).
pub fn designated_route(n: usize, spec: &SorterSpec) -> (Vec<Port>, Vec<i8>, usize) {
    let mut port = Port::A;
    let mut window = 0usize;
    let mut ports = Vec::new();
    let mut signs = Vec::new();
    for ell in 1..=spec.m {
        let order = (1u64 << ell) as f64;
        let phase = 2.0 * PI * n as f64 / order + spec.theta(ell, window);
        let constructive = phase.cos() > 0.0;
        if !constructive {
            port = port.flipped();
        }
        ports.push(port);
        signs.push(if constructive { 1 } else { -1 });
        if ell < spec.m && port == Port::B {
            window += 1 << (ell - 1);
        }
    }
    (ports, signs, window)
}

fn slot_powers(input: SampledEnvelope, spec: &SorterSpec) -> Result<Vec<f64>> {
    let grid = input.grid;
    let reference = input.norm_sq();
    let mut fields = vec![DualRailField::single(input, Port::A)];
    for ell in 1..=spec.m {
        let gate = Gate::new(&grid, ell, spec.tau, spec.gate, spec.method)?;
        let outs: Vec<DualRailField> = fields
            .par_iter()
            .enumerate()
            .map(|(r, f)| pass_with(f, spec.theta(ell, r), &gate, reference))
            .collect::<Result<_>>()?;
        if ell == spec.m {
            return Ok(outs.iter().flat_map(|f| [f.beam_a.norm_sq(), f.beam_b.norm_sq()]).collect());
        }
        let half = outs.len();
        let mut next: Vec<Option<DualRailField>> = vec![None; 2 * half];
        for (r, f) in outs.into_iter().enumerate() {
            next[r] = Some(DualRailField::single(f.port(Port::A).clone(), Port::A));
            next[r + half] = Some(DualRailField::single(f.port(Port::B).clone(), Port::B));
        }
        fields = next.into_iter().map(|f| f.expect("every window is filled")).collect();
    }
    unreachable!("the loop returns at the last stage")
}

fn route_on_grid(n: usize, spec: &SorterSpec, grid: &TimeGrid) -> Result<RoutingResult> {
    let input = HGMode::centered(n, spec.tau)?.sample(grid);
    let slots = slot_powers(input, spec)?;
    let (ports, interference, window) = designated_route(n, spec);
    let last = *ports.last().expect("m >= 1");
    let slot = 2 * window + last.index();
    let total: f64 = slots.iter().sum();
    Ok(RoutingResult { n, ports, interference, time_slot: window, slot, leakage: 1.0 - slots[slot] / total, slots })
}

/// Sends `HG_n` through all `m` stages and reports its designated slot and leakage.
pub fn run_cascade(n: usize, spec: &SorterSpec) -> Result<RoutingResult> {
    let n_max = n.max(spec.n_slots() - 1);
    spec.check_delay(n_max)?;
    route_on_grid(n, spec, &spec.grid(n_max)?)
}

/// Power fraction of `HG_n` in each slot, rows `n = 0..=n_max`.
pub fn crosstalk_matrix(spec: &SorterSpec, n_max: usize) -> Result<Vec<Vec<f64>>> {
    spec.check_delay(n_max)?;
    let grid = spec.grid(n_max)?;
    (0..=n_max)
        .into_par_iter()
        .map(|n| {
            let r = route_on_grid(n, spec, &grid)?;
            let total: f64 = r.slots.iter().sum();
            Ok(r.slots.iter().map(|p| p / total).collect())
        })
        .collect()
}
