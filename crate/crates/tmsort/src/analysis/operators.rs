//! Time-inversion and fractional Fourier operators acting on one argument of a joint amplitude.

use ndarray::{Array2, Axis};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{ensure_positive, Error, Result};
use crate::fieldgrid::{LctMethod, LctPlan, TimeGrid};
use crate::spdc::JointAmplitude;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum OperatorKind {
    Z2,
    Z2Prime,
    Z4,
    Z4Prime,
    Z8,
    Z8Prime,
    Identity,
    Phase(f64),
}

/// Operator on kernels `J(t, t')`; unprimed kinds act on `t`, primed kinds on `t'`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelOperator {
    pub kind: OperatorKind,
    /// FrFT scale τ (ps); unused by Z2, Identity and Phase.
    pub tau: f64,
}

impl KernelOperator {
    pub fn new(kind: OperatorKind, tau: f64) -> Self {
        Self { kind, tau }
    }

    /// `(axis, γ)` for FrFT kinds; Z2 is the FrFT of angle -π realized as an exact reflection.
    fn frft_angle(&self) -> Option<(usize, f64)> {
        match self.kind {
            OperatorKind::Z4 => Some((0, -PI / 2.0)),
            OperatorKind::Z4Prime => Some((1, -PI / 2.0)),
            OperatorKind::Z8 => Some((0, -PI / 4.0)),
            OperatorKind::Z8Prime => Some((1, -PI / 4.0)),
            _ => None,
        }
    }
}

fn reflect(j: &JointAmplitude, axis: usize) -> Result<JointAmplitude> {
    let grid = if axis == 0 { &j.t_grid } else { &j.tprime_grid };
    if !grid.is_symmetric() {
        return Err(Error::IncompatibleGrid("time inversion needs a grid symmetric about zero".into()));
    }
    let mut values = j.values.clone();
    values.invert_axis(Axis(axis));
    Ok(JointAmplitude { t_grid: j.t_grid, tprime_grid: j.tprime_grid, values: values.as_standard_layout().into_owned() })
}

/// Applies `plan` to every line of `values` along `axis`.
pub(crate) fn map_axis(values: &Array2<Complex64>, axis: usize, plan: &LctPlan) -> Array2<Complex64> {
    let (n, m) = values.dim();
    let lanes: Vec<Vec<Complex64>> = values
        .lanes(Axis(axis))
        .into_iter()
        .map(|l| l.to_vec())
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|l| plan.apply(&l))
        .collect();
    if axis == 0 {
        Array2::from_shape_fn((n, m), |(i, k)| lanes[k][i])
    } else {
        Array2::from_shape_fn((n, m), |(i, k)| lanes[i][k])
    }
}

fn frft_axis(j: &JointAmplitude, axis: usize, gamma: f64, tau: f64) -> Result<JointAmplitude> {
    ensure_positive("tau", tau)?;
    let grid: &TimeGrid = if axis == 0 { &j.t_grid } else { &j.tprime_grid };
    let plan = LctPlan::frft(grid, gamma, tau, LctMethod::ChirpZ)?;
    Ok(JointAmplitude { t_grid: j.t_grid, tprime_grid: j.tprime_grid, values: map_axis(&j.values, axis, &plan) })
}

fn apply_signed(op: &KernelOperator, j: &JointAmplitude, sign: f64) -> Result<JointAmplitude> {
    match op.kind {
        OperatorKind::Z2 => reflect(j, 0),
        OperatorKind::Z2Prime => reflect(j, 1),
        OperatorKind::Identity => Ok(j.clone()),
        OperatorKind::Phase(phi) => Ok(j.scaled(Complex64::from_polar(1.0, sign * phi))),
        _ => {
            let (axis, gamma) = op.frft_angle().expect("remaining kinds are FrFTs");
            frft_axis(j, axis, sign * gamma, op.tau)
        }
    }
}

pub fn apply_op(op: &KernelOperator, j: &JointAmplitude) -> Result<JointAmplitude> {
    apply_signed(op, j, 1.0)
}

/// Applies `op†`: FrFT angles and phases change sign, Z2 is Hermitian.
pub fn apply_adjoint(op: &KernelOperator, j: &JointAmplitude) -> Result<JointAmplitude> {
    apply_signed(op, j, -1.0)
}

/// `(f|g) = ∫∫ f* g dt dt'`.
pub fn inner(f: &JointAmplitude, g: &JointAmplitude) -> Result<Complex64> {
    f.inner(g)
}
