//! Temporal-mode optics: ray matrices, Hermite-Gauss modes, sampled-field transforms,
//! the interferometric mode sorter, SPDC biphoton kernels and POVM error analysis.

pub mod analysis;
pub mod error;
pub mod fieldgrid;
pub mod hgmodes;
pub mod numerics;
pub mod raymatrix;
pub mod sorter;
pub mod spdc;
pub mod validation;

pub use error::{Error, Result};
pub use num_complex::Complex64;
