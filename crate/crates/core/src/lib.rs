//! Operator algebra of quantum Euclidean spaces `R_θ^d` and numerical
//! Fourier restriction experiments on them.
//!
//! * [`symbols`]: grids, sampled functions, classical transforms, sphere quadrature.
//! * [`weyl`]: twisted convolution, adjoint, trace, the quantum Fourier
//!   transform and the change of variables `Ψ_T`.
//! * [`matrix_rep`]: Weyl quantization into the harmonic-oscillator basis
//!   and noncommutative `L_p` norms.
//! * [`restriction`]: restriction/extension operators, annulus and sector
//!   geometry, Tomas–Stein building blocks.
//! * [`harness`]: experiment configuration, sweeps, fits and reports.

// `!(x > 0.0)` is used deliberately: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod error;
pub mod harness;
pub mod matrix_rep;
pub mod numerics;
pub mod restriction;
pub mod symbols;
pub mod weyl;

pub use error::{Error, Result};
pub use num_complex::Complex64;
