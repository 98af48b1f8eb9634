//! Noncommutative `L_p` norms of Weyl elements.
//!
//! `θ = 0`: `R_0^d ≅ L_∞(R^d)` and `‖U_0(f)‖_p = ‖f̌‖_{L_p}`.
//! `d = 2`, `ϑ ≠ 0`: Schatten norm of the truncated quantization.

use super::quantize::{quantize, schatten_norm};
use crate::error::{Error, Result};
use crate::symbols::{classical_ft, lp_norm, FtDirection, SampledSymbol};
use crate::weyl::WeylElement;

pub const DEFAULT_TRUNCATION: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Truncation {
    pub n: usize,
}

impl Default for Truncation {
    fn default() -> Self {
        Self {
            n: DEFAULT_TRUNCATION,
        }
    }
}

/// `‖x‖_{L_p(R_θ^d)}`. `d ≥ 3` with `θ ≠ 0` is not supported.
pub fn nc_lp_norm(x: &WeylElement, p: f64, opts: &Truncation) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidExponent(p));
    }
    let theta = x.theta();
    if theta.is_zero() {
        let fc = classical_ft(x.symbol(), FtDirection::Inverse)?;
        return lp_norm(&fc, p);
    }
    match theta.vartheta() {
        Some(v) => schatten_norm(&quantize(x.symbol(), v, opts.n)?, p),
        None => Err(Error::Unsupported(format!(
            "noncommutative L_p norms for d = {} with θ ≠ 0",
            theta.dim()
        ))),
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub value: f64,
    /// `|v_N - v_{N_prev}| / v_N`; absent for the first row.
    pub delta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ConvergenceReport {
    pub p: f64,
    pub rows: Vec<ConvergenceRow>,
    /// Last delta ≤ `CONVERGED_DELTA`, or all values zero.
    pub converged: bool,
}

pub const CONVERGED_DELTA: f64 = 1e-3;

/// Schatten `p`-norm of `Q(f)` at each truncation in `sizes` (ascending).
pub fn convergence_report(
    f: &SampledSymbol,
    vartheta: f64,
    p: f64,
    sizes: &[usize],
) -> Result<ConvergenceReport> {
    if sizes.is_empty() || sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::OutOfRange(format!(
            "truncation sizes {sizes:?} must be ascending"
        )));
    }
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let value = schatten_norm(&quantize(f, vartheta, n)?, p)?;
        let delta = rows.last().map(|prev| {
            if value == 0.0 && prev.value == 0.0 {
                0.0
            } else {
                (value - prev.value).abs() / value.abs().max(prev.value.abs())
            }
        });
        rows.push(ConvergenceRow { n, value, delta });
    }
    let all_zero = rows.iter().all(|r| r.value == 0.0);
    let converged = all_zero
        || rows
            .last()
            .and_then(|r| r.delta)
            .is_some_and(|d| d <= CONVERGED_DELTA);
    Ok(ConvergenceReport { p, rows, converged })
}
