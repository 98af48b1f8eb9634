//! Restriction to the sphere, extension from it, and streamed annulus norms.

use num_complex::Complex64;
use rayon::prelude::*;

use super::sector::check_delta;
use crate::error::{Error, Result};
use crate::matrix_rep::{quantize_measure, TruncatedOperator};
use crate::numerics::pairwise_sum;
use crate::symbols::{lq_sphere_norm, PointSymbol, SphereRule};
use crate::weyl::{Theta, WeylElement};

/// Coarsest grid spacing accepted for restriction.
pub const MAX_RESTRICT_SPACING: f64 = 0.1;

/// `‖x̂‖_{L_q(S^{d-1})}`: `x̂ = f` interpolated at the rule nodes.
pub fn restrict_norm(x: &WeylElement, q: f64, rule: &SphereRule) -> Result<f64> {
    let g = x.grid();
    if g.dim() != rule.dim() {
        return Err(Error::GridMismatch(format!(
            "symbol in d = {}, rule on S^{}",
            g.dim(),
            rule.dim() - 1
        )));
    }
    if g.spacing() > MAX_RESTRICT_SPACING {
        return Err(Error::UnderResolved(format!(
            "h = {} > {MAX_RESTRICT_SPACING} does not resolve the sphere",
            g.spacing()
        )));
    }
    restrict_norm_of(x.symbol(), q, rule)
}

/// `‖f|_S‖_{L_q}` for any pointwise symbol.
pub fn restrict_norm_of<S: PointSymbol + ?Sized>(f: &S, q: f64, rule: &SphereRule) -> Result<f64> {
    if f.dim() != rule.dim() {
        return Err(Error::GridMismatch(format!(
            "symbol in d = {}, rule in d = {}",
            f.dim(),
            rule.dim()
        )));
    }
    let vals: Vec<f64> = rule.nodes().map(|xi| f.eval(xi).norm()).collect();
    lq_sphere_norm(&vals, q, rule)
}

/// `∫ U_θ(ξ)^* g(ξ) dσ(ξ)` as a truncated operator (`d = 2`, `ϑ ≠ 0`).
pub fn extend(
    g: &[Complex64],
    rule: &SphereRule,
    theta: &Theta,
    n: usize,
) -> Result<TruncatedOperator> {
    if theta.dim() != 2 {
        return Err(Error::Unsupported(format!(
            "extension for d = {}",
            theta.dim()
        )));
    }
    match theta.vartheta() {
        Some(v) if v != 0.0 => quantize_measure(g, rule, v, n),
        _ => Err(Error::ZeroVartheta),
    }
}

/// `‖χ^δ f‖_{L_q(R²)}` summed over the lattice `hZ²` without materializing a
/// grid: only nodes with `1 - δ < |t| < 1 + δ` are visited. On a centered
/// grid with even `n` and spacing `h` this is `lp_norm(annulus_cutoff(f))`.
pub fn annulus_lq_norm<S: PointSymbol + ?Sized>(f: &S, delta: f64, q: f64, h: f64) -> Result<f64> {
    check_delta(delta)?;
    if f.dim() != 2 {
        return Err(Error::UnsupportedDimension(f.dim()));
    }
    if q.is_nan() || q < 1.0 {
        return Err(Error::InvalidExponent(q));
    }
    if !(h > 0.0) || h > delta / 4.0 {
        return Err(Error::UnderResolved(format!(
            "lattice spacing {h} > δ/4 = {}",
            delta / 4.0
        )));
    }
    let (inner, outer) = (1.0 - delta, 1.0 + delta);
    let (i2, o2) = (inner * inner, outer * outer);
    let jmax = (outer / h).ceil() as i64;
    let rows: Vec<f64> = (-jmax..=jmax)
        .into_par_iter()
        .map(|j| {
            let y = j as f64 * h;
            if y.abs() >= outer {
                return 0.0;
            }
            let xo = (o2 - y * y).sqrt();
            let xi = if y.abs() < inner {
                (i2 - y * y).sqrt()
            } else {
                0.0
            };
            let kmax = (xo / h).ceil() as i64;
            let kmin = (xi / h).floor() as i64;
            let mut terms = Vec::new();
            for k in -kmax..=kmax {
                if k.abs() < kmin {
                    continue;
                }
                let x = k as f64 * h;
                let r2 = x * x + y * y;
                if r2 > i2 && r2 < o2 && (r2.sqrt() - 1.0).abs() < delta {
                    let v = f.eval(&[x, y]).norm();
                    terms.push(if q.is_infinite() { v } else { v.powf(q) });
                }
            }
            if q.is_infinite() {
                terms.iter().cloned().fold(0.0, f64::max)
            } else {
                pairwise_sum(&terms)
            }
        })
        .collect();
    if q.is_infinite() {
        return Ok(rows.iter().cloned().fold(0.0, f64::max));
    }
    Ok((h * h * pairwise_sum(&rows)).powf(1.0 / q))
}
