//! Building blocks of the Tomas–Stein argument: the transform of the
//! sphere measure, the smooth dyadic decomposition and the multiplier
//! `T_ψ(x) = U_θ(ψ x̂)`.

use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::{composite_gl, pairwise_sum, pairwise_sum_c};
use crate::symbols::{classical_ft, sphere_rule, FtDirection, Grid, SampledSymbol};
use crate::weyl::WeylElement;

/// Largest dyadic index accepted by [`dyadic_ft_sup`].
pub const MAX_DYADIC_K: u32 = 7;
/// Largest dyadic index for the 3-D FFT route (`(16·2^k)³` samples).
pub const MAX_FFT_K: u32 = 3;

fn check_dim(d: usize) -> Result<()> {
    if d == 2 || d == 3 {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(d))
    }
}

/// `σ(S^{d-1})`.
pub fn sphere_measure(d: usize) -> Result<f64> {
    check_dim(d)?;
    Ok(if d == 2 { 2.0 * PI } else { 4.0 * PI })
}

/// `ďσ(s) = ∫ e^{2πi⟨s,ξ⟩} dσ(ξ)` by quadrature with `m ≥ 64(1 + |s|)`.
///
/// In `d = 3` the rule's polar axis is aligned with `s`, so the azimuthal sum
/// is trivial and only the Gauss–Legendre sum in `cos(polar)` remains.
pub fn dsigma_check(s: &[f64], d: usize) -> Result<Complex64> {
    check_dim(d)?;
    if s.len() != d {
        return Err(Error::LengthMismatch {
            expected: d,
            got: s.len(),
        });
    }
    if s.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("dsigma point"));
    }
    let norm = s.iter().map(|v| v * v).sum::<f64>().sqrt();
    let m = ((64.0 * (1.0 + norm)).ceil() as usize).max(64);
    if d == 2 {
        let rule = sphere_rule(2, m, None)?;
        let terms: Vec<Complex64> = rule
            .nodes()
            .zip(rule.weights())
            .map(|(xi, w)| Complex64::from_polar(*w, 2.0 * PI * (s[0] * xi[0] + s[1] * xi[1])))
            .collect();
        Ok(pairwise_sum_c(&terms))
    } else {
        let (u, w) = composite_gl(16, m / 16 + 1, -1.0, 1.0);
        let terms: Vec<Complex64> = u
            .iter()
            .zip(&w)
            .map(|(u, w)| Complex64::from_polar(2.0 * PI * w, 2.0 * PI * norm * u))
            .collect();
        Ok(pairwise_sum_c(&terms))
    }
}

/// Closed form of `ďσ` at radius `r`: `2π J₀(2πr)` or `2 sin(2πr)/r`.
pub fn dsigma_radial(r: f64, d: usize) -> Result<f64> {
    check_dim(d)?;
    Ok(match d {
        2 => 2.0 * PI * puruspe::Jn(0, 2.0 * PI * r),
        _ if r.abs() < 1e-8 => 4.0 * PI * (1.0 - (2.0 * PI * r).powi(2) / 6.0),
        _ => 2.0 * (2.0 * PI * r).sin() / r,
    })
}

/// Smooth step: 0 for `t ≤ 0`, 1 for `t ≥ 1`.
fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        let a = (-1.0 / t).exp();
        let b = (-1.0 / (1.0 - t)).exp();
        a / (a + b)
    }
}

/// Radial bump: 1 on `|s| ≤ 1/2`, 0 on `|s| ≥ 1`, `C^∞`.
pub fn bump(r: f64) -> f64 {
    smooth_step(2.0 - 2.0 * r)
}

/// `φ_0 = φ`, `φ_k(s) = φ(s/2^k) - φ(s/2^{k-1})`, supported in
/// `2^{k-2} ≤ |s| ≤ 2^k` for `k ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DyadicPiece {
    k: u32,
}

impl DyadicPiece {
    pub fn new(k: u32) -> Result<Self> {
        if k > 60 {
            return Err(Error::OutOfRange(format!("dyadic index {k}")));
        }
        Ok(Self { k })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn value(&self, r: f64) -> f64 {
        if self.k == 0 {
            return bump(r);
        }
        let s = (2.0f64).powi(self.k as i32);
        bump(r / s) - bump(2.0 * r / s)
    }

    /// Radii outside which the piece vanishes.
    pub fn support(&self) -> (f64, f64) {
        if self.k == 0 {
            (0.0, 1.0)
        } else {
            let s = (2.0f64).powi(self.k as i32);
            (0.25 * s, s)
        }
    }
}

/// `sup |(φ_k ďσ)^|` for `k ≤ MAX_DYADIC_K`.
///
/// Both factors are radial, so the transform is a one-dimensional Hankel
/// integral (`2π∫F(r)J₀(2πρr)r dr` or `(2/ρ)∫F(r) sin(2πρr) r dr`), done by
/// composite Gauss–Legendre with panels scaled to `2^k`. The transform is
/// concentrated near `ρ = 1`; the sup is taken over `ρ ∈ [0, 3]` on a lattice
/// of spacing `2^{-k}/16`, then polished by golden section.
pub fn dyadic_ft_sup(k: u32, d: usize) -> Result<f64> {
    check_dim(d)?;
    if k > MAX_DYADIC_K {
        return Err(Error::Budget(format!(
            "dyadic index {k} exceeds the desk budget k ≤ {MAX_DYADIC_K}"
        )));
    }
    let piece = DyadicPiece::new(k)?;
    let (a, b) = piece.support();
    let scale = (2.0f64).powi(k as i32);
    let panels = (16.0 * (b - a)).ceil() as usize + 8;
    let (r, w) = composite_gl(16, panels, a, b);
    let weighted: Vec<f64> = r
        .iter()
        .zip(&w)
        .map(|(r, w)| w * r * piece.value(*r) * dsigma_radial(*r, d).unwrap_or(0.0))
        .collect();
    let transform = |rho: f64| -> f64 {
        let terms: Vec<f64> = if d == 2 {
            r.iter()
                .zip(&weighted)
                .map(|(r, fw)| fw * puruspe::Jn(0, 2.0 * PI * rho * r))
                .collect()
        } else if rho < 1e-12 {
            r.iter()
                .zip(&weighted)
                .map(|(r, fw)| fw * 2.0 * PI * r)
                .collect()
        } else {
            r.iter()
                .zip(&weighted)
                .map(|(r, fw)| fw * (2.0 * PI * rho * r).sin() / rho)
                .collect()
        };
        let s = pairwise_sum(&terms);
        if d == 2 {
            (2.0 * PI * s).abs()
        } else {
            (2.0 * s).abs()
        }
    };
    let step = 1.0 / (16.0 * scale);
    let count = (3.0 / step).ceil() as usize + 1;
    let vals: Vec<(f64, f64)> = (0..count)
        .into_par_iter()
        .map(|i| {
            let rho = i as f64 * step;
            (transform(rho), rho)
        })
        .collect();
    let (mut best, rho0) = vals
        .iter()
        .copied()
        .fold((0.0, 0.0), |acc, v| if v.0 > acc.0 { v } else { acc });
    // golden section on the bracketing cell pair
    let (mut lo, mut hi) = ((rho0 - step).max(0.0), rho0 + step);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..40 {
        let x1 = hi - g * (hi - lo);
        let x2 = lo + g * (hi - lo);
        if transform(x1) >= transform(x2) {
            hi = x2;
        } else {
            lo = x1;
        }
    }
    best = best.max(transform(0.5 * (lo + hi)));
    Ok(best)
}

/// The same sup by sampling `φ_k ďσ` on a 3-D grid and taking one
/// [`classical_ft`]; `d = 3`, `k ≤ MAX_FFT_K`.
pub fn dyadic_ft_sup_fft(k: u32) -> Result<f64> {
    if k > MAX_FFT_K {
        return Err(Error::Budget(format!(
            "3-D FFT route holds k ≤ {MAX_FFT_K}, got {k}"
        )));
    }
    let piece = DyadicPiece::new(k)?;
    let half = (2.0f64).powi(k as i32).max(1.0) * 2.0;
    // 8 samples per unit length: the carrier has wavelength 1
    let n = (16.0 * half) as usize;
    let grid = Grid::new(3, half, n)?;
    let f = SampledSymbol::from_fn(grid, |t| {
        let r = (t[0] * t[0] + t[1] * t[1] + t[2] * t[2]).sqrt();
        let v = piece.value(r);
        Complex64::new(
            if v == 0.0 {
                0.0
            } else {
                v * dsigma_radial(r, 3).unwrap_or(0.0)
            },
            0.0,
        )
    })?;
    let ft = classical_ft(&f, FtDirection::Forward)?;
    Ok(ft.values().iter().map(|v| v.norm()).fold(0.0, f64::max))
}

/// `T_ψ(x) = U_θ(ψ x̂)`: the symbol `ψ·f` with the same `θ`.
pub fn multiplier_apply(psi: &SampledSymbol, x: &WeylElement) -> Result<WeylElement> {
    if !psi.grid().same_nodes(x.grid()) {
        return Err(Error::GridMismatch(
            "multiplier and element grids differ".into(),
        ));
    }
    WeylElement::new(psi.pointwise_mul(x.symbol())?, x.theta().clone())
}

/// `c(p, d) = (d + 1)(1/2 - 1/p) + 1` for `1 ≤ p ≤ 2`.
pub fn c_exponent(p: f64, d: usize) -> Result<f64> {
    if !(1.0..=2.0).contains(&p) {
        return Err(Error::InvalidExponent(p));
    }
    if d < 2 {
        return Err(Error::UnsupportedDimension(d));
    }
    Ok((d as f64 + 1.0) * (0.5 - 1.0 / p) + 1.0)
}

/// `2(d + 1)/(d + 3)`, where `c(p, d)` changes sign.
pub fn tomas_stein_endpoint(d: usize) -> f64 {
    2.0 * (d as f64 + 1.0) / (d as f64 + 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dsigma_closed_forms() {
        assert!(
            (dsigma_check(&[0.0, 0.0], 2).unwrap() - Complex64::new(2.0 * PI, 0.0)).norm() < 1e-12
        );
        assert!(
            (dsigma_check(&[0.0, 0.0, 0.0], 3).unwrap() - Complex64::new(4.0 * PI, 0.0)).norm()
                < 1e-12
        );
        let s = [0.9, -1.2, 0.0];
        let v = dsigma_check(&s, 3).unwrap();
        let exact = 2.0 * (2.0 * PI * 1.5f64).sin() / 1.5;
        assert!(
            (v.re - exact).abs() < 1e-8 && v.im.abs() < 1e-8,
            "{v} vs {exact}"
        );
        for r in [0.3, 2.0, 17.5] {
            let v = dsigma_check(&[r * 0.6, r * 0.8], 2).unwrap();
            assert!(
                (v.re - dsigma_radial(r, 2).unwrap()).abs() < 1e-9,
                "r = {r}"
            );
        }
        assert!(dsigma_check(&[1.0], 2).is_err());
        assert!(dsigma_check(&[1.0; 4], 4).is_err());
    }

    #[test]
    fn dsigma_decay_shells() {
        for d in [2usize, 3] {
            let e = 0.5 * (d as f64 - 1.0);
            let mut shell_max = Vec::new();
            for j in 2..6 {
                let lo = (2.0f64).powi(j);
                let m = (0..400)
                    .map(|i| {
                        let r = lo + lo * i as f64 / 400.0;
                        let mut s = vec![0.0; d];
                        s[0] = r;
                        dsigma_check(&s, d).unwrap().norm() * (1.0 + r).powf(e)
                    })
                    .fold(0.0, f64::max);
                shell_max.push(m);
            }
            let hi = shell_max.iter().cloned().fold(0.0, f64::max);
            let lo = shell_max.iter().cloned().fold(f64::INFINITY, f64::min);
            assert!(hi / lo <= 4.0, "d = {d}: {shell_max:?}");
        }
    }

    #[test]
    fn partition_and_support() {
        for i in 0..=4000 {
            let r = 32.0 * i as f64 / 4000.0;
            let s: f64 = (0..=6).map(|k| DyadicPiece::new(k).unwrap().value(r)).sum();
            assert!((s - 1.0).abs() < 1e-10, "r = {r}: {s}");
            for k in 1..=6 {
                let p = DyadicPiece::new(k).unwrap();
                let (a, b) = p.support();
                if r < a || r > b {
                    assert_eq!(p.value(r), 0.0);
                }
            }
        }
    }

    #[test]
    fn dyadic_sup_grows_like_two_to_k() {
        let base = dyadic_ft_sup(0, 3).unwrap();
        // smooth compactly supported integrand: comparable to σ(S²)
        assert!(base > 0.1 * 4.0 * PI && base < 10.0 * 4.0 * PI, "{base}");
        let ratios: Vec<f64> = (1..=6)
            .map(|k| dyadic_ft_sup(k, 3).unwrap() / (2.0f64).powi(k as i32))
            .collect();
        let hi = ratios.iter().cloned().fold(0.0, f64::max);
        let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(hi / lo <= 6.0, "{ratios:?}");
        assert!(dyadic_ft_sup(8, 3).is_err());
    }

    #[test]
    fn hankel_route_matches_fft_route() {
        for k in 1..=2 {
            let a = dyadic_ft_sup(k, 3).unwrap();
            let b = dyadic_ft_sup_fft(k).unwrap();
            assert!((a - b).abs() < 0.05 * a, "k = {k}: {a} vs {b}");
        }
        assert!(dyadic_ft_sup_fft(4).is_err());
    }

    #[test]
    fn exponent_table() {
        assert!((c_exponent(1.0, 3).unwrap() + 1.0).abs() < 1e-15);
        assert!(c_exponent(4.0 / 3.0, 3).unwrap().abs() < 1e-15);
        assert!(c_exponent(6.0 / 5.0, 2).unwrap().abs() < 1e-15);
        assert!(c_exponent(2.5, 2).is_err());
        assert!((tomas_stein_endpoint(2) - 1.2).abs() < 1e-15);
    }
}
