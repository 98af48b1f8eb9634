//! Knapp caps: smooth bumps on a `δ × δ^{1/2}` neighbourhood of a point of
//! the unit circle.
//!
//! The cap is `ρ(|E(t - u)|)` with `u = (cos φ, sin φ)`, `ρ` the raised
//! cosine and `E = diag(1/a_n, 1/a_τ)` in the frame `(u, u⊥)`,
//! `a_n = δ/2`, `a_τ = δ^{1/2}/2`. Its noncommutative norms equal those of
//! the radial bump of radius `a = (a_n a_τ)^{1/2}`:
//! * translating the symbol by `u` multiplies `U_θ(f)` on the left by the
//!   unitary `U_θ(u)` and modulates the symbol, and in 2-D every modulation
//!   is conjugation by some `U_θ(v)`;
//! * rotations and `diag(a/a_n, a/a_τ)` have determinant one, so `Ψ_T`
//!   preserves both `θ` and every `L_p` norm.

use num_complex::Complex64;

use super::sector::check_grid_resolution;
use crate::error::{Error, Result};
use crate::matrix_rep::{classical_radial_norm, hybrid_norm, raised_cosine, RadialProfile};
use crate::symbols::{Grid, PointSymbol, SampledSymbol};

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct KnappCap {
    delta: f64,
    orientation: f64,
}

impl KnappCap {
    pub fn new(delta: f64, orientation: f64) -> Result<Self> {
        if !(delta > 0.0 && delta < 0.5) {
            return Err(Error::OutOfRange(format!("δ = {delta} outside (0, 1/2)")));
        }
        if !orientation.is_finite() {
            return Err(Error::NonFinite("cap orientation"));
        }
        Ok(Self { delta, orientation })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn orientation(&self) -> f64 {
        self.orientation
    }

    /// Semi-axis across the circle.
    pub fn normal_radius(&self) -> f64 {
        0.5 * self.delta
    }

    /// Semi-axis along the circle.
    pub fn tangent_radius(&self) -> f64 {
        0.5 * self.delta.sqrt()
    }

    pub fn center(&self) -> [f64; 2] {
        [self.orientation.cos(), self.orientation.sin()]
    }

    /// Radial bump with the same noncommutative norms.
    pub fn radial_equivalent(&self) -> RadialProfile {
        RadialProfile {
            radius: (self.normal_radius() * self.tangent_radius()).sqrt(),
            amplitude: 1.0,
        }
    }

    /// `∫ f = π a_n a_τ ∫₀¹ ρ(u) 2u du` in closed form: `π a_n a_τ (1/2 - 2/π²)`.
    pub fn integral(&self) -> f64 {
        let pi = std::f64::consts::PI;
        2.0 * pi * self.normal_radius() * self.tangent_radius() * (0.25 - 1.0 / (pi * pi))
    }

    /// `‖U_θ(f)‖_p`; `ϑ = 0` is the classical `‖f̌‖_p`.
    pub fn nc_norm(&self, vartheta: f64, p: f64, budget: usize) -> Result<f64> {
        let prof = self.radial_equivalent();
        if vartheta == 0.0 {
            classical_radial_norm(&prof, p)
        } else {
            Ok(hybrid_norm(&prof, vartheta, p, budget)?.norm)
        }
    }
}

impl PointSymbol for KnappCap {
    fn dim(&self) -> usize {
        2
    }

    fn eval(&self, t: &[f64]) -> Complex64 {
        let (s, c) = self.orientation.sin_cos();
        let (x, y) = (t[0] - c, t[1] - s);
        let n = (x * c + y * s) / self.normal_radius();
        let tau = (-x * s + y * c) / self.tangent_radius();
        Complex64::new(raised_cosine((n * n + tau * tau).sqrt()), 0.0)
    }
}

/// The cap sampled on `grid`, which must resolve `δ` (`h ≤ δ/4`).
pub fn knapp_symbol(delta: f64, orientation: f64, grid: Grid) -> Result<SampledSymbol> {
    check_grid_resolution(&grid, delta)?;
    KnappCap::new(delta, orientation)?.sample(grid)
}
