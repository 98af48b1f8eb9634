//! Symbols given by formulas rather than samples.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::grid::Grid;
use super::sampled::SampledSymbol;
use crate::error::Result;

/// Anything that can be evaluated at a point of `R^d`.
pub trait PointSymbol: Sync {
    fn dim(&self) -> usize;
    fn eval(&self, t: &[f64]) -> Complex64;

    fn sample(&self, grid: Grid) -> Result<SampledSymbol> {
        SampledSymbol::from_fn(grid, |t| self.eval(t))
    }
}

impl PointSymbol for SampledSymbol {
    fn dim(&self) -> usize {
        self.grid().dim()
    }

    fn eval(&self, t: &[f64]) -> Complex64 {
        self.interpolate(t)
    }
}

/// `amp · e^{-π|t - c|²/σ²} · e^{2πi⟨ω, t⟩}`.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Gaussian {
    pub center: Vec<f64>,
    pub width: f64,
    pub freq: Vec<f64>,
    pub amp: Complex64,
}

impl Gaussian {
    pub fn standard(d: usize) -> Self {
        Self {
            center: vec![0.0; d],
            width: 1.0,
            freq: vec![0.0; d],
            amp: Complex64::new(1.0, 0.0),
        }
    }
}

impl PointSymbol for Gaussian {
    fn dim(&self) -> usize {
        self.center.len()
    }

    fn eval(&self, t: &[f64]) -> Complex64 {
        let mut r2 = 0.0;
        let mut ph = 0.0;
        for i in 0..self.center.len() {
            r2 += (t[i] - self.center[i]).powi(2);
            ph += self.freq[i] * t[i];
        }
        self.amp
            * Complex64::from_polar((-PI * r2 / (self.width * self.width)).exp(), 2.0 * PI * ph)
    }
}

/// Finite sum of Gaussians; the band-limited test symbols.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct GaussianSum {
    pub terms: Vec<Gaussian>,
}

impl PointSymbol for GaussianSum {
    fn dim(&self) -> usize {
        self.terms.first().map_or(0, |g| g.dim())
    }

    fn eval(&self, t: &[f64]) -> Complex64 {
        self.terms.iter().map(|g| g.eval(t)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_values() {
        let g = Gaussian::standard(2);
        assert_eq!(g.eval(&[0.0, 0.0]), Complex64::new(1.0, 0.0));
        assert!((g.eval(&[1.0, 0.0]).re - (-PI).exp()).abs() < 1e-16);
        let m = Gaussian {
            freq: vec![0.25, 0.0],
            ..Gaussian::standard(2)
        };
        assert!((m.eval(&[1.0, 0.0]) - Complex64::new(0.0, (-PI).exp())).norm() < 1e-16);
    }

    #[test]
    fn sampled_symbol_interpolates_nodes() {
        let grid = Grid::new(2, 4.0, 32).unwrap();
        let s = Gaussian::standard(2).sample(grid).unwrap();
        assert_eq!(s.eval(&[0.0, 0.0]), Complex64::new(1.0, 0.0));
        let sum = GaussianSum {
            terms: vec![Gaussian::standard(2), Gaussian::standard(2)],
        };
        assert_eq!(sum.eval(&[0.0, 0.0]), Complex64::new(2.0, 0.0));
    }
}
