use num_complex::Complex64;

use super::fourier::fft_nd;
use super::grid::Grid;
use crate::error::{Error, Result};
use crate::numerics::pairwise_sum;

/// A complex function sampled on a [`Grid`], values in row-major axis order.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSymbol {
    grid: Grid,
    values: Vec<Complex64>,
}

impl SampledSymbol {
    pub fn new(grid: Grid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        if values
            .iter()
            .any(|v| !v.re.is_finite() || !v.im.is_finite())
        {
            return Err(Error::NonFinite("symbol values"));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    /// Samples `f` at every node. `f` receives the first `d` coordinates.
    pub fn from_fn<F>(grid: Grid, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> Complex64,
    {
        let d = grid.dim();
        let values = (0..grid.len())
            .map(|i| {
                let p = grid.point(i);
                f(&p[..d])
            })
            .collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn at_origin(&self) -> Complex64 {
        self.values[self.grid.origin_index()]
    }

    pub fn map<F: Fn(&[f64], Complex64) -> Complex64>(&self, f: F) -> Result<Self> {
        let d = self.grid.dim();
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let p = self.grid.point(i);
                f(&p[..d], *v)
            })
            .collect();
        Self::new(self.grid, values)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    fn check_same_grid(&self, other: &Self) -> Result<()> {
        if !self.grid.same_nodes(&other.grid) {
            return Err(Error::GridMismatch(format!(
                "{:?} vs {:?}",
                self.grid, other.grid
            )));
        }
        Ok(())
    }

    pub fn pointwise_mul(&self, other: &Self) -> Result<Self> {
        self.check_same_grid(other)?;
        Ok(Self {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_grid(other)?;
        Ok(Self {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_grid(other)?;
        Ok(Self {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// Multilinear interpolation; zero outside the sampled box.
    pub fn interpolate(&self, point: &[f64]) -> Complex64 {
        let d = self.grid.dim();
        let n = self.grid.points_per_axis();
        let h = self.grid.spacing();
        let mut base = [0usize; 3];
        let mut frac = [0.0; 3];
        for axis in 0..d {
            let u = (point[axis] + self.grid.half_width()) / h;
            if !(u >= 0.0) || u > (n - 1) as f64 {
                return Complex64::new(0.0, 0.0);
            }
            let j = (u.floor() as usize).min(n - 2);
            base[axis] = j;
            frac[axis] = u - j as f64;
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for corner in 0..(1usize << d) {
            let mut w = 1.0;
            let mut idx = [0usize; 3];
            for axis in 0..d {
                let bit = (corner >> axis) & 1;
                idx[axis] = base[axis] + bit;
                w *= if bit == 1 {
                    frac[axis]
                } else {
                    1.0 - frac[axis]
                };
            }
            if w != 0.0 {
                acc += self.values[self.grid.flatten(&idx)] * w;
            }
        }
        acc
    }

    /// Grid convolution `(f ⋆ g)(s) = h^d Σ_t f(t) g(s - t)`, with `g` taken
    /// as zero off the grid.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        self.check_same_grid(other)?;
        let d = self.grid.dim();
        let n = self.grid.points_per_axis();
        let m = 2 * n;
        let padded_len = m.pow(d as u32);
        let embed = |src: &[Complex64]| {
            let mut out = vec![Complex64::new(0.0, 0.0); padded_len];
            for (flat, v) in src.iter().enumerate() {
                let idx = self.grid.unflatten(flat);
                out[idx[..d].iter().fold(0, |acc, &j| acc * m + j)] = *v;
            }
            out
        };
        let dims = vec![m; d];
        let mut a = embed(&self.values);
        let mut b = embed(&other.values);
        fft_nd(&mut a, &dims, false);
        fft_nd(&mut b, &dims, false);
        for (x, y) in a.iter_mut().zip(&b) {
            *x *= y;
        }
        fft_nd(&mut a, &dims, true);
        let scale = self.grid.cell_volume() / padded_len as f64;
        let values = (0..self.grid.len())
            .map(|flat| {
                let idx = self.grid.unflatten(flat);
                let pf = idx[..d].iter().fold(0, |acc, &j| acc * m + j + n / 2);
                a[pf] * scale
            })
            .collect();
        Self::new(self.grid, values)
    }
}

/// `(h^d Σ |f_j|^p)^{1/p}`, or the maximum modulus for `p = ∞`.
pub fn lp_norm(f: &SampledSymbol, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidExponent(p));
    }
    if p.is_infinite() {
        return Ok(f.values.iter().map(|v| v.norm()).fold(0.0, f64::max));
    }
    let powers: Vec<f64> = f.values.iter().map(|v| v.norm().powf(p)).collect();
    Ok((f.grid.cell_volume() * pairwise_sum(&powers)).powf(1.0 / p))
}
