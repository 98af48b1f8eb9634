use num_complex::Complex64;
use rustfft::FftPlanner;

use super::sampled::SampledSymbol;
use crate::error::{Error, Result};

/// `Forward` is `∫ f(t) e^{-2πi⟨t,ξ⟩} dt`, `Inverse` is `∫ f(t) e^{2πi⟨t,s⟩} dt`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FtDirection {
    Forward,
    Inverse,
}

/// Unnormalized in-place FFT over every axis of a row-major array.
pub(crate) fn fft_nd(data: &mut [Complex64], dims: &[usize], inverse: bool) {
    let mut planner = FftPlanner::new();
    let total: usize = dims.iter().product();
    debug_assert_eq!(total, data.len());
    let mut line = Vec::new();
    for axis in 0..dims.len() {
        let len = dims[axis];
        let fft = if inverse {
            planner.plan_fft_inverse(len)
        } else {
            planner.plan_fft_forward(len)
        };
        let stride: usize = dims[axis + 1..].iter().product();
        let outer = total / (len * stride);
        line.resize(len, Complex64::new(0.0, 0.0));
        for o in 0..outer {
            for s in 0..stride {
                let base = o * len * stride + s;
                for (k, slot) in line.iter_mut().enumerate() {
                    *slot = data[base + k * stride];
                }
                fft.process(&mut line);
                for (k, v) in line.iter().enumerate() {
                    data[base + k * stride] = *v;
                }
            }
        }
    }
}

/// Discrete approximation of the continuum transform, landing on the dual
/// grid (spacing `1/(2L)`, same `n`).
///
/// On a centered grid `t_j = (j - n/2) h`, `ξ_k = (k - n/2)/(n h)` the phase
/// `(j - n/2)(k - n/2)/n` splits into `(-1)^j`, a plain DFT, `(-1)^k` and a
/// constant, so the transform is one FFT per axis.
pub fn classical_ft(f: &SampledSymbol, direction: FtDirection) -> Result<SampledSymbol> {
    let grid = *f.grid();
    let d = grid.dim();
    if d > 3 {
        return Err(Error::UnsupportedDimension(d));
    }
    if f.values()
        .iter()
        .any(|v| !v.re.is_finite() || !v.im.is_finite())
    {
        return Err(Error::NonFinite("classical_ft input"));
    }
    let n = grid.points_per_axis();
    let dims = vec![n; d];
    let sign = |idx: &[usize; 3]| -> f64 {
        let parity: usize = idx[..d].iter().sum();
        if parity.is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    };
    let mut data: Vec<Complex64> = f
        .values()
        .iter()
        .enumerate()
        .map(|(flat, v)| v * sign(&grid.unflatten(flat)))
        .collect();
    fft_nd(&mut data, &dims, direction == FtDirection::Inverse);
    // e^{∓iπ n/2} per axis is ±1 because n is even
    let axis_const: f64 = if (n / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
    let constant = axis_const.powi(d as i32) * grid.cell_volume();
    let dual = grid.dual();
    for (flat, v) in data.iter_mut().enumerate() {
        *v *= sign(&dual.unflatten(flat)) * constant;
    }
    SampledSymbol::new(dual, data)
}
