//! Symbol-level operator algebra of `R_θ^d`.
//!
//! An element `x = U_θ(f)` is stored through its symbol `f`; products,
//! adjoints and the trace are computed on symbols:
//!
//! * `U_θ(f) U_θ(g) = U_θ(f *_θ g)` with
//!   `f *_θ g (s) = ∫ f(t) g(s - t) e^{i/2 (s, θ t)} dt`,
//! * `U_θ(f)^* = U_θ(conj(f(-·)))`,
//! * `τ_θ(U_θ(f)) = f(0)` and `x̂ = f`.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::symbols::{Grid, SampledSymbol};

/// Real antisymmetric `d × d` matrix, row-major.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Theta {
    d: usize,
    entries: Vec<f64>,
}

impl Theta {
    pub fn new(d: usize, entries: Vec<f64>) -> Result<Self> {
        if !(1..=3).contains(&d) {
            return Err(Error::UnsupportedDimension(d));
        }
        if entries.len() != d * d {
            return Err(Error::LengthMismatch {
                expected: d * d,
                got: entries.len(),
            });
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("theta"));
        }
        for i in 0..d {
            for j in 0..d {
                if entries[i * d + j] != -entries[j * d + i] {
                    return Err(Error::NotAntisymmetric);
                }
            }
        }
        Ok(Self { d, entries })
    }

    /// `θ = [[0, ϑ], [-ϑ, 0]]`.
    pub fn planar(vartheta: f64) -> Self {
        Self {
            d: 2,
            entries: vec![0.0, vartheta, -vartheta, 0.0],
        }
    }

    pub fn zero(d: usize) -> Self {
        Self {
            d,
            entries: vec![0.0; d * d],
        }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.d + j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|v| *v == 0.0)
    }

    /// `θ_{12}`; the only free parameter when `d = 2`.
    pub fn vartheta(&self) -> Option<f64> {
        (self.d == 2).then(|| self.entries[1])
    }

    /// `(s, θ t)`.
    pub fn pairing(&self, s: &[f64], t: &[f64]) -> f64 {
        let d = self.d;
        let mut acc = 0.0;
        for i in 0..d {
            for j in 0..d {
                acc += s[i] * self.entries[i * d + j] * t[j];
            }
        }
        acc
    }

    /// `θ_T = Tᵗ θ T` for a row-major `d × d` matrix `T`.
    pub fn transformed(&self, t: &[f64]) -> Self {
        let d = self.d;
        let mut out = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..d {
                let mut acc = 0.0;
                for k in 0..d {
                    for l in 0..d {
                        acc += t[k * d + i] * self.entries[k * d + l] * t[l * d + j];
                    }
                }
                out[i * d + j] = acc;
            }
        }
        // exact antisymmetry despite rounding
        for i in 0..d {
            out[i * d + i] = 0.0;
            for j in i + 1..d {
                let v = 0.5 * (out[i * d + j] - out[j * d + i]);
                out[i * d + j] = v;
                out[j * d + i] = -v;
            }
        }
        Self { d, entries: out }
    }
}

/// `x = U_θ(f)` in `S(R_θ^d)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeylElement {
    symbol: SampledSymbol,
    theta: Theta,
}

impl WeylElement {
    pub fn new(symbol: SampledSymbol, theta: Theta) -> Result<Self> {
        if symbol.grid().dim() != theta.dim() {
            return Err(Error::GridMismatch(format!(
                "symbol dimension {} vs theta dimension {}",
                symbol.grid().dim(),
                theta.dim()
            )));
        }
        Ok(Self { symbol, theta })
    }

    pub fn symbol(&self) -> &SampledSymbol {
        &self.symbol
    }

    pub fn theta(&self) -> &Theta {
        &self.theta
    }

    pub fn grid(&self) -> &Grid {
        self.symbol.grid()
    }

    /// Symbol of `x y`.
    pub fn mul(&self, other: &WeylElement) -> Result<WeylElement> {
        if self.theta != other.theta {
            return Err(Error::GridMismatch(
                "elements live in different algebras".into(),
            ));
        }
        let symbol = twisted_convolve(&self.symbol, &other.symbol, &self.theta)?;
        WeylElement::new(symbol, self.theta.clone())
    }

    pub fn adjoint(&self) -> WeylElement {
        WeylElement {
            symbol: adjoint_symbol(&self.symbol),
            theta: self.theta.clone(),
        }
    }

    pub fn scale(&self, c: Complex64) -> WeylElement {
        WeylElement {
            symbol: self.symbol.scale(c),
            theta: self.theta.clone(),
        }
    }
}

fn check_pair(f: &SampledSymbol, g: &SampledSymbol, theta: &Theta) -> Result<()> {
    if !f.grid().same_nodes(g.grid()) {
        return Err(Error::GridMismatch(format!(
            "{:?} vs {:?}",
            f.grid(),
            g.grid()
        )));
    }
    if f.grid().dim() != theta.dim() {
        return Err(Error::GridMismatch("theta dimension".into()));
    }
    Ok(())
}

/// Twisted convolution `f *_θ g`, the symbol of `U_θ(f) U_θ(g)`.
///
/// `θ = 0` reduces to grid convolution. In 2-D the phase splits as
/// `e^{iϑ s₁ t₂ / 2} · e^{-iϑ s₂ t₁ / 2}`: for every output row `s₁` and
/// input row `t₁` the sum over `t₂` is a 1-D convolution done by FFT, and the
/// second factor is applied before summing over `t₁`. Other cases fall back
/// to [`twisted_convolve_direct`].
pub fn twisted_convolve(
    f: &SampledSymbol,
    g: &SampledSymbol,
    theta: &Theta,
) -> Result<SampledSymbol> {
    check_pair(f, g, theta)?;
    if theta.is_zero() {
        return f.convolve(g);
    }
    if theta.dim() != 2 {
        return twisted_convolve_direct(f, g, theta);
    }
    let grid = *f.grid();
    let vartheta = theta.entry(0, 1);
    let n = grid.points_per_axis();
    let m = 2 * n;
    let h = grid.spacing();
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(m);
    let inv = planner.plan_fft_inverse(m);
    let zero = Complex64::new(0.0, 0.0);

    let g_rows: Vec<Vec<Complex64>> = (0..n)
        .map(|row| {
            let mut buf = vec![zero; m];
            buf[..n].copy_from_slice(&g.values()[row * n..(row + 1) * n]);
            fwd.process(&mut buf);
            buf
        })
        .collect();

    let coords: Vec<f64> = (0..n).map(|j| grid.coord(j)).collect();
    let mut out = vec![zero; n * n];
    let mut buf = vec![zero; m];
    let mut row_acc = vec![zero; n];
    let scale = h * h / m as f64;
    for a in 0..n {
        let s1 = coords[a];
        row_acc.iter_mut().for_each(|v| *v = zero);
        // e^{iϑ s₁ t₂ / 2} along the row
        let mod_in: Vec<Complex64> = coords
            .iter()
            .map(|t2| Complex64::from_polar(1.0, 0.5 * vartheta * s1 * t2))
            .collect();
        for j in 0..n {
            // g row index for s₁ - t₁
            let m1 = a as i64 - j as i64 + (n / 2) as i64;
            if m1 < 0 || m1 >= n as i64 {
                continue;
            }
            let f_row = &f.values()[j * n..(j + 1) * n];
            if f_row.iter().all(|v| *v == zero) {
                continue;
            }
            for k in 0..n {
                buf[k] = f_row[k] * mod_in[k];
            }
            buf[n..].iter_mut().for_each(|v| *v = zero);
            fwd.process(&mut buf);
            for (x, y) in buf.iter_mut().zip(&g_rows[m1 as usize]) {
                *x *= y;
            }
            inv.process(&mut buf);
            let t1 = coords[j];
            for b in 0..n {
                let phase = Complex64::from_polar(1.0, -0.5 * vartheta * coords[b] * t1);
                row_acc[b] += buf[b + n / 2] * phase;
            }
        }
        for b in 0..n {
            out[a * n + b] = row_acc[b] * scale;
        }
    }
    SampledSymbol::new(grid, out)
}

/// Direct `O(N²)` Riemann sum `h^d Σ_t f(t) g(s - t) e^{i/2 (s, θ t)}`.
pub fn twisted_convolve_direct(
    f: &SampledSymbol,
    g: &SampledSymbol,
    theta: &Theta,
) -> Result<SampledSymbol> {
    check_pair(f, g, theta)?;
    let grid = *f.grid();
    let d = grid.dim();
    let n = grid.points_per_axis() as i64;
    let w = grid.cell_volume();
    let values = (0..grid.len())
        .map(|s_flat| {
            let s_idx = grid.unflatten(s_flat);
            let s = grid.point(s_flat);
            let mut acc = Complex64::new(0.0, 0.0);
            'outer: for t_flat in 0..grid.len() {
                let fv = f.values()[t_flat];
                if fv.re == 0.0 && fv.im == 0.0 {
                    continue;
                }
                let t_idx = grid.unflatten(t_flat);
                let mut diff = [0usize; 3];
                for axis in 0..d {
                    let m = s_idx[axis] as i64 - t_idx[axis] as i64 + n / 2;
                    if m < 0 || m >= n {
                        continue 'outer;
                    }
                    diff[axis] = m as usize;
                }
                let t = grid.point(t_flat);
                let phase = 0.5 * theta.pairing(&s[..d], &t[..d]);
                acc += fv * g.values()[grid.flatten(&diff)] * Complex64::from_polar(1.0, phase);
            }
            acc * w
        })
        .collect();
    SampledSymbol::new(grid, values)
}

/// `conj(f(-s))`. Reflection maps node `j` to `n - j` on each axis; the
/// unpaired node `j = 0` (coordinate `-L`) wraps to itself, which keeps the
/// map an exact involution.
pub fn adjoint_symbol(f: &SampledSymbol) -> SampledSymbol {
    let grid = *f.grid();
    let d = grid.dim();
    let n = grid.points_per_axis();
    let values = (0..grid.len())
        .map(|flat| {
            let idx = grid.unflatten(flat);
            let mut refl = [0usize; 3];
            for axis in 0..d {
                refl[axis] = (n - idx[axis]) % n;
            }
            f.values()[grid.flatten(&refl)].conj()
        })
        .collect();
    SampledSymbol::new(grid, values).expect("reflection preserves length and finiteness")
}

/// `τ_θ(x) = f(0)`.
pub fn trace(x: &WeylElement) -> Complex64 {
    x.symbol.at_origin()
}

/// The quantum Fourier transform `x̂(ξ) = τ_θ(x U_θ(ξ)^*)`, which for
/// `x = U_θ(f)` is `f` itself.
pub fn qft(x: &WeylElement) -> SampledSymbol {
    x.symbol.clone()
}

pub fn determinant(t: &[f64], d: usize) -> f64 {
    match d {
        1 => t[0],
        2 => t[0] * t[3] - t[1] * t[2],
        3 => {
            t[0] * (t[4] * t[8] - t[5] * t[7]) - t[1] * (t[3] * t[8] - t[5] * t[6])
                + t[2] * (t[3] * t[7] - t[4] * t[6])
        }
        _ => f64::NAN,
    }
}

/// `Ψ_T(x)` for an invertible row-major `T`: the element of `R_{θ_T}^d`,
/// `θ_T = Tᵗ θ T`, with symbol `s ↦ |det T| f(T s)` resampled onto the same
/// grid by multilinear interpolation.
pub fn transform_psi(x: &WeylElement, t: &[f64]) -> Result<WeylElement> {
    let d = x.theta.dim();
    if t.len() != d * d {
        return Err(Error::LengthMismatch {
            expected: d * d,
            got: t.len(),
        });
    }
    let det = determinant(t, d);
    if !(det.abs() > 1e-12) {
        return Err(Error::SingularTransform(det.abs()));
    }
    let jac = det.abs();
    let f = &x.symbol;
    let symbol = SampledSymbol::from_fn(*f.grid(), |s| {
        let mut ts = [0.0; 3];
        for i in 0..d {
            ts[i] = (0..d).map(|j| t[i * d + j] * s[j]).sum();
        }
        f.interpolate(&ts[..d]) * jac
    })?;
    WeylElement::new(symbol, x.theta.transformed(t))
}
