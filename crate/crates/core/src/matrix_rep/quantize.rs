//! Weyl quantization into the number basis.
//!
//! For `ϑ > 0` the Weyl unitary `U_θ(t)` is realized as `D(κ(t₁ + i t₂))`
//! with `κ = sqrt(ϑ/2)`, since `D(α)D(β) = e^{i Im(α β̄)} D(α+β)` and
//! `Im(α(t) conj(α(s))) = ϑ(s₁t₂ - s₂t₁)/2`. For `ϑ < 0` the conjugate
//! representation `D(κ(t₁ - i t₂))`, `κ = sqrt(|ϑ|/2)`, is used.
//! `Tr D(α) = π δ²(α)` gives `τ_θ = (|ϑ| / 2π) Tr`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::io::{BufRead, Write};
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::displacement::LaguerreTable;
use crate::error::{Error, Result};
use crate::symbols::{SampledSymbol, SphereRule};

pub const MIN_TRUNCATION: usize = 32;

/// Nodes with `|f| ≤ SKIP_RELATIVE · max|f|` do not enter the quadrature.
pub const SKIP_RELATIVE: f64 = 1e-16;

const LEAF_GROUPS: usize = 32;
const FORMAT_TAG: &str = "qeuclid-truncated-operator v1";

pub fn kappa_for(vartheta: f64) -> f64 {
    (0.5 * vartheta.abs()).sqrt()
}

pub fn trace_scale_for(vartheta: f64) -> f64 {
    vartheta.abs() / (2.0 * PI)
}

/// `α(t)` for the representation of `R_θ²` with parameter `ϑ`.
pub fn alpha_of(t: [f64; 2], vartheta: f64) -> Complex64 {
    let k = kappa_for(vartheta);
    Complex64::new(k * t[0], k * vartheta.signum() * t[1])
}

/// `N × N` block of a quantized symbol or measure, with `τ_θ = c_τ Tr`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOperator {
    n: usize,
    matrix: Vec<Complex64>,
    vartheta: f64,
    trace_scale: f64,
    kappa: f64,
}

impl TruncatedOperator {
    pub fn from_parts(n: usize, matrix: Vec<Complex64>, vartheta: f64) -> Result<Self> {
        if vartheta == 0.0 || !vartheta.is_finite() {
            return Err(Error::ZeroVartheta);
        }
        if matrix.len() != n * n {
            return Err(Error::LengthMismatch {
                expected: n * n,
                got: matrix.len(),
            });
        }
        if matrix
            .iter()
            .any(|v| !v.re.is_finite() || !v.im.is_finite())
        {
            return Err(Error::NonFinite("operator matrix"));
        }
        Ok(Self {
            n,
            matrix,
            vartheta,
            trace_scale: trace_scale_for(vartheta),
            kappa: kappa_for(vartheta),
        })
    }

    pub fn zeros(n: usize, vartheta: f64) -> Result<Self> {
        Self::from_parts(n, vec![Complex64::new(0.0, 0.0); n * n], vartheta)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn vartheta(&self) -> f64 {
        self.vartheta
    }

    pub fn trace_scale(&self) -> f64 {
        self.trace_scale
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[Complex64] {
        &self.matrix
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[row * self.n + col]
    }

    pub fn to_dmatrix(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.n, self.n, &self.matrix)
    }

    fn with_matrix(&self, matrix: Vec<Complex64>) -> Self {
        Self {
            matrix,
            ..self.clone()
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.n != other.n || self.vartheta != other.vartheta {
            return Err(Error::GridMismatch(format!(
                "operators (N={}, ϑ={}) and (N={}, ϑ={})",
                self.n, self.vartheta, other.n, other.vartheta
            )));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let prod = self.to_dmatrix() * other.to_dmatrix();
        let mut out = Vec::with_capacity(self.n * self.n);
        for r in 0..self.n {
            for c in 0..self.n {
                out.push(prod[(r, c)]);
            }
        }
        Ok(self.with_matrix(out))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.with_matrix(
            self.matrix
                .iter()
                .zip(&other.matrix)
                .map(|(a, b)| a - b)
                .collect(),
        ))
    }

    pub fn adjoint(&self) -> Self {
        let n = self.n;
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for r in 0..n {
            for c in 0..n {
                out[c * n + r] = self.matrix[r * n + c].conj();
            }
        }
        self.with_matrix(out)
    }

    /// Leading `k × k` block.
    pub fn leading_block(&self, k: usize) -> Result<Self> {
        if k == 0 || k > self.n {
            return Err(Error::OutOfRange(format!("block {k} of {}", self.n)));
        }
        let mut out = Vec::with_capacity(k * k);
        for r in 0..k {
            out.extend_from_slice(&self.matrix[r * self.n..r * self.n + k]);
        }
        Ok(self.with_matrix(out).resized(k))
    }

    fn resized(mut self, n: usize) -> Self {
        self.n = n;
        self
    }

    /// `τ_θ` of the truncated operator, `c_τ Tr`.
    pub fn trace(&self) -> Complex64 {
        let tr: Complex64 = (0..self.n).map(|i| self.matrix[i * self.n + i]).sum();
        tr * self.trace_scale
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.matrix.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Text format: a tag line, `N`, `vartheta`, `kappa`, `trace_scale`
    /// lines, then one `re im` line per entry in row-major order.
    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{FORMAT_TAG}")?;
        writeln!(w, "N {}", self.n)?;
        writeln!(w, "vartheta {:e}", self.vartheta)?;
        writeln!(w, "kappa {:e}", self.kappa)?;
        writeln!(w, "trace_scale {:e}", self.trace_scale)?;
        for v in &self.matrix {
            writeln!(w, "{:e} {:e}", v.re, v.im)?;
        }
        Ok(())
    }

    pub fn read_from<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let mut next = || -> Result<String> {
            lines
                .next()
                .ok_or_else(|| Error::Format("unexpected end of operator file".into()))?
                .map_err(Error::from)
        };
        if next()?.trim() != FORMAT_TAG {
            return Err(Error::Format("missing operator header".into()));
        }
        fn field(line: &str, key: &str) -> Result<String> {
            line.strip_prefix(key)
                .map(|v| v.trim().to_string())
                .ok_or_else(|| Error::Format(format!("expected `{key}`, found `{line}`")))
        }
        let parse = |s: String| s.parse::<f64>().map_err(|e| Error::Format(e.to_string()));
        let n: usize = field(&next()?, "N ")?
            .parse()
            .map_err(|e: std::num::ParseIntError| Error::Format(e.to_string()))?;
        let vartheta = parse(field(&next()?, "vartheta ")?)?;
        let kappa = parse(field(&next()?, "kappa ")?)?;
        let trace_scale = parse(field(&next()?, "trace_scale ")?)?;
        let mut matrix = Vec::with_capacity(n * n);
        for _ in 0..n * n {
            let line = next()?;
            let mut it = line.split_whitespace();
            let re = parse(it.next().unwrap_or_default().to_string())?;
            let im = parse(it.next().unwrap_or_default().to_string())?;
            matrix.push(Complex64::new(re, im));
        }
        let op = Self::from_parts(n, matrix, vartheta)?;
        if op.kappa != kappa || op.trace_scale != trace_scale {
            return Err(Error::Format("calibration constants do not match ϑ".into()));
        }
        Ok(op)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path)?;
        self.write_to(std::io::BufWriter::new(file))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::read_from(std::io::BufReader::new(file))
    }
}

/// Quadrature terms sharing one value of `|α|²`.
struct Shell {
    x: f64,
    terms: Vec<(Complex64, f64)>,
}

/// Packed diagonals: `lower` holds `⟨j+k|·|j⟩`, `upper` holds `⟨j|·|j+k⟩`.
struct Diagonals {
    lower: Vec<Complex64>,
    upper: Vec<Complex64>,
}

impl Diagonals {
    fn zeros(len: usize) -> Self {
        let z = Complex64::new(0.0, 0.0);
        Self {
            lower: vec![z; len],
            upper: vec![z; len],
        }
    }

    fn add(&mut self, other: &Self) {
        for (a, b) in self.lower.iter_mut().zip(&other.lower) {
            *a += b;
        }
        for (a, b) in self.upper.iter_mut().zip(&other.upper) {
            *a += b;
        }
    }

    fn into_matrix(self, table: &LaguerreTable) -> Vec<Complex64> {
        let n = table.size();
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for k in 0..n {
            let off = table.offset(k);
            for j in 0..n - k {
                out[(j + k) * n + j] = self.lower[off + j];
                if k > 0 {
                    out[j * n + j + k] = self.upper[off + j];
                }
            }
        }
        out
    }
}

fn accumulate_shell(shell: &Shell, table: &LaguerreTable, out: &mut Diagonals) {
    let n = table.size();
    let zero = Complex64::new(0.0, 0.0);
    let mut lower = vec![zero; n];
    let mut upper = vec![zero; n];
    for &(w, phi) in &shell.terms {
        let z = Complex64::from_polar(1.0, phi);
        let mut p = Complex64::new(1.0, 0.0);
        for k in 0..n {
            lower[k] += w * p;
            upper[k] += w * p.conj();
            p *= z;
        }
    }
    let mut v = vec![0.0; n];
    for k in 0..n {
        if lower[k] == zero && upper[k] == zero {
            continue;
        }
        let len = n - k;
        table.fill(k, shell.x, &mut v[..len]);
        let off = table.offset(k);
        let lo = lower[k];
        let up = if k % 2 == 0 { upper[k] } else { -upper[k] };
        for (dst, vj) in out.lower[off..off + len].iter_mut().zip(&v[..len]) {
            *dst += lo * vj;
        }
        if k > 0 {
            for (dst, vj) in out.upper[off..off + len].iter_mut().zip(&v[..len]) {
                *dst += up * vj;
            }
        }
    }
}

/// Sums the shells with a fixed binary tree over fixed-size leaves, so the
/// result does not depend on the thread count.
fn sum_shells_packed(shells: &[Shell], table: &LaguerreTable) -> Diagonals {
    if shells.len() <= LEAF_GROUPS {
        let mut out = Diagonals::zeros(table.packed_len());
        for s in shells {
            accumulate_shell(s, table, &mut out);
        }
        return out;
    }
    let leaves = shells.len().div_ceil(LEAF_GROUPS);
    let mid = (leaves / 2) * LEAF_GROUPS;
    let (a, b) = shells.split_at(mid);
    let (mut left, right) = rayon::join(
        || sum_shells_packed(a, table),
        || sum_shells_packed(b, table),
    );
    left.add(&right);
    left
}

fn sum_shells(shells: &[Shell], n: usize) -> Vec<Complex64> {
    let table = LaguerreTable::new(n);
    sum_shells_packed(shells, &table).into_matrix(&table)
}

/// Largest `N / M` accepted by [`quantize`], where `M = 2π²/(h²|ϑ|)` is the
/// number level of the first lattice alias of the symbol. Errors in trace
/// and Plancherel pass 1e-3 near 0.45.
pub const MAX_ALIAS_FRACTION: f64 = 0.4;

/// Number level at which the lattice `hZ²` aliases a symbol centered at 0.
pub fn alias_level(h: f64, vartheta: f64) -> f64 {
    2.0 * PI * PI / (h * h * vartheta.abs())
}

/// `Q(f) = h² Σ_t f(t) D(α(t))`, truncated to the first `N` number states.
/// Rejects `N > 0.4 M` (see [`MAX_ALIAS_FRACTION`]).
///
/// Nodes on the same circle `|t| = const` share the Laguerre functions, so
/// the sum is organized by shells of constant `i² + j²`.
pub fn quantize(f: &SampledSymbol, vartheta: f64, n: usize) -> Result<TruncatedOperator> {
    let grid = f.grid();
    if grid.dim() != 2 {
        return Err(Error::UnsupportedDimension(grid.dim()));
    }
    if vartheta == 0.0 {
        return Err(Error::ZeroVartheta);
    }
    if n < MIN_TRUNCATION {
        return Err(Error::TruncationTooSmall(n));
    }
    let np = grid.points_per_axis();
    let half = (np / 2) as i64;
    let h = grid.spacing();
    let alias = alias_level(h, vartheta);
    if n as f64 > MAX_ALIAS_FRACTION * alias {
        return Err(Error::UnderResolved(format!(
            "N = {n} exceeds {MAX_ALIAS_FRACTION} of the alias level {alias:.0} for h = {h}, ϑ = {vartheta}; refine the grid"
        )));
    }
    let w = grid.cell_volume();
    let kappa = kappa_for(vartheta);
    let sign = vartheta.signum();
    let fmax = f.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
    let cut = SKIP_RELATIVE * fmax;

    let mut by_radius: BTreeMap<i64, Vec<(Complex64, f64)>> = BTreeMap::new();
    for (flat, v) in f.values().iter().enumerate() {
        if v.norm() <= cut {
            continue;
        }
        let a = (flat / np) as i64 - half;
        let b = (flat % np) as i64 - half;
        let phi = (sign * b as f64).atan2(a as f64);
        by_radius
            .entry(a * a + b * b)
            .or_default()
            .push((v * w, phi));
    }
    let shells: Vec<Shell> = by_radius
        .into_iter()
        .map(|(key, terms)| Shell {
            x: kappa * kappa * h * h * key as f64,
            terms,
        })
        .collect();
    TruncatedOperator::from_parts(n, sum_shells(&shells, n), vartheta)
}

/// `Σ_i w_i g(ξ_i) D(α(ξ_i))^*`, the quantized measure `g dσ`.
pub fn quantize_measure(
    g: &[Complex64],
    rule: &SphereRule,
    vartheta: f64,
    n: usize,
) -> Result<TruncatedOperator> {
    if rule.dim() != 2 {
        return Err(Error::UnsupportedDimension(rule.dim()));
    }
    if vartheta == 0.0 {
        return Err(Error::ZeroVartheta);
    }
    if n < MIN_TRUNCATION {
        return Err(Error::TruncationTooSmall(n));
    }
    if g.len() != rule.len() {
        return Err(Error::LengthMismatch {
            expected: rule.len(),
            got: g.len(),
        });
    }
    if g.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::NonFinite("measure density"));
    }
    // D(α)^* = D(-α)
    let mut by_radius: BTreeMap<i64, Shell> = BTreeMap::new();
    for ((xi, wi), gi) in rule.nodes().zip(rule.weights()).zip(g) {
        if *gi == Complex64::new(0.0, 0.0) {
            continue;
        }
        let alpha = -alpha_of([xi[0], xi[1]], vartheta);
        let x = alpha.norm_sqr();
        let shell = by_radius
            .entry((x * 1e12).round() as i64)
            .or_insert_with(|| Shell {
                x,
                terms: Vec::new(),
            });
        shell.terms.push((gi * wi, alpha.arg()));
    }
    let shells: Vec<Shell> = by_radius.into_values().collect();
    TruncatedOperator::from_parts(n, sum_shells(&shells, n), vartheta)
}

/// Singular values, descending.
pub fn singular_values(op: &TruncatedOperator) -> Vec<f64> {
    let mut sv: Vec<f64> = op.to_dmatrix().singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

fn check_exponent(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidExponent(p));
    }
    Ok(())
}

/// `(c_τ Σ s_i^p)^{1/p}` from precomputed singular values; `s_1` at `p = ∞`.
pub fn schatten_from_singular(sv: &[f64], trace_scale: f64, p: f64) -> Result<f64> {
    check_exponent(p)?;
    if p.is_infinite() {
        return Ok(sv.iter().copied().fold(0.0, f64::max));
    }
    let powers: Vec<f64> = sv.iter().map(|s| s.powf(p)).collect();
    Ok((trace_scale * crate::numerics::pairwise_sum(&powers)).powf(1.0 / p))
}

/// `‖x‖_p = (τ_θ(|x|^p))^{1/p}` of the truncated operator.
pub fn schatten_norm(op: &TruncatedOperator, p: f64) -> Result<f64> {
    check_exponent(p)?;
    if p == 2.0 {
        let sq: Vec<f64> = op.matrix.iter().map(|v| v.norm_sqr()).collect();
        return Ok((op.trace_scale * crate::numerics::pairwise_sum(&sq)).sqrt());
    }
    schatten_from_singular(&singular_values(op), op.trace_scale, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix_rep::displacement::displacement_block;
    use crate::symbols::{lp_norm, sphere_rule, Grid};

    fn gaussian(grid: Grid, c: [f64; 2], width: f64) -> SampledSymbol {
        SampledSymbol::from_fn(grid, |t| {
            let r2 = (t[0] - c[0]).powi(2) + (t[1] - c[1]).powi(2);
            Complex64::new((-PI * r2 / (width * width)).exp(), 0.0)
        })
        .unwrap()
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = gaussian(Grid::new(2, 4.0, 32).unwrap(), [0.0, 0.0], 1.0);
        assert_eq!(quantize(&g, 0.0, 64), Err(Error::ZeroVartheta));
        assert_eq!(quantize(&g, 1.0, 16), Err(Error::TruncationTooSmall(16)));
        let g3 = SampledSymbol::zeros(Grid::new(3, 4.0, 16).unwrap());
        assert_eq!(quantize(&g3, 1.0, 64), Err(Error::UnsupportedDimension(3)));
        // h = 1/4, ϑ = 2: alias level 158
        assert!(matches!(
            quantize(&g, 2.0, 64),
            Err(Error::UnderResolved(_))
        ));
        assert!(quantize(&g, 2.0, 63).is_ok());
        assert!(matches!(
            schatten_norm(&TruncatedOperator::zeros(32, 1.0).unwrap(), 0.5),
            Err(Error::InvalidExponent(_))
        ));
    }

    #[test]
    fn zero_symbol_and_zero_norm() {
        let z = SampledSymbol::zeros(Grid::new(2, 4.0, 32).unwrap());
        let q = quantize(&z, 1.0, 32).unwrap();
        assert_eq!(q.max_abs(), 0.0);
        for p in [1.0, 2.0, 3.0, f64::INFINITY] {
            assert_eq!(schatten_norm(&q, p).unwrap(), 0.0);
        }
    }

    #[test]
    fn narrow_gaussian_is_near_identity() {
        let grid = Grid::new(2, 2.0, 256).unwrap();
        let eps = 0.05;
        let f = gaussian(grid, [0.0, 0.0], eps).scale(Complex64::new(1.0 / (eps * eps), 0.0));
        let q = quantize(&f, 1.0, 32).unwrap();
        let block = q.leading_block(8).unwrap();
        let id = {
            let mut m = vec![Complex64::new(0.0, 0.0); 64];
            for i in 0..8 {
                m[i * 9] = Complex64::new(1.0, 0.0);
            }
            TruncatedOperator::from_parts(8, m, 1.0).unwrap()
        };
        let diff = block.sub(&id).unwrap();
        assert!(schatten_norm(&diff, f64::INFINITY).unwrap() <= 0.05);
    }

    #[test]
    fn trace_and_plancherel_for_gaussian() {
        let grid = Grid::new(2, 8.0, 128).unwrap();
        let f = gaussian(grid, [0.0, 0.0], 1.0);
        let q = quantize(&f, 1.0, 256).unwrap();
        assert!((q.trace().re - 1.0).abs() < 1e-3);
        assert!(q.trace().im.abs() < 1e-12);
        let l2 = lp_norm(&f, 2.0).unwrap();
        assert!((schatten_norm(&q, 2.0).unwrap() - l2).abs() < 1e-3 * l2);
    }

    #[test]
    fn phase_matches_weyl_relation() {
        // U(t)U(s) = e^{i/2 (s, θt)} U(t+s) on the truncated block
        for vartheta in [1.0, -0.6, 2.5] {
            for (t, s) in [([1.0, 0.5], [-0.3, 2.0]), ([-2.0, 1.5], [0.7, -0.4])] {
                let n = 160;
                let ut = displacement_block(alpha_of(t, vartheta), n);
                let us = displacement_block(alpha_of(s, vartheta), n);
                let uts = displacement_block(alpha_of([t[0] + s[0], t[1] + s[1]], vartheta), n);
                let phase =
                    Complex64::from_polar(1.0, 0.5 * vartheta * (s[0] * t[1] - s[1] * t[0]));
                let a = DMatrix::from_row_slice(n, n, &ut) * DMatrix::from_row_slice(n, n, &us);
                for r in 0..32 {
                    for c in 0..32 {
                        let expected = phase * uts[r * n + c];
                        assert!(
                            (a[(r, c)] - expected).norm() < 1e-8,
                            "ϑ={vartheta} ({r},{c})"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn single_node_measure_is_displacement() {
        let xi = [0.6, 0.8];
        let rule = SphereRule::from_parts(2, vec![[xi[0], xi[1], 0.0]], vec![1.0], None).unwrap();
        let q = quantize_measure(&[Complex64::new(1.0, 0.0)], &rule, 1.0, 40).unwrap();
        let d = displacement_block(-alpha_of(xi, 1.0), 40);
        for (a, b) in q.entries().iter().zip(&d) {
            assert!((a - b).norm() < 1e-13);
        }
        let full = sphere_rule(2, 64, None).unwrap();
        let zero = vec![Complex64::new(0.0, 0.0); full.len()];
        assert_eq!(
            quantize_measure(&zero, &full, 1.0, 40).unwrap().max_abs(),
            0.0
        );
    }

    #[test]
    fn round_trips_through_text() {
        let grid = Grid::new(2, 4.0, 32).unwrap();
        let q = quantize(&gaussian(grid, [0.5, -0.25], 1.0), -1.5, 32).unwrap();
        let mut buf = Vec::new();
        q.write_to(&mut buf).unwrap();
        let back = TruncatedOperator::read_from(buf.as_slice()).unwrap();
        assert_eq!(back, q);
        assert!(TruncatedOperator::read_from("nonsense\n".as_bytes()).is_err());
    }
}
