//! Matrix elements of the displacement operator `D(α)` in the number basis.
//!
//! With `x = |α|²` and `φ = arg α`, for `k ≥ 0`
//!
//! ```text
//! ⟨n+k| D(α) |n⟩ = e^{ikφ} v_n^{(k)}(x),
//! ⟨n| D(α) |n+k⟩ = (-1)^k e^{-ikφ} v_n^{(k)}(x),
//! v_n^{(k)}(x) = sqrt(n! / (n+k)!) x^{k/2} e^{-x/2} L_n^{(k)}(x).
//! ```
//!
//! `v` is generated by the normalized three-term recurrence
//! `v_{n+1} = ((2n+k+1-x) v_n - sqrt(n(n+k)) v_{n-1}) / sqrt((n+1)(n+k+1))`,
//! carried in mantissa/exponent form so neither the starting value nor the
//! intermediate terms under- or overflow.

use num_complex::Complex64;
const RESCALE: f64 = 1e150;

/// `ln k!` by direct summation (integer `k` only; exact to rounding).
pub fn ln_factorial(k: usize) -> f64 {
    (2..=k).map(|j| (j as f64).ln()).sum()
}

/// Fills `out[n] = v_n^{(k)}(x)` for `n < out.len()`.
pub fn laguerre_functions(k: usize, x: f64, out: &mut [f64]) {
    let len = out.len();
    let kf = k as f64;
    let a: Vec<f64> = (0..len)
        .map(|n| 1.0 / (((n + 1) as f64) * ((n + 1) as f64 + kf)).sqrt())
        .collect();
    let b: Vec<f64> = (0..len)
        .map(|n| ((n as f64) * (n as f64 + kf)).sqrt())
        .collect();
    recurrence(k, x, 0.5 * ln_factorial(k), &a, &b, out);
}

fn recurrence(k: usize, x: f64, half_ln_fact: f64, a: &[f64], b: &[f64], out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    if x <= 0.0 {
        // L_n^{(k)}(0) x^{k/2} vanishes unless k = 0, where v_n = 1
        out.fill(if k == 0 { 1.0 } else { 0.0 });
        return;
    }
    let kf = k as f64;
    let mut log_scale = 0.5 * kf * x.ln() - 0.5 * x - half_ln_fact;
    let mut factor = log_scale.exp();
    let mut prev = 0.0;
    let mut cur = 1.0;
    out[0] = factor;
    let c0 = kf + 1.0 - x;
    for n in 0..out.len() - 1 {
        let next = ((2.0 * n as f64 + c0) * cur - b[n] * prev) * a[n];
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE {
            prev /= RESCALE;
            cur /= RESCALE;
            log_scale += RESCALE.ln();
            factor = log_scale.exp();
        } else if cur.abs() < 1.0 / RESCALE && prev.abs() < 1.0 / RESCALE && cur != 0.0 {
            prev *= RESCALE;
            cur *= RESCALE;
            log_scale -= RESCALE.ln();
            factor = log_scale.exp();
        }
        out[n + 1] = cur * factor;
    }
}

/// Precomputed recurrence coefficients for all `k < size`, `n + k < size`,
/// shared across many arguments `x`.
#[derive(Debug, Clone)]
pub struct LaguerreTable {
    size: usize,
    offsets: Vec<usize>,
    a: Vec<f64>,
    b: Vec<f64>,
    half_ln_fact: Vec<f64>,
}

impl LaguerreTable {
    pub fn new(size: usize) -> Self {
        let mut offsets = Vec::with_capacity(size + 1);
        let mut a = Vec::with_capacity(size * (size + 1) / 2);
        let mut b = Vec::with_capacity(size * (size + 1) / 2);
        let mut half_ln_fact = Vec::with_capacity(size);
        let mut lf = 0.0;
        for k in 0..size {
            if k > 1 {
                lf += (k as f64).ln();
            }
            half_ln_fact.push(0.5 * lf);
            offsets.push(a.len());
            let kf = k as f64;
            for n in 0..size - k {
                a.push(1.0 / (((n + 1) as f64) * ((n + 1) as f64 + kf)).sqrt());
                b.push(((n as f64) * (n as f64 + kf)).sqrt());
            }
        }
        offsets.push(a.len());
        Self {
            size,
            offsets,
            a,
            b,
            half_ln_fact,
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Start of diagonal `k` in packed storage (`size - k` entries each).
    pub fn offset(&self, k: usize) -> usize {
        self.offsets[k]
    }

    pub fn packed_len(&self) -> usize {
        self.offsets[self.size]
    }

    /// `out[n] = v_n^{(k)}(x)`, `out.len() = size - k`.
    pub fn fill(&self, k: usize, x: f64, out: &mut [f64]) {
        let r = self.offsets[k]..self.offsets[k + 1];
        recurrence(
            k,
            x,
            self.half_ln_fact[k],
            &self.a[r.clone()],
            &self.b[r],
            out,
        );
    }
}

/// `⟨m| D(α) |n⟩`.
pub fn displacement_elem(m: usize, n: usize, alpha: Complex64) -> Complex64 {
    let (lo, k) = if m >= n { (n, m - n) } else { (m, n - m) };
    let mut v = vec![0.0; lo + 1];
    laguerre_functions(k, alpha.norm_sqr(), &mut v);
    let phi = alpha.arg();
    let kf = k as f64;
    if m >= n {
        Complex64::from_polar(v[lo], kf * phi)
    } else {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        Complex64::from_polar(sign * v[lo], -kf * phi)
    }
}

/// Dense `N × N` block of `D(α)`, row-major.
pub fn displacement_block(alpha: Complex64, n: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); n * n];
    let x = alpha.norm_sqr();
    let phi = alpha.arg();
    let mut v = vec![0.0; n];
    for k in 0..n {
        let len = n - k;
        laguerre_functions(k, x, &mut v[..len]);
        let lower = Complex64::from_polar(1.0, k as f64 * phi);
        let upper = if k % 2 == 0 {
            lower.conj()
        } else {
            -lower.conj()
        };
        for j in 0..len {
            out[(j + k) * n + j] = lower * v[j];
            if k > 0 {
                out[j * n + j + k] = upper * v[j];
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial(n: usize) -> f64 {
        (1..=n).map(|v| v as f64).product()
    }

    /// `⟨m|D(α)|n⟩` from the normal-ordered series
    /// `e^{-|α|²/2} Σ_j α^{m-j} (-ᾱ)^{n-j} sqrt(m! n!) / (j! (m-j)! (n-j)!)`.
    fn series_elem(m: usize, n: usize, alpha: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..=m.min(n) {
            let c = (factorial(m) * factorial(n)).sqrt()
                / (factorial(j) * factorial(m - j) * factorial(n - j));
            acc += alpha.powu((m - j) as u32) * (-alpha.conj()).powu((n - j) as u32) * c;
        }
        acc * (-0.5 * alpha.norm_sqr()).exp()
    }

    #[test]
    fn identity_at_zero() {
        for m in 0..6 {
            for n in 0..6 {
                let v = displacement_elem(m, n, Complex64::new(0.0, 0.0));
                assert_eq!(v, Complex64::new(if m == n { 1.0 } else { 0.0 }, 0.0));
            }
        }
    }

    #[test]
    fn vacuum_overlap() {
        for a in [
            Complex64::new(0.3, -0.4),
            Complex64::new(2.0, 1.0),
            Complex64::new(-5.0, 0.1),
        ] {
            let v = displacement_elem(0, 0, a);
            let expected = (-0.5 * a.norm_sqr()).exp();
            assert!((v - expected).norm() <= 1e-15 + 1e-13 * expected);
        }
    }

    #[test]
    fn matches_series() {
        for a in [
            Complex64::new(0.3, -0.4),
            Complex64::new(1.1, 0.7),
            Complex64::new(-2.0, 0.5),
        ] {
            for m in 0..12 {
                for n in 0..12 {
                    let lhs = displacement_elem(m, n, a);
                    let rhs = series_elem(m, n, a);
                    assert!((lhs - rhs).norm() < 1e-11, "{m} {n} {a}: {lhs} vs {rhs}");
                }
            }
        }
    }

    #[test]
    fn block_is_nearly_unitary() {
        let a = Complex64::new(1.5, -0.8);
        let n = 64;
        let block = displacement_block(a, n);
        for col in 0..n {
            let norm: f64 = (0..n).map(|row| block[row * n + col].norm_sqr()).sum();
            assert!(norm <= 1.0 + 1e-12);
            if col < 20 {
                assert!((norm - 1.0).abs() < 1e-10, "column {col}: {norm}");
            }
        }
        for m in [0, 3, 17] {
            for k in [0, 5, 40] {
                assert!((block[m * n + k] - displacement_elem(m, k, a)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn table_matches_direct() {
        let t = LaguerreTable::new(50);
        for (k, x) in [(0usize, 0.7), (3, 12.0), (49, 2.0), (20, 0.0)] {
            let mut a = vec![0.0; 50 - k];
            let mut b = vec![0.0; 50 - k];
            t.fill(k, x, &mut a);
            laguerre_functions(k, x, &mut b);
            assert_eq!(a, b);
        }
        assert_eq!(t.packed_len(), 50 * 51 / 2);
    }

    #[test]
    fn large_arguments_stay_finite() {
        // starting value e^{-x/2} underflows in plain arithmetic here
        let mut v = vec![0.0; 2000];
        laguerre_functions(3, 1600.0, &mut v);
        assert!(v.iter().all(|x| x.is_finite()));
        let peak = v.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        assert!(peak > 1e-3 && peak <= 1.0);
        let n = 400;
        let block = displacement_block(Complex64::new(0.0, 12.0), n);
        let norm: f64 = (0..n).map(|row| block[row * n + 10].norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-9);
    }
}
