use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::{gauss_legendre, gauss_legendre_on, pairwise_sum};

/// Sub-arc of the upper unit half circle, parametrized as the graph
/// `t ↦ (t, sqrt(1 - t²))` for `t ∈ (t_min, t_max)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Arc {
    pub t_min: f64,
    pub t_max: f64,
}

impl Arc {
    /// `S¹₊ = {(t, sqrt(1 - t²)) : |t| < 1/2}`.
    pub const UPPER_CAP: Arc = Arc {
        t_min: -0.5,
        t_max: 0.5,
    };
}

/// Quadrature nodes on the unit sphere `S^{d-1}` (or an arc of `S¹`) with
/// positive weights for the surface measure.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereRule {
    d: usize,
    nodes: Vec<[f64; 3]>,
    weights: Vec<f64>,
    arc: Option<Arc>,
}

impl SphereRule {
    /// Builds a rule from explicit parts, checking `|ξ_i| = 1` and `w_i > 0`.
    pub fn from_parts(
        d: usize,
        nodes: Vec<[f64; 3]>,
        weights: Vec<f64>,
        arc: Option<Arc>,
    ) -> Result<Self> {
        if d != 2 && d != 3 {
            return Err(Error::UnsupportedDimension(d));
        }
        if nodes.len() != weights.len() {
            return Err(Error::LengthMismatch {
                expected: nodes.len(),
                got: weights.len(),
            });
        }
        for (xi, w) in nodes.iter().zip(&weights) {
            let r = xi[..d].iter().map(|v| v * v).sum::<f64>().sqrt();
            if (r - 1.0).abs() > 1e-12 || !(*w > 0.0) {
                return Err(Error::OutOfRange(format!("node {xi:?} weight {w}")));
            }
        }
        Ok(Self {
            d,
            nodes,
            weights,
            arc,
        })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, i: usize) -> &[f64] {
        &self.nodes[i][..self.d]
    }

    pub fn nodes(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.nodes.iter().map(move |xi| &xi[..self.d])
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn arc(&self) -> Option<Arc> {
        self.arc
    }

    pub fn total_measure(&self) -> f64 {
        pairwise_sum(&self.weights)
    }

    /// Values of `g` at the nodes.
    pub fn sample<F: Fn(&[f64]) -> f64>(&self, g: F) -> Vec<f64> {
        self.nodes().map(g).collect()
    }
}

/// Quadrature rule for `dσ`.
///
/// * `d = 2`, full circle: `m` equispaced angles, trapezoidal weights.
/// * `d = 2`, arc: `m`-point Gauss–Legendre in the graph variable `t` with
///   weight `(1 + γ'(t)²)^{1/2} = (1 - t²)^{-1/2}`.
/// * `d = 3`: `m`-point Gauss–Legendre in `cos(polar)` times `2m`
///   trapezoidal azimuths.
pub fn sphere_rule(d: usize, m: usize, arc: Option<Arc>) -> Result<SphereRule> {
    if m < 16 {
        return Err(Error::OutOfRange(format!("resolution m = {m} < 16")));
    }
    match (d, arc) {
        (2, None) => {
            let step = 2.0 * PI / m as f64;
            let nodes = (0..m)
                .map(|i| {
                    let a = i as f64 * step;
                    [a.cos(), a.sin(), 0.0]
                })
                .collect();
            SphereRule::from_parts(2, nodes, vec![step; m], None)
        }
        (2, Some(a)) => {
            if !(-1.0 < a.t_min && a.t_min < a.t_max && a.t_max < 1.0) {
                return Err(Error::OutOfRange(format!("arc {a:?}")));
            }
            let (t, w) = gauss_legendre_on(m, a.t_min, a.t_max);
            let mut nodes = Vec::with_capacity(m);
            let mut weights = Vec::with_capacity(m);
            for (ti, wi) in t.into_iter().zip(w) {
                let gamma = (1.0 - ti * ti).sqrt();
                // renormalize to kill rounding in |ξ|
                let r = (ti * ti + gamma * gamma).sqrt();
                nodes.push([ti / r, gamma / r, 0.0]);
                weights.push(wi / gamma);
            }
            SphereRule::from_parts(2, nodes, weights, Some(a))
        }
        (3, None) => {
            let (z, wz) = gauss_legendre(m);
            let naz = 2 * m;
            let step = 2.0 * PI / naz as f64;
            let mut nodes = Vec::with_capacity(m * naz);
            let mut weights = Vec::with_capacity(m * naz);
            for (zi, wi) in z.iter().zip(&wz) {
                let s = (1.0 - zi * zi).sqrt();
                for k in 0..naz {
                    let phi = k as f64 * step;
                    nodes.push([s * phi.cos(), s * phi.sin(), *zi]);
                    weights.push(wi * step);
                }
            }
            SphereRule::from_parts(3, nodes, weights, None)
        }
        (3, Some(_)) => Err(Error::Unsupported("arcs are only defined on S^1".into())),
        (d, _) => Err(Error::UnsupportedDimension(d)),
    }
}

/// `(Σ_i w_i |g_i|^q)^{1/q}`, or `max |g_i|` for `q = ∞`.
pub fn lq_sphere_norm(g: &[f64], q: f64, rule: &SphereRule) -> Result<f64> {
    if g.len() != rule.len() {
        return Err(Error::LengthMismatch {
            expected: rule.len(),
            got: g.len(),
        });
    }
    if q.is_nan() || q < 1.0 {
        return Err(Error::InvalidExponent(q));
    }
    if g.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("sphere values"));
    }
    if q.is_infinite() {
        return Ok(g.iter().map(|v| v.abs()).fold(0.0, f64::max));
    }
    let terms: Vec<f64> = g
        .iter()
        .zip(rule.weights())
        .map(|(v, w)| w * v.abs().powf(q))
        .collect();
    Ok(pairwise_sum(&terms).powf(1.0 / q))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_measure() {
        let r = sphere_rule(2, 64, None).unwrap();
        assert!((r.total_measure() - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn sphere_second_moment() {
        let r = sphere_rule(3, 32, None).unwrap();
        let m: f64 = r
            .nodes()
            .zip(r.weights())
            .map(|(x, w)| w * x[2] * x[2])
            .sum();
        assert!((m - 4.0 * PI / 3.0).abs() < 1e-10);
        assert!((r.total_measure() - 4.0 * PI).abs() < 1e-10);
    }

    #[test]
    fn upper_cap_arc_length() {
        // adaptive Simpson oracle for ∫_{-1/2}^{1/2} (1 - t²)^{-1/2} dt
        fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
            let c = 0.5 * (a + b);
            let whole = (b - a) / 6.0 * (f(a) + 4.0 * f(c) + f(b));
            let left = (c - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + c)) + f(c));
            let right = (b - c) / 6.0 * (f(c) + 4.0 * f(0.5 * (c + b)) + f(b));
            if depth == 0 || (left + right - whole).abs() < 15.0 * tol {
                left + right + (left + right - whole) / 15.0
            } else {
                simpson(f, a, c, tol / 2.0, depth - 1) + simpson(f, c, b, tol / 2.0, depth - 1)
            }
        }
        let oracle = simpson(&|t: f64| 1.0 / (1.0 - t * t).sqrt(), -0.5, 0.5, 1e-13, 40);
        let r = sphere_rule(2, 16, Some(Arc::UPPER_CAP)).unwrap();
        assert!((r.total_measure() - oracle).abs() < 1e-8);
        assert!((oracle - PI / 3.0).abs() < 1e-10);
        for x in r.nodes() {
            assert!(x[1] > 0.0 && x[0].abs() < 0.5);
        }
    }

    #[test]
    fn rejects_bad_requests() {
        assert!(sphere_rule(4, 32, None).is_err());
        assert!(sphere_rule(2, 8, None).is_err());
        assert!(sphere_rule(3, 32, Some(Arc::UPPER_CAP)).is_err());
    }

    #[test]
    fn sphere_norm_examples() {
        let r = sphere_rule(2, 128, None).unwrap();
        let ones = vec![1.0; r.len()];
        assert!((lq_sphere_norm(&ones, 2.0, &r).unwrap() - (2.0 * PI).sqrt()).abs() < 1e-12);
        assert_eq!(lq_sphere_norm(&ones, f64::INFINITY, &r).unwrap(), 1.0);
        let x1 = r.sample(|x| x[0]);
        assert!((lq_sphere_norm(&x1, 2.0, &r).unwrap() - PI.sqrt()).abs() < 1e-12);
        assert!(lq_sphere_norm(&x1[1..], 2.0, &r).is_err());
    }

    #[test]
    fn refinement_is_stable() {
        let g = |x: &[f64]| 2.0 + (3.0 * x[0]).cos() + x[1] * x[1];
        for (d, m) in [(2usize, 32usize), (3, 24)] {
            let a = sphere_rule(d, m, None).unwrap();
            let b = sphere_rule(d, 2 * m, None).unwrap();
            let na = lq_sphere_norm(&a.sample(g), 3.0, &a).unwrap();
            let nb = lq_sphere_norm(&b.sample(g), 3.0, &b).unwrap();
            assert!((na - nb).abs() <= 1e-8 * nb, "d = {d}");
        }
    }
}
