use std::f64::consts::PI;

use proptest::prelude::*;
use qeuclid::matrix_rep::{nc_lp_norm, quantize, schatten_norm, trace_scale_for, Truncation};
use qeuclid::symbols::{lp_norm, Gaussian, Grid, PointSymbol, SampledSymbol};
use qeuclid::weyl::{adjoint_symbol, trace, transform_psi, Theta, WeylElement};
use qeuclid::Complex64;

fn grid() -> Grid {
    Grid::new(2, 8.0, 128).unwrap()
}

fn rel(a: &SampledSymbol, b: &SampledSymbol) -> f64 {
    lp_norm(&a.sub(b).unwrap(), f64::INFINITY).unwrap() / lp_norm(b, f64::INFINITY).unwrap()
}

prop_compose! {
    fn gaussian()(cx in -1.0..1.0f64, cy in -1.0..1.0f64, w in 1.0..1.6f64,
                  fx in -0.3..0.3f64, fy in -0.3..0.3f64,
                  ar in -1.0..1.0f64, ai in -1.0..1.0f64) -> Gaussian {
        let amp = Complex64::new(ar, ai);
        Gaussian {
            center: vec![cx, cy],
            width: w,
            freq: vec![fx, fy],
            amp: if amp.norm() < 0.1 { Complex64::new(1.0, 0.0) } else { amp },
        }
    }
}

fn element(g: &Gaussian, vartheta: f64) -> WeylElement {
    WeylElement::new(g.sample(grid()).unwrap(), Theta::planar(vartheta)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn twisted_product_is_associative(a in gaussian(), b in gaussian(), c in gaussian(), v in -2.0..2.0f64) {
        let (x, y, z) = (element(&a, v), element(&b, v), element(&c, v));
        let l = x.mul(&y).unwrap().mul(&z).unwrap();
        let r = x.mul(&y.mul(&z).unwrap()).unwrap();
        prop_assert!(rel(l.symbol(), r.symbol()) < 1e-7);
    }

    #[test]
    fn adjoint_reverses_products(a in gaussian(), b in gaussian(), v in -2.0..2.0f64) {
        let (x, y) = (element(&a, v), element(&b, v));
        let l = x.mul(&y).unwrap().adjoint();
        let r = y.adjoint().mul(&x.adjoint()).unwrap();
        prop_assert!(rel(l.symbol(), r.symbol()) < 1e-10);
        // involution
        prop_assert_eq!(adjoint_symbol(&adjoint_symbol(x.symbol())), x.symbol().clone());
    }

    #[test]
    fn trace_is_tracial(a in gaussian(), b in gaussian(), v in -2.0..2.0f64) {
        let (x, y) = (element(&a, v), element(&b, v));
        let xy = trace(&x.mul(&y).unwrap());
        let yx = trace(&y.mul(&x).unwrap());
        prop_assert!((xy - yx).norm() <= 1e-10 * (1.0 + xy.norm()));
    }

    #[test]
    fn psi_scales_l2_by_det(a in gaussian(), s in 0.8..1.25f64, k in -0.3..0.3f64, phi in 0.0..PI) {
        // rotation ∘ shear ∘ diag(s, 1/s) ∘ diag(1.1, 1): |det T| = 1.1
        let (c, si) = (phi.cos(), phi.sin());
        let m = [[c, -si], [si, c]];
        let sh = [[1.0, k], [0.0, 1.0]];
        let dg = [[1.1 * s, 0.0], [0.0, 1.0 / s]];
        let mul = |a: [[f64; 2]; 2], b: [[f64; 2]; 2]| -> [[f64; 2]; 2] {
            [[a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
             [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]]]
        };
        let t = mul(mul(m, sh), dg);
        // unmodulated: bilinear resampling damps oscillating symbols
        let x = element(&Gaussian { freq: vec![0.0, 0.0], ..a }, 1.0);
        let y = transform_psi(&x, &[t[0][0], t[0][1], t[1][0], t[1][1]]).unwrap();
        prop_assert!((y.theta().vartheta().unwrap() - 1.1).abs() < 1e-12);
        let ratio = lp_norm(y.symbol(), 2.0).unwrap() / lp_norm(x.symbol(), 2.0).unwrap();
        prop_assert!((ratio / 1.1f64.sqrt() - 1.0).abs() < 0.01, "ratio {}", ratio);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn quantization_is_a_star_homomorphism(a in gaussian(), b in gaussian(), v in 0.5..2.0f64) {
        let (x, y) = (element(&a, v), element(&b, v));
        let n = 128;
        let qx = quantize(x.symbol(), v, n).unwrap();
        let qy = quantize(y.symbol(), v, n).unwrap();
        let qxy = quantize(x.mul(&y).unwrap().symbol(), v, n).unwrap();
        let prod = qx.mul(&qy).unwrap().leading_block(n / 2).unwrap();
        let lead = qxy.leading_block(n / 2).unwrap();
        prop_assert!(lead.sub(&prod).unwrap().max_abs() <= 1e-3 * lead.max_abs());

        let qa = quantize(x.adjoint().symbol(), v, n).unwrap();
        prop_assert!(qa.sub(&qx.adjoint()).unwrap().max_abs() <= 1e-3 * qx.max_abs());
    }

    #[test]
    fn trace_calibration_and_plancherel(a in gaussian(), v in 0.5..1.5f64) {
        let x = element(&a, v);
        let q = quantize(x.symbol(), v, 256).unwrap();
        let f0 = x.symbol().at_origin();
        prop_assert!((q.trace() - f0).norm() <= 1e-3 * a.amp.norm());
        prop_assert!((q.trace_scale() - trace_scale_for(v)).abs() < 1e-15);
        let l2 = lp_norm(x.symbol(), 2.0).unwrap();
        prop_assert!((schatten_norm(&q, 2.0).unwrap() - l2).abs() <= 1e-3 * l2);
    }

    #[test]
    fn holder_and_monotone_truncation(a in gaussian(), b in gaussian(), v in 0.5..2.0f64) {
        let (x, y) = (element(&a, v), element(&b, v));
        let (qx, qy) = (quantize(x.symbol(), v, 96).unwrap(), quantize(y.symbol(), v, 96).unwrap());
        let lhs = schatten_norm(&qx.mul(&qy).unwrap(), 1.0).unwrap();
        let rhs = schatten_norm(&qx, 2.0).unwrap() * schatten_norm(&qy, 2.0).unwrap();
        prop_assert!(lhs <= rhs * (1.0 + 1e-10));
        for p in [1.0, 2.0] {
            let mut prev = 0.0;
            for n in [32, 48, 64, 96] {
                let v = schatten_norm(&qx.leading_block(n).unwrap(), p).unwrap();
                prop_assert!(v >= prev * (1.0 - 1e-10), "p = {} N = {}: {} < {}", p, n, v, prev);
                prev = v;
            }
        }
    }

    #[test]
    fn hausdorff_young(a in gaussian(), v in 0.5..1.5f64, p in 1.0..2.0f64) {
        // ‖x̂‖_{p'} ≤ ‖x‖_p, and in the other direction ‖x‖_{p'} ≤ ‖f‖_p
        let x = element(&a, v);
        let pc = if p == 1.0 { f64::INFINITY } else { p / (p - 1.0) };
        let t = Truncation { n: 256 };
        let hat = lp_norm(x.symbol(), pc).unwrap();
        prop_assert!(hat <= nc_lp_norm(&x, p, &t).unwrap() * 1.01);
        prop_assert!(nc_lp_norm(&x, pc, &t).unwrap() <= lp_norm(x.symbol(), p).unwrap() * 1.01);
    }
}

#[test]
fn commutative_limit_matches_classical_route() {
    let g = Gaussian {
        center: vec![0.3, -0.2],
        width: 1.2,
        freq: vec![0.1, 0.0],
        amp: Complex64::new(1.0, 0.0),
    };
    let x = element(&g, 0.0);
    // U_0(f) has L_2 norm ‖f‖_2 by Plancherel on the grid
    let l2 = nc_lp_norm(&x, 2.0, &Truncation::default()).unwrap();
    let f2 = lp_norm(x.symbol(), 2.0).unwrap();
    assert!((l2 - f2).abs() < 1e-3 * f2, "{l2} vs {f2}");
}
