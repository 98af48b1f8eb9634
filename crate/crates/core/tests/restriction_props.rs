use std::f64::consts::PI;

use proptest::prelude::*;
use qeuclid::restriction::sector::{in_annulus, sector_index};
use qeuclid::restriction::{
    annulus_lq_norm, bilinear_sup, c_exponent, dsigma_check, dsigma_radial, in_difference,
    index_families, overlap_area, restrict_norm_of, tomas_stein_endpoint, KnappCap, SectorAnnulus,
};
use qeuclid::symbols::{sphere_rule, Gaussian};
use qeuclid::Complex64;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dsigma_quadrature_matches_closed_form(r in 0.0..40.0f64, a in 0.0..(2.0 * PI), b in 0.0..PI) {
        let s2 = [r * a.cos(), r * a.sin()];
        let z = dsigma_check(&s2, 2).unwrap();
        prop_assert!((z.re - dsigma_radial(r, 2).unwrap()).abs() < 1e-9 && z.im.abs() < 1e-9);
        let s3 = [r * b.sin() * a.cos(), r * b.sin() * a.sin(), r * b.cos()];
        let z = dsigma_check(&s3, 3).unwrap();
        prop_assert!((z.re - dsigma_radial(r, 3).unwrap()).abs() < 1e-9 && z.im.abs() < 1e-9);
    }

    #[test]
    fn c_exponent_sign_tracks_endpoint(p in 1.0..2.0f64, d in 2usize..4) {
        let c = c_exponent(p, d).unwrap();
        let end = tomas_stein_endpoint(d);
        prop_assume!((p - end).abs() > 1e-12);
        prop_assert_eq!(c < 0.0, p < end);
        // affine in 1/p with slope -(d + 1)
        let c2 = c_exponent((p + 2.0) / 2.0, d).unwrap();
        let expect = c - (d as f64 + 1.0) * (2.0 / (p + 2.0) - 1.0 / p);
        prop_assert!((c2 - expect).abs() < 1e-12);
    }

    #[test]
    fn sectors_partition_the_annulus(k in 3i32..12, r in -1.0..1.0f64, a in 0.0..(2.0 * PI)) {
        let delta = (2.0f64).powi(-k);
        let rad = 1.0 + 0.999 * delta * r;
        let xi = [rad * a.cos(), rad * a.sin()];
        prop_assert!(in_annulus(delta, &xi));
        let ell = sector_index(delta, &xi).unwrap();
        let families = index_families(delta).unwrap();
        let hits: usize = families.iter().flatten().filter(|&&l| SectorAnnulus::new(delta, l).unwrap().contains(&xi)).count();
        prop_assert_eq!(hits, 1);
        prop_assert!(SectorAnnulus::new(delta, ell).unwrap().contains(&xi));
    }

    #[test]
    fn overlap_area_is_symmetric(k in 4i32..9, x in -0.2..0.2f64, y in -0.2..0.2f64, i in 0usize..3) {
        // |(z + S_l) ∩ S_l'| = |(-z + S_l') ∩ S_l|, to quadrature accuracy:
        // the angular integrand has kinks where the radial interval changes
        let delta = (2.0f64).powi(-k);
        let fam = &index_families(delta).unwrap()[0];
        let (l, lp) = (fam[0], fam[i.min(fam.len() - 1)]);
        let a = overlap_area(delta, l, lp, [x, y]).unwrap();
        let b = overlap_area(delta, lp, l, [-x, -y]).unwrap();
        let scale = SectorAnnulus::new(delta, l).unwrap().area();
        prop_assert!((a - b).abs() <= 1e-3 * scale, "{} vs {}", a, b);
        if a > 1e-12 {
            // a positive overlap at z puts z in the difference set
            prop_assert!(in_difference(delta, l, lp, [x, y]).unwrap());
        }
    }

    #[test]
    fn restriction_is_homogeneous(c in 0.1..10.0f64, ph in 0.0..(2.0 * PI), q in 1.0..4.0f64) {
        let rule = sphere_rule(2, 512, None).unwrap();
        let g = Gaussian { center: vec![0.2, 0.1], width: 1.3, freq: vec![0.0, 0.1], amp: Complex64::new(1.0, 0.0) };
        let scaled = Gaussian { amp: Complex64::from_polar(c, ph), ..g.clone() };
        let a = restrict_norm_of(&g, q, &rule).unwrap();
        let b = restrict_norm_of(&scaled, q, &rule).unwrap();
        prop_assert!((b - c * a).abs() <= 1e-12 * b);
        let a = annulus_lq_norm(&g, 0.125, q, 0.125 / 8.0).unwrap();
        let b = annulus_lq_norm(&scaled, 0.125, q, 0.125 / 8.0).unwrap();
        prop_assert!((b - c * a).abs() <= 1e-12 * b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn knapp_norms_are_rotation_invariant(k in 4i32..10, phi in 0.0..(2.0 * PI), p in 1.0..2.0f64) {
        let delta = (2.0f64).powi(-k);
        let a = KnappCap::new(delta, 0.0).unwrap().nc_norm(1.0, p, 20_000).unwrap();
        let b = KnappCap::new(delta, phi).unwrap().nc_norm(1.0, p, 20_000).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a);
    }
}

#[test]
fn bilinear_sup_is_symmetric_and_diagonal_dominates() {
    let delta = 1.0 / 64.0;
    let fam = &index_families(delta).unwrap()[0];
    let diag = bilinear_sup(delta, fam[0], fam[0]).unwrap().value;
    let area = SectorAnnulus::new(delta, fam[0]).unwrap().area();
    assert!((diag - area).abs() < 1e-3 * area, "{diag} vs {area}");
    let (l, lp) = (fam[0], fam[fam.len() - 1]);
    let ab = bilinear_sup(delta, l, lp).unwrap();
    let ba = bilinear_sup(delta, lp, l).unwrap();
    assert!((ab.value - ba.value).abs() < 1e-12 * ab.value);
    assert!(
        (ab.argmax[0] + ba.argmax[0]).abs() < 1e-12 && (ab.argmax[1] + ba.argmax[1]).abs() < 1e-12
    );
    assert!(ab.value <= diag);
}
