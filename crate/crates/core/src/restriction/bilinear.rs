//! Bilinear support geometry of sector pairs.
//!
//! `A_{ℓ,ℓ'}(z) = |(z + S_ℓ) ∩ S_ℓ'|` is computed in polar coordinates over
//! `S_ℓ'`: for each direction the admissible radii form a union of intervals
//! known in closed form (two circles and two half-planes), so the radial
//! integral is exact and only the angular one is quadrature.

use rayon::prelude::*;

use super::sector::{admissible_r, index_families, SectorAnnulus};
use crate::error::{Error, Result};
use crate::numerics::{composite_gl, pairwise_sum};

const FINE_PANELS: usize = 64;
const COARSE_PANELS: usize = 8;
const ORDER: usize = 8;
/// Final pattern-search step as a fraction of δ.
const REFINE_FRACTION: f64 = 1.0 / 64.0;

fn area_with(lo: &SectorAnnulus, hi: &SectorAnnulus, z: [f64; 2], panels: usize) -> f64 {
    let (a, b) = hi.angles();
    if b <= a {
        return 0.0;
    }
    let (phi, w) = composite_gl(ORDER, panels, a, b);
    let vals: Vec<f64> = phi
        .iter()
        .zip(&w)
        .map(|(p, w)| {
            let u = [p.cos(), p.sin()];
            let s: f64 = admissible_r(lo, u, z)
                .iter()
                .map(|(r0, r1)| 0.5 * (r1 * r1 - r0 * r0))
                .sum();
            w * s
        })
        .collect();
    pairwise_sum(&vals)
}

/// `|(z + S_ℓ) ∩ S_ℓ'|`.
pub fn overlap_area(delta: f64, ell: usize, ellp: usize, z: [f64; 2]) -> Result<f64> {
    let s = SectorAnnulus::new(delta, ell)?;
    let sp = SectorAnnulus::new(delta, ellp)?;
    Ok(area_with(&s, &sp, z, FINE_PANELS))
}

fn family_of(delta: f64, ell: usize) -> Result<usize> {
    index_families(delta)?
        .iter()
        .position(|f| f.contains(&ell))
        .ok_or_else(|| Error::OutOfRange(format!("sector {ell} at δ = {delta}")))
}

/// Points spanning a sector: corners and arc samples at both radii.
fn outline(s: &SectorAnnulus) -> Vec<[f64; 2]> {
    let (a, b) = s.angles();
    let d = s.delta();
    let mut pts = Vec::new();
    for i in 0..=16 {
        let phi = a + (b - a) * i as f64 / 16.0;
        for r in [1.0 - d, 1.0 + d] {
            pts.push([r * phi.cos(), r * phi.sin()]);
        }
    }
    pts
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct BilinearSup {
    pub value: f64,
    pub argmax: [f64; 2],
}

/// `sup_z |(z + S_ℓ) ∩ S_ℓ'|` for `ℓ, ℓ'` in one of the nine families.
///
/// A lattice of spacing δ over the bounding box of `S_ℓ' - S_ℓ` is scanned
/// with a cheap angular rule, then the best candidates are refined by a
/// pattern search down to step δ/64 with the full rule. The pair is
/// canonicalized to `(min, max)`, using `A_{ℓ,ℓ'}(z) = A_{ℓ',ℓ}(-z)`, so the
/// result is exactly symmetric.
pub fn bilinear_sup(delta: f64, ell: usize, ellp: usize) -> Result<BilinearSup> {
    let fa = family_of(delta, ell)?;
    let fb = family_of(delta, ellp)?;
    if fa != fb {
        return Err(Error::OutOfRange(format!(
            "sectors {ell} and {ellp} lie in different families at δ = {delta}"
        )));
    }
    let (lo_idx, hi_idx, flip) = if ell <= ellp {
        (ell, ellp, false)
    } else {
        (ellp, ell, true)
    };
    let lo = SectorAnnulus::new(delta, lo_idx)?;
    let hi = SectorAnnulus::new(delta, hi_idx)?;
    if lo.area() == 0.0 || hi.area() == 0.0 {
        return Ok(BilinearSup {
            value: 0.0,
            argmax: [0.0, 0.0],
        });
    }

    let (p_hi, p_lo) = (outline(&hi), outline(&lo));
    let mut bb = [
        f64::INFINITY,
        f64::NEG_INFINITY,
        f64::INFINITY,
        f64::NEG_INFINITY,
    ];
    for a in &p_hi {
        for b in &p_lo {
            let z = [a[0] - b[0], a[1] - b[1]];
            bb[0] = bb[0].min(z[0]);
            bb[1] = bb[1].max(z[0]);
            bb[2] = bb[2].min(z[1]);
            bb[3] = bb[3].max(z[1]);
        }
    }
    let step = delta;
    let nx = ((bb[1] - bb[0]) / step).ceil() as usize + 1;
    let ny = ((bb[3] - bb[2]) / step).ceil() as usize + 1;
    let mut coarse: Vec<(f64, [f64; 2])> = (0..nx * ny)
        .into_par_iter()
        .map(|i| {
            let z = [
                bb[0] + (i / ny) as f64 * step,
                bb[2] + (i % ny) as f64 * step,
            ];
            (area_with(&lo, &hi, z, COARSE_PANELS), z)
        })
        .collect();
    coarse.push((area_with(&lo, &hi, [0.0, 0.0], COARSE_PANELS), [0.0, 0.0]));
    coarse.sort_by(|a, b| {
        b.0.total_cmp(&a.0)
            .then(a.1[0].total_cmp(&b.1[0]))
            .then(a.1[1].total_cmp(&b.1[1]))
    });

    let mut best = (0.0, [0.0, 0.0]);
    for &(_, start) in coarse.iter().take(8) {
        let mut z = start;
        let mut val = area_with(&lo, &hi, z, FINE_PANELS);
        let mut s = 0.5 * delta;
        while s >= REFINE_FRACTION * delta {
            let mut moved = false;
            for (dx, dy) in [
                (1.0, 0.0),
                (-1.0, 0.0),
                (0.0, 1.0),
                (0.0, -1.0),
                (1.0, 1.0),
                (1.0, -1.0),
                (-1.0, 1.0),
                (-1.0, -1.0),
            ] {
                let cand = [z[0] + dx * s, z[1] + dy * s];
                let v = area_with(&lo, &hi, cand, FINE_PANELS);
                if v > val {
                    val = v;
                    z = cand;
                    moved = true;
                }
            }
            if !moved {
                s *= 0.5;
            }
        }
        if val > best.0 {
            best = (val, z);
        }
    }
    let argmax = if flip {
        [-best.1[0], -best.1[1]]
    } else {
        best.1
    };
    Ok(BilinearSup {
        value: best.0,
        argmax,
    })
}

/// Bounding radius of a sector about its arc midpoint.
fn reach(s: &SectorAnnulus) -> f64 {
    let c = s.center();
    outline(s)
        .iter()
        .map(|p| (p[0] - c[0]).hypot(p[1] - c[1]))
        .fold(0.0, f64::max)
}

/// Whether `s` lies in (the interior of) `S_ℓ' - S_ℓ`, the support of
/// `χ̃_ℓ * χ_ℓ'`: some direction of `S_ℓ'` admits radii `r` with
/// `r u - s ∈ S_ℓ`.
pub fn in_difference(delta: f64, ell: usize, ellp: usize, s: [f64; 2]) -> Result<bool> {
    let a = SectorAnnulus::new(delta, ell)?;
    let b = SectorAnnulus::new(delta, ellp)?;
    Ok(in_difference_with(&a, &b, s, reach(&a) + reach(&b)))
}

fn in_difference_with(a: &SectorAnnulus, b: &SectorAnnulus, s: [f64; 2], reach: f64) -> bool {
    let (ca, cb) = (a.center(), b.center());
    let d = [cb[0] - ca[0] - s[0], cb[1] - ca[1] - s[1]];
    if d[0].hypot(d[1]) > reach {
        return false;
    }
    let (p0, p1) = b.angles();
    const SAMPLES: usize = 512;
    (0..SAMPLES).any(|i| {
        let phi = p0 + (p1 - p0) * (i as f64 + 0.5) / SAMPLES as f64;
        !admissible_r(a, [phi.cos(), phi.sin()], s).is_empty()
    })
}

/// `max_s #{(ℓ, ℓ') ∈ I² : |ℓ - ℓ'| > m0, s ∈ S_ℓ' - S_ℓ}` over the probes.
pub fn overlap_count(
    delta: f64,
    family: &[usize],
    m0: usize,
    probes: &[[f64; 2]],
) -> Result<usize> {
    if family.is_empty() {
        return Err(Error::OutOfRange("empty index set".into()));
    }
    let sectors: Vec<SectorAnnulus> = family
        .iter()
        .map(|&l| SectorAnnulus::new(delta, l))
        .collect::<Result<_>>()?;
    let reaches: Vec<f64> = sectors.iter().map(reach).collect();
    let mut pairs = Vec::new();
    for (i, a) in family.iter().enumerate() {
        for (j, b) in family.iter().enumerate() {
            if a.abs_diff(*b) > m0 {
                pairs.push((i, j));
            }
        }
    }
    if pairs.is_empty() {
        return Ok(0);
    }
    Ok(probes
        .par_iter()
        .map(|s| {
            pairs
                .iter()
                .filter(|(i, j)| {
                    in_difference_with(&sectors[*i], &sectors[*j], *s, reaches[*i] + reaches[*j])
                })
                .count()
        })
        .max()
        .unwrap_or(0))
}

/// `size × size` lattice over `[-r, r]²`, kept inside the disk of radius `r`.
pub fn probe_lattice(size: usize, r: f64) -> Vec<[f64; 2]> {
    let mut out = Vec::new();
    for i in 0..size {
        for j in 0..size {
            let p = [
                -r + 2.0 * r * (i as f64 + 0.5) / size as f64,
                -r + 2.0 * r * (j as f64 + 0.5) / size as f64,
            ];
            if p[0].hypot(p[1]) <= r {
                out.push(p);
            }
        }
    }
    out
}
