//! Annulus and sector cutoffs.
//!
//! `χ^δ` is the indicator of `1 - δ < |ξ| < 1 + δ`; the sector `ℓ` adds
//! `2πℓδ^{1/2} ≤ arg ξ < 2π(ℓ+1)δ^{1/2}` with `arg ∈ [0, 2π)`. Indices run
//! over `0..=K`, `K = ⌊δ^{-1/2}⌋`; the last sector absorbs whatever angle is
//! left, so the sectors partition the annulus.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::symbols::{Grid, SampledSymbol};

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SectorAnnulus {
    delta: f64,
    ell: usize,
}

pub fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::OutOfRange(format!("δ = {delta} outside (0, 1/2)")));
    }
    Ok(())
}

/// `K = ⌊δ^{-1/2}⌋`, the largest sector index.
pub fn last_sector(delta: f64) -> usize {
    (1.0 / delta.sqrt() + 1e-12).floor() as usize
}

pub fn sector_width(delta: f64) -> f64 {
    2.0 * PI * delta.sqrt()
}

/// `arg ξ` in `[0, 2π)`.
pub fn arg_2pi(x: f64, y: f64) -> f64 {
    let a = y.atan2(x);
    if a < 0.0 {
        a + 2.0 * PI
    } else {
        a
    }
}

pub fn in_annulus(delta: f64, xi: &[f64]) -> bool {
    let r = xi[0].hypot(xi[1]);
    r > 1.0 - delta && r < 1.0 + delta
}

/// Index of the sector containing `ξ`, if `ξ` lies in the annulus.
pub fn sector_index(delta: f64, xi: &[f64]) -> Option<usize> {
    if !in_annulus(delta, xi) {
        return None;
    }
    let ell = (arg_2pi(xi[0], xi[1]) / sector_width(delta)).floor() as usize;
    Some(ell.min(last_sector(delta)))
}

impl SectorAnnulus {
    pub fn new(delta: f64, ell: usize) -> Result<Self> {
        check_delta(delta)?;
        let k = last_sector(delta);
        if ell > k {
            return Err(Error::OutOfRange(format!(
                "sector {ell} > {k} at δ = {delta}"
            )));
        }
        Ok(Self { delta, ell })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    /// `[φ₀, φ₁)`; the last sector ends at `2π`.
    pub fn angles(&self) -> (f64, f64) {
        let w = sector_width(self.delta);
        let start = self.ell as f64 * w;
        let end = if self.ell == last_sector(self.delta) {
            2.0 * PI
        } else {
            start + w
        };
        (start, end)
    }

    pub fn contains(&self, xi: &[f64]) -> bool {
        sector_index(self.delta, xi) == Some(self.ell)
    }

    /// `2π δ^{1/2}`-wide sector area `(φ₁ - φ₀)((1+δ)² - (1-δ)²)/2`.
    pub fn area(&self) -> f64 {
        let (a, b) = self.angles();
        (b - a) * 2.0 * self.delta
    }

    /// Midpoint of the arc `|ξ| = 1` inside the sector.
    pub fn center(&self) -> [f64; 2] {
        let (a, b) = self.angles();
        let m = 0.5 * (a + b);
        [m.cos(), m.sin()]
    }
}

/// Splits `0..=K` into nine families: eight by the octant of the sector's
/// starting angle, plus the adjusted last sector on its own.
pub fn index_families(delta: f64) -> Result<Vec<Vec<usize>>> {
    check_delta(delta)?;
    let k = last_sector(delta);
    let w = sector_width(delta);
    let mut fams = vec![Vec::new(); 9];
    for ell in 0..k {
        let oct = ((ell as f64 * w) / (PI / 4.0) + 1e-12).floor() as usize;
        fams[oct.min(7)].push(ell);
    }
    fams[8].push(k);
    Ok(fams)
}

/// Minimum points per axis so that `h ≤ δ/4` on a box of half-width `l`.
pub fn min_points_for(delta: f64, half_width: f64) -> usize {
    let n = (8.0 * half_width / delta).ceil() as usize;
    n + n % 2
}

fn check_resolution(f: &SampledSymbol, delta: f64) -> Result<()> {
    check_grid_resolution(f.grid(), delta)
}

/// `d = 2` and `h ≤ δ/4`, with a minimum-`n` hint on failure.
pub fn check_grid_resolution(g: &Grid, delta: f64) -> Result<()> {
    check_delta(delta)?;
    if g.dim() != 2 {
        return Err(Error::UnsupportedDimension(g.dim()));
    }
    if g.spacing() > delta / 4.0 {
        return Err(Error::UnderResolved(format!(
            "h = {} > δ/4 = {}; use n ≥ {} on this box",
            g.spacing(),
            delta / 4.0,
            min_points_for(delta, g.half_width())
        )));
    }
    Ok(())
}

/// `χ^δ f`, sampled at the nodes.
pub fn annulus_cutoff(f: &SampledSymbol, delta: f64) -> Result<SampledSymbol> {
    check_resolution(f, delta)?;
    f.map(|xi, v| {
        if in_annulus(delta, xi) {
            v
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// `χ_ℓ^δ f`, sampled at the nodes.
pub fn sector_cutoff(f: &SampledSymbol, sec: &SectorAnnulus) -> Result<SampledSymbol> {
    check_resolution(f, sec.delta)?;
    f.map(|xi, v| {
        if sec.contains(xi) {
            v
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Sorted disjoint intervals on the line.
pub(crate) type Intervals = Vec<(f64, f64)>;

fn intersect(a: &Intervals, b: &Intervals) -> Intervals {
    let mut out = Vec::new();
    for &(a0, a1) in a {
        for &(b0, b1) in b {
            let lo = a0.max(b0);
            let hi = a1.min(b1);
            if hi > lo {
                out.push((lo, hi));
            }
        }
    }
    out.sort_by(|x, y| x.0.total_cmp(&y.0));
    out
}

/// `{r ∈ [lo, hi] : c₀ < r² - 2br + c < c₁}` for `|r u - z|²` with
/// `b = u·z`, `c = |z|²`.
fn shell_in_r(b: f64, c: f64, inner: f64, outer: f64, lo: f64, hi: f64) -> Intervals {
    // r² - 2br + c < R² ⇔ r ∈ (b - sqrt(b² - c + R²), b + sqrt(...))
    let disc_out = b * b - c + outer * outer;
    if disc_out <= 0.0 {
        return Vec::new();
    }
    let so = disc_out.sqrt();
    let within: Intervals = vec![(b - so, b + so)];
    let disc_in = b * b - c + inner * inner;
    let outside: Intervals = if disc_in <= 0.0 {
        vec![(f64::NEG_INFINITY, f64::INFINITY)]
    } else {
        let si = disc_in.sqrt();
        vec![(f64::NEG_INFINITY, b - si), (b + si, f64::INFINITY)]
    };
    intersect(&intersect(&within, &outside), &vec![(lo, hi)])
}

/// For `ξ = r u` with `r` in the annulus band, the set of `r` such that
/// `ξ - z` lies in the sector `sec`.
pub(crate) fn admissible_r(sec: &SectorAnnulus, u: [f64; 2], z: [f64; 2]) -> Intervals {
    let delta = sec.delta;
    let b = u[0] * z[0] + u[1] * z[1];
    let c = z[0] * z[0] + z[1] * z[1];
    let mut set = shell_in_r(b, c, 1.0 - delta, 1.0 + delta, 1.0 - delta, 1.0 + delta);
    if set.is_empty() {
        return set;
    }
    let (a0, a1) = sec.angles();
    if a1 - a0 >= PI {
        // wide sectors only occur for the leftover sector at coarse δ;
        // fall back to a sampled angular test
        return refine_by_angle(sec, u, z, set);
    }
    // η = r u - z inside the wedge: cross(e₀, η) ≥ 0 and cross(η, e₁) ≥ 0
    for (e, sign) in [((a0.cos(), a0.sin()), 1.0), ((a1.cos(), a1.sin()), -1.0)] {
        let slope = sign * (e.0 * u[1] - e.1 * u[0]);
        let offset = sign * (e.0 * z[1] - e.1 * z[0]);
        // slope·r - offset ≥ 0
        let half: Intervals = if slope > 0.0 {
            vec![(offset / slope, f64::INFINITY)]
        } else if slope < 0.0 {
            vec![(f64::NEG_INFINITY, offset / slope)]
        } else if offset <= 0.0 {
            vec![(f64::NEG_INFINITY, f64::INFINITY)]
        } else {
            Vec::new()
        };
        set = intersect(&set, &half);
        if set.is_empty() {
            break;
        }
    }
    set
}

fn refine_by_angle(sec: &SectorAnnulus, u: [f64; 2], z: [f64; 2], set: Intervals) -> Intervals {
    const STEPS: usize = 256;
    let mut out = Vec::new();
    for (lo, hi) in set {
        let dr = (hi - lo) / STEPS as f64;
        let mut start: Option<f64> = None;
        for i in 0..STEPS {
            let r = lo + (i as f64 + 0.5) * dr;
            let eta = [r * u[0] - z[0], r * u[1] - z[1]];
            let ang = arg_2pi(eta[0], eta[1]);
            let (a0, a1) = sec.angles();
            let inside = ang >= a0 && ang < a1;
            match (inside, start) {
                (true, None) => start = Some(lo + i as f64 * dr),
                (false, Some(s)) => {
                    out.push((s, lo + i as f64 * dr));
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            out.push((s, hi));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::{lp_norm, Grid};

    #[test]
    fn sector_bookkeeping() {
        let delta = 1.0 / 256.0;
        assert_eq!(last_sector(delta), 16);
        assert!(SectorAnnulus::new(delta, 17).is_err());
        assert!(SectorAnnulus::new(0.6, 0).is_err());
        let s = SectorAnnulus::new(delta, 3).unwrap();
        let (a, b) = s.angles();
        assert!((b - a - 2.0 * PI / 16.0).abs() < 1e-15);
        let mid = 0.5 * (a + b);
        assert!(s.contains(&[mid.cos(), mid.sin()]));
        assert!(!s.contains(&[1.1 * mid.cos(), 1.1 * mid.sin()]));
        // δ^{-1/2} = 16 exactly: the leftover sector is empty
        let last = SectorAnnulus::new(delta, 16).unwrap();
        assert_eq!(last.area(), 0.0);
    }

    #[test]
    fn families_cover_each_index_once() {
        for delta in [1.0 / 64.0, 1.0 / 200.0, 1.0 / 1024.0] {
            let fams = index_families(delta).unwrap();
            assert_eq!(fams.len(), 9);
            let mut all: Vec<usize> = fams.iter().flatten().copied().collect();
            all.sort();
            assert_eq!(all, (0..=last_sector(delta)).collect::<Vec<_>>());
            let w = sector_width(delta);
            for fam in &fams[..8] {
                if let (Some(lo), Some(hi)) = (fam.first(), fam.last()) {
                    assert!((hi - lo + 1) as f64 * w <= PI / 4.0 + w + 1e-12);
                }
            }
        }
    }

    #[test]
    fn cutoffs_partition_the_annulus() {
        let delta = 1.0 / 16.0;
        let grid = Grid::new(2, 1.25, 160).unwrap();
        let f = SampledSymbol::from_fn(grid, |t| Complex64::new(1.0 + t[0], t[1])).unwrap();
        let ann = annulus_cutoff(&f, delta).unwrap();
        let mut sum = SampledSymbol::zeros(grid);
        let cuts: Vec<SampledSymbol> = (0..=last_sector(delta))
            .map(|l| sector_cutoff(&f, &SectorAnnulus::new(delta, l).unwrap()).unwrap())
            .collect();
        for c in &cuts {
            sum = sum.add(c).unwrap();
        }
        assert_eq!(sum, ann);
        let prod = cuts[1].pointwise_mul(&cuts[2]).unwrap();
        assert!(prod.values().iter().all(|v| *v == Complex64::new(0.0, 0.0)));
    }

    #[test]
    fn annulus_area_and_resolution() {
        let grid = Grid::new(2, 1.5, 512).unwrap();
        let one = SampledSymbol::from_fn(grid, |_| Complex64::new(1.0, 0.0)).unwrap();
        let ann = annulus_cutoff(&one, 0.25).unwrap();
        assert!((lp_norm(&ann, 1.0).unwrap() - PI).abs() < 0.02 * PI);
        match annulus_cutoff(&one, 1.0 / 256.0) {
            Err(Error::UnderResolved(msg)) => assert!(msg.contains("n ≥ 3072")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn sector_area_on_grid() {
        let delta = 1.0 / 256.0;
        let grid = Grid::new(2, 1.25, 2560).unwrap();
        let sec = SectorAnnulus::new(delta, 2).unwrap();
        let one = SampledSymbol::from_fn(grid, |_| Complex64::new(1.0, 0.0)).unwrap();
        let cut = sector_cutoff(&one, &sec).unwrap();
        let analytic =
            2.0 * PI * delta.sqrt() * ((1.0 + delta).powi(2) - (1.0 - delta).powi(2)) / 2.0;
        assert!((lp_norm(&cut, 1.0).unwrap() - analytic).abs() < 0.1 * analytic);
        assert!((sec.area() - analytic).abs() < 1e-15);
    }

    #[test]
    fn admissible_r_matches_point_tests() {
        let delta = 1.0 / 64.0;
        let s = SectorAnnulus::new(delta, 1).unwrap();
        let z = [0.02, -0.05];
        for phi in [0.3, 0.5, 0.7, 1.0] {
            let u = [f64::cos(phi), f64::sin(phi)];
            let set = admissible_r(&s, u, z);
            for i in 0..400 {
                let r = 1.0 - delta + (i as f64 + 0.5) * 2.0 * delta / 400.0;
                let inside = s.contains(&[r * u[0] - z[0], r * u[1] - z[1]]);
                let claimed = set.iter().any(|(a, b)| r > *a && r < *b);
                assert_eq!(inside, claimed, "φ={phi} r={r}");
            }
        }
    }
}
