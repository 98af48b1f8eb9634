//! Seeded test families.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::symbols::{Gaussian, GaussianSum};

/// Independent streams per family, so resizing one leaves the others fixed.
fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn random_gaussian(r: &mut ChaCha8Rng, amp: Complex64) -> Gaussian {
    let rc = 2.0 * r.gen::<f64>().sqrt();
    let ac = 2.0 * PI * r.gen::<f64>();
    let rw = 0.3 * r.gen::<f64>().sqrt();
    let aw = 2.0 * PI * r.gen::<f64>();
    Gaussian {
        center: vec![rc * ac.cos(), rc * ac.sin()],
        width: r.gen_range(1.0..=1.6),
        freq: vec![rw * aw.cos(), rw * aw.sin()],
        amp,
    }
}

/// Widths in `[1, 1.6]`, centers in the disk of radius 2, frequencies in
/// the disk of radius 0.3.
pub fn gaussians(seed: u64, count: usize) -> Vec<Gaussian> {
    let mut r = rng(seed, 1);
    (0..count)
        .map(|_| random_gaussian(&mut r, Complex64::new(1.0, 0.0)))
        .collect()
}

/// Orientations of Knapp caps, uniform on the circle.
pub fn knapp_orientations(seed: u64, count: usize) -> Vec<f64> {
    let mut r = rng(seed, 2);
    (0..count).map(|_| 2.0 * PI * r.gen::<f64>()).collect()
}

/// Three-term Gaussian sums with random complex amplitudes.
pub fn random_symbols(seed: u64, count: usize) -> Vec<GaussianSum> {
    let mut r = rng(seed, 3);
    (0..count)
        .map(|_| GaussianSum {
            terms: (0..3)
                .map(|_| {
                    let amp = Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0));
                    random_gaussian(&mut r, amp)
                })
                .collect(),
        })
        .collect()
}

/// `count` (multiplier, element) Gaussian pairs.
pub fn multiplier_pairs(seed: u64, count: usize) -> Vec<(Gaussian, Gaussian)> {
    let mut r = rng(seed, 4);
    (0..count)
        .map(|_| {
            let psi = random_gaussian(&mut r, Complex64::new(1.0, 0.0));
            let amp = Complex64::new(r.gen_range(0.5..2.0), 0.0);
            let x = random_gaussian(&mut r, amp);
            (psi, x)
        })
        .collect()
}

/// Random trigonometric densities on the upper arc: coefficients of
/// `cos(kπ t)`, `sin(kπ t)` for `k < 4` in the abscissa `t`.
pub fn arc_densities(seed: u64, count: usize) -> Vec<[Complex64; 8]> {
    let mut r = rng(seed, 5);
    (0..count)
        .map(|_| {
            std::array::from_fn(|_| Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)))
        })
        .collect()
}

pub fn arc_density_value(c: &[Complex64; 8], t: f64) -> Complex64 {
    (0..4)
        .map(|k| {
            let a = k as f64 * PI * t;
            c[2 * k] * a.cos() + c[2 * k + 1] * a.sin()
        })
        .sum()
}

/// The family tag of an element in reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Family {
    Gaussian,
    Knapp,
    Random,
}

impl Family {
    pub fn tag(self) -> &'static str {
        match self {
            Family::Gaussian => "gaussian",
            Family::Knapp => "knapp",
            Family::Random => "random",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_and_in_range() {
        assert_eq!(gaussians(5, 10), gaussians(5, 10));
        assert_ne!(gaussians(5, 3), gaussians(6, 3));
        // streams are independent of the other families' sizes
        assert_eq!(gaussians(5, 3)[..], gaussians(5, 10)[..3]);
        for g in gaussians(11, 50) {
            assert!((1.0..=1.6).contains(&g.width));
            assert!(g.center[0].hypot(g.center[1]) <= 2.0);
            assert!(g.freq[0].hypot(g.freq[1]) <= 0.3);
        }
        assert!(knapp_orientations(1, 20)
            .iter()
            .all(|a| (0.0..2.0 * PI).contains(a)));
        assert_eq!(random_symbols(2, 4).len(), 4);
    }
}
