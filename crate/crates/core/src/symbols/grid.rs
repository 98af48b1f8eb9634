use crate::error::{Error, Result};

/// Uniform grid `{-L + j h : 0 <= j < n}^d` with `h = 2L / n`.
///
/// `n` is even, so the origin is always the node `j = n/2` on every axis.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Grid {
    d: usize,
    half_width: f64,
    n: usize,
}

impl Grid {
    pub fn new(d: usize, half_width: f64, n: usize) -> Result<Self> {
        if !(1..=3).contains(&d) {
            return Err(Error::UnsupportedDimension(d));
        }
        if n < 16 || !n.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "n = {n} must be even and >= 16"
            )));
        }
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::InvalidGrid(format!("half width L = {half_width}")));
        }
        Ok(Self { d, half_width, n })
    }

    /// Desk-scale default box: `L = 16, n = 512` in 2-D, `L = 8, n = 128` in 3-D.
    pub fn desk_default(d: usize) -> Result<Self> {
        match d {
            1 => Self::new(1, 16.0, 512),
            2 => Self::new(2, 16.0, 512),
            3 => Self::new(3, 8.0, 128),
            _ => Err(Error::UnsupportedDimension(d)),
        }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn points_per_axis(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.n as f64
    }

    /// Quadrature weight `h^d` attached to each node.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.d as i32)
    }

    pub fn len(&self) -> usize {
        self.n.pow(self.d as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn coord(&self, j: usize) -> f64 {
        -self.half_width + j as f64 * self.spacing()
    }

    /// Axis indices of a flat (row-major) index.
    pub fn unflatten(&self, mut flat: usize) -> [usize; 3] {
        let mut idx = [0; 3];
        for axis in (0..self.d).rev() {
            idx[axis] = flat % self.n;
            flat /= self.n;
        }
        idx
    }

    pub fn flatten(&self, idx: &[usize]) -> usize {
        idx[..self.d].iter().fold(0, |acc, &j| acc * self.n + j)
    }

    /// Coordinates of the node with flat index `flat`.
    pub fn point(&self, flat: usize) -> [f64; 3] {
        let idx = self.unflatten(flat);
        let mut p = [0.0; 3];
        for axis in 0..self.d {
            p[axis] = self.coord(idx[axis]);
        }
        p
    }

    pub fn origin_index(&self) -> usize {
        let mid = [self.n / 2; 3];
        self.flatten(&mid)
    }

    /// The frequency grid of the discrete transform: spacing `1/(2L)`, same `n`.
    pub fn dual(&self) -> Self {
        Self {
            d: self.d,
            half_width: self.n as f64 / (4.0 * self.half_width),
            n: self.n,
        }
    }

    pub fn same_nodes(&self, other: &Grid) -> bool {
        self.d == other.d
            && self.n == other.n
            && (self.half_width - other.half_width).abs() <= 1e-12 * self.half_width
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_parameters() {
        assert!(Grid::new(4, 1.0, 16).is_err());
        assert!(Grid::new(2, 1.0, 15).is_err());
        assert!(Grid::new(2, 1.0, 8).is_err());
        assert!(Grid::new(2, 0.0, 16).is_err());
    }

    #[test]
    fn origin_is_a_node() {
        let g = Grid::new(2, 3.0, 64).unwrap();
        let p = g.point(g.origin_index());
        assert_eq!(p[0], 0.0);
        assert_eq!(p[1], 0.0);
    }

    #[test]
    fn dual_of_dual_is_identity() {
        let g = Grid::new(3, 5.0, 32).unwrap();
        let dd = g.dual().dual();
        assert!(g.same_nodes(&dd));
        assert!((g.dual().spacing() - 1.0 / 10.0).abs() < 1e-15);
    }

    #[test]
    fn flatten_roundtrip() {
        let g = Grid::new(3, 1.0, 16).unwrap();
        for flat in [0, 17, 4095, 1234] {
            assert_eq!(g.flatten(&g.unflatten(flat)), flat);
        }
    }
}
