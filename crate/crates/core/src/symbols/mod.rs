//! Grids, sampled functions, classical Fourier analysis on R^d and
//! quadrature for the sphere measure.

mod analytic;
mod fourier;
mod grid;
mod sampled;
mod sphere;

pub use analytic::{Gaussian, GaussianSum, PointSymbol};
pub use fourier::{classical_ft, FtDirection};
pub use grid::Grid;
pub use sampled::{lp_norm, SampledSymbol};
pub use sphere::{lq_sphere_norm, sphere_rule, Arc, SphereRule};
