//! Finite model of `R_θ²`: Weyl quantization into the number basis and
//! noncommutative `L_p` norms.

pub mod displacement;
pub mod norm;
pub mod quantize;
pub mod radial;

pub use displacement::{displacement_block, displacement_elem};
pub use norm::{
    convergence_report, nc_lp_norm, ConvergenceReport, ConvergenceRow, Truncation,
    DEFAULT_TRUNCATION,
};
pub use quantize::{
    alias_level, kappa_for, quantize, quantize_measure, schatten_from_singular, schatten_norm,
    singular_values, trace_scale_for, TruncatedOperator, MAX_ALIAS_FRACTION, MIN_TRUNCATION,
};
pub use radial::{
    classical_radial_norm, hybrid_norm, radial_spectrum, raised_cosine, HybridNorm, RadialProfile,
    DEFAULT_MODE_BUDGET,
};
