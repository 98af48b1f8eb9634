//! Restriction theory on quantum Euclidean spaces: restriction and extension,
//! annulus and sector cutoffs, bilinear sector geometry and overlap counts,
//! Knapp caps, and the Tomas–Stein dyadic pieces.

pub mod bilinear;
pub mod knapp;
pub mod restrict;
pub mod sector;
pub mod tomas_stein;

pub use bilinear::{
    bilinear_sup, in_difference, overlap_area, overlap_count, probe_lattice, BilinearSup,
};
pub use knapp::{knapp_symbol, KnappCap};
pub use restrict::{annulus_lq_norm, extend, restrict_norm, restrict_norm_of};
pub use sector::{annulus_cutoff, index_families, sector_cutoff, SectorAnnulus};
pub use tomas_stein::{
    c_exponent, dsigma_check, dsigma_radial, dyadic_ft_sup, dyadic_ft_sup_fft, multiplier_apply,
    tomas_stein_endpoint, DyadicPiece,
};
