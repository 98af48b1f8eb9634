//! Sector geometry: the bilinear support constant and overlap counts.

use super::config::ExperimentConfig;
use super::report::{Report, Row};
use crate::error::Result;
use crate::restriction::{
    bilinear_sup, index_families, overlap_count, probe_lattice, SectorAnnulus,
};

fn spread(v: &[f64]) -> f64 {
    let hi = v.iter().cloned().fold(0.0, f64::max);
    let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
    hi / lo
}

/// `sup_z |(z + S_ℓ) ∩ S_ℓ'| (|ℓ - ℓ'| + 1) / δ^{3/2}` over all pairs of the
/// first family, its spread across δ, and overlap counts on the probe
/// lattice.
pub fn run_sector_geometry(cfg: &ExperimentConfig) -> Result<Report> {
    let mut rep = Report::new("geometry", cfg.hash(), cfg.seed);
    let mut constants = Vec::new();
    for &delta in &cfg.bilinear_deltas {
        let fam = &index_families(delta)?[0];
        let mut c_max = 0.0f64;
        let mut diag = 0.0f64;
        let mut far = 0.0f64;
        for (i, &l) in fam.iter().enumerate() {
            for &lp in &fam[i..] {
                let v = bilinear_sup(delta, l, lp)?.value;
                let c = v * ((lp - l) as f64 + 1.0) / delta.powf(1.5);
                rep.push(Row::info(
                    "bilinear_constant",
                    format!("delta={delta};ell={l};ellp={lp}"),
                    c,
                ));
                c_max = c_max.max(c);
                if l == lp {
                    diag = diag.max(v);
                }
                if l == fam[0] && lp == fam[fam.len() - 1] {
                    far = v;
                }
            }
        }
        let area = SectorAnnulus::new(delta, fam[0])?.area();
        rep.push(Row::near(
            "bilinear_diagonal",
            format!("delta={delta}"),
            diag,
            area,
            0.15 * area,
        ));
        rep.push(Row::at_most(
            "bilinear_transversal",
            format!("delta={delta}"),
            far,
            diag,
        ));
        rep.push(Row::info(
            "bilinear_constant_max",
            format!("delta={delta}"),
            c_max,
        ));
        constants.push(c_max);
    }
    rep.push(Row::at_most(
        "bilinear_constant_spread",
        "over_delta".into(),
        spread(&constants),
        cfg.bilinear_spread,
    ));

    let probes = probe_lattice(cfg.overlap_probes, 3.0);
    for &m0 in &cfg.overlap_m0 {
        let mut counts = Vec::new();
        for &delta in &cfg.overlap_deltas {
            let fam = &index_families(delta)?[0];
            let c = overlap_count(delta, fam, m0, &probes)? as f64;
            rep.push(Row::info(
                "overlap_count",
                format!("m0={m0};delta={delta};family_size={}", fam.len()),
                c,
            ));
            counts.push(c);
        }
        let diff = counts.iter().cloned().fold(0.0, f64::max)
            - counts.iter().cloned().fold(f64::INFINITY, f64::min);
        rep.push(Row::at_most("overlap_flat", format!("m0={m0}"), diff, 0.0));
    }
    // at desk δ the separated pairs are empty; smaller δ exercises them
    for &delta in &cfg.overlap_deep_deltas {
        let fam = &index_families(delta)?[0];
        let c = overlap_count(delta, fam, 8, &probes)? as f64;
        rep.push(Row::info(
            "overlap_count_deep",
            format!("m0=8;delta={delta};family_size={}", fam.len()),
            c,
        ));
    }
    Ok(rep)
}
