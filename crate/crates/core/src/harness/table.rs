//! Restriction ratios `‖x̂‖_{L_q(S¹)} / ‖x‖_{L_p}` over the test families,
//! and the extension-operator ratio sweep.

use num_complex::Complex64;

use super::config::ExperimentConfig;
use super::families::{
    arc_densities, arc_density_value, gaussians, knapp_orientations, random_symbols, Family,
};
use super::report::{Report, Row};
use crate::error::Result;
use crate::matrix_rep::{quantize, schatten_from_singular, schatten_norm, singular_values};
use crate::restriction::{extend, restrict_norm, restrict_norm_of, KnappCap};
use crate::symbols::{lp_norm, lq_sphere_norm, sphere_rule, Arc, Grid, PointSymbol, SphereRule};
use crate::weyl::{Theta, WeylElement};

fn conj(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else {
        p / (p - 1.0)
    }
}

/// Where `(p, q)` sits relative to the admissible range `q ≤ p'/3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Inside,
    Outside,
    /// Between `p'/3` and `1.2 p'/3`: no expectation.
    Margin,
}

pub fn regime(p: f64, q: f64) -> Regime {
    let edge = conj(p) / 3.0;
    if q <= edge {
        Regime::Inside
    } else if q >= 1.2 * edge {
        Regime::Outside
    } else {
        Regime::Margin
    }
}

/// Norms of a δ-independent element: restriction per `q`, `L_p` per `p`.
struct Fixed {
    family: Family,
    index: usize,
    restrict: Vec<f64>,
    nc: Vec<f64>,
    sup: f64,
}

fn fixed_elements(cfg: &ExperimentConfig, rule: &SphereRule) -> Result<Vec<Fixed>> {
    let grid = Grid::new(2, cfg.grid_l, cfg.grid_n)?;
    let theta = Theta::planar(cfg.table_theta);
    let mut sampled = Vec::new();
    for (i, g) in gaussians(cfg.seed, cfg.family_size).iter().enumerate() {
        sampled.push((Family::Gaussian, i, g.sample(grid)?));
    }
    for (i, g) in random_symbols(cfg.seed, cfg.family_size).iter().enumerate() {
        sampled.push((Family::Random, i, g.sample(grid)?));
    }
    let mut out = Vec::new();
    for (family, index, f) in sampled {
        let x = WeylElement::new(f, theta.clone())?;
        let restrict = cfg
            .pq
            .iter()
            .map(|pq| restrict_norm(&x, pq[1], rule))
            .collect::<Result<Vec<_>>>()?;
        let nc = if cfg.table_theta == 0.0 {
            let opts = crate::matrix_rep::Truncation { n: cfg.n };
            cfg.pq
                .iter()
                .map(|pq| crate::matrix_rep::nc_lp_norm(&x, pq[0], &opts))
                .collect::<Result<Vec<_>>>()?
        } else {
            let op = quantize(x.symbol(), cfg.table_theta, cfg.n)?;
            let sv = singular_values(&op);
            cfg.pq
                .iter()
                .map(|pq| schatten_from_singular(&sv, op.trace_scale(), pq[0]))
                .collect::<Result<Vec<_>>>()?
        };
        let sup = lp_norm(x.symbol(), f64::INFINITY)?;
        out.push(Fixed {
            family,
            index,
            restrict,
            nc,
            sup,
        });
    }
    Ok(out)
}

/// For each `(p, q)` and δ: every family ratio, the family sup, and the
/// growth `sup(δ_min)/sup(δ_max)` classified as GROWING or FLAT.
pub fn run_full_restriction_table(cfg: &ExperimentConfig) -> Result<Report> {
    let mut rep = Report::new("table", cfg.hash(), cfg.seed);
    let rule = sphere_rule(2, cfg.sphere_nodes, None)?;
    let fixed = fixed_elements(cfg, &rule)?;
    let orientations = knapp_orientations(cfg.seed, cfg.family_size);
    let mut deltas = cfg.table_deltas.clone();
    deltas.sort_by(|a, b| b.total_cmp(a));

    // ‖x̂‖_∞ ≤ ‖x‖_1 whenever p = 1 is tabulated
    let p1 = cfg.pq.iter().position(|pq| pq[0] == 1.0);
    let mut sup_vs_l1 = 0.0f64;

    let mut sups = vec![Vec::new(); cfg.pq.len()];
    for &delta in &deltas {
        let caps: Vec<KnappCap> = orientations
            .iter()
            .map(|&o| KnappCap::new(delta, o))
            .collect::<Result<_>>()?;
        for (k, pq) in cfg.pq.iter().enumerate() {
            let [p, q] = *pq;
            let tag = format!("p={p};q={q};delta={delta}");
            let mut best = 0.0f64;
            for fx in &fixed {
                let r = fx.restrict[k] / fx.nc[k];
                best = best.max(r);
                rep.push(Row::info(
                    "ratio",
                    format!("{tag};family={};index={}", fx.family.tag(), fx.index),
                    r,
                ));
            }
            for (i, cap) in caps.iter().enumerate() {
                let nc = cap.nc_norm(cfg.table_theta, p, cfg.mode_budget)?;
                let r = restrict_norm_of(cap, q, &rule)? / nc;
                best = best.max(r);
                rep.push(Row::info(
                    "ratio",
                    format!("{tag};family=knapp;index={i}"),
                    r,
                ));
                if Some(k) == p1 {
                    sup_vs_l1 = sup_vs_l1.max(1.0 / nc);
                }
            }
            rep.push(Row::info("sup_ratio", tag, best));
            sups[k].push(best);
        }
    }
    if let Some(k) = p1 {
        for fx in &fixed {
            sup_vs_l1 = sup_vs_l1.max(fx.sup / fx.nc[k]);
        }
        rep.push(Row::at_most("sup_vs_l1", "p=1".into(), sup_vs_l1, 1.01));
    }

    for (k, pq) in cfg.pq.iter().enumerate() {
        let [p, q] = *pq;
        let s = &sups[k];
        let growth = s[s.len() - 1] / s[0];
        let tag = format!(
            "p={p};q={q};from_delta={};to_delta={}",
            deltas[0],
            deltas[deltas.len() - 1]
        );
        let label = if growth >= cfg.growing_min {
            "GROWING"
        } else if growth <= cfg.flat_max {
            "FLAT"
        } else {
            "UNDECIDED"
        };
        rep.push(match regime(p, q) {
            Regime::Inside => Row::gate(
                "growth",
                format!("{tag};label={label}"),
                growth,
                format!("FLAT: <= {}", cfg.flat_max),
                growth <= cfg.flat_max,
            ),
            Regime::Outside => Row::gate(
                "growth",
                format!("{tag};label={label}"),
                growth,
                format!("GROWING: >= {}", cfg.growing_min),
                growth >= cfg.growing_min,
            ),
            Regime::Margin => Row::info("growth", format!("{tag};label={label}"), growth),
        });
    }

    extension_sweep(cfg, &mut rep)?;
    Ok(rep)
}

/// `‖∫ U_θ(ξ)^* g dσ‖_{p'} / ‖g‖_{q'}` at `p = 5/4`, `q = p'/3`, over random
/// densities on the upper arc; the band is recorded, not gated. The
/// quadrature refinement check on `g ≡ 1` is gated at 0.5%.
fn extension_sweep(cfg: &ExperimentConfig, rep: &mut Report) -> Result<()> {
    if cfg.table_theta == 0.0 {
        return Ok(());
    }
    let theta = Theta::planar(cfg.table_theta);
    let p = 1.25;
    let (pp, qq) = (conj(p), conj(conj(p) / 3.0));
    let rule = sphere_rule(2, 64, Some(Arc::UPPER_CAP))?;
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for c in arc_densities(cfg.seed, cfg.extension_samples) {
        let g: Vec<Complex64> = rule
            .nodes()
            .map(|xi| arc_density_value(&c, xi[0]))
            .collect();
        let mods: Vec<f64> = g.iter().map(|v| v.norm()).collect();
        let r = schatten_norm(&extend(&g, &rule, &theta, cfg.n)?, pp)?
            / lq_sphere_norm(&mods, qq, &rule)?;
        lo = lo.min(r);
        hi = hi.max(r);
    }
    let tag = format!("p={p};samples={}", cfg.extension_samples);
    rep.push(Row::info("extension_ratio_min", tag.clone(), lo));
    rep.push(Row::info("extension_ratio_max", tag.clone(), hi));
    rep.push(Row::info("extension_ratio_band", tag, hi / lo));

    let ones = |m: usize| -> Result<f64> {
        let rule = sphere_rule(2, m, Some(Arc::UPPER_CAP))?;
        let g = vec![Complex64::new(1.0, 0.0); rule.len()];
        schatten_norm(&extend(&g, &rule, &theta, cfg.n)?, pp)
    };
    let (a, b) = (ones(64)?, ones(128)?);
    rep.push(Row::at_most(
        "extension_refinement",
        format!("p_conj={pp};m=64->128"),
        (a - b).abs() / b,
        5e-3,
    ));
    Ok(())
}
