//! Tomas–Stein components: the multiplier bound, decay of `ďσ`, growth of
//! the dyadic pieces, and the sign of `c(p, d)`.

use num_complex::Complex64;

use super::config::ExperimentConfig;
use super::families::multiplier_pairs;
use super::report::{Report, Row};
use crate::error::Result;
use crate::matrix_rep::{quantize, schatten_norm};
use crate::restriction::tomas_stein::sphere_measure;
use crate::restriction::{
    c_exponent, dsigma_check, dyadic_ft_sup, dyadic_ft_sup_fft, multiplier_apply,
    tomas_stein_endpoint,
};
use crate::symbols::{classical_ft, lp_norm, FtDirection, Grid, PointSymbol, SampledSymbol};
use crate::weyl::{Theta, WeylElement};

fn spread(v: &[f64]) -> f64 {
    v.iter().cloned().fold(0.0, f64::max) / v.iter().cloned().fold(f64::INFINITY, f64::min)
}

const SHELL_SAMPLES: usize = 400;
const P_GRID: usize = 50;

pub fn run_tomas_stein_components(cfg: &ExperimentConfig) -> Result<Report> {
    let mut rep = Report::new("tomas-stein", cfg.hash(), cfg.seed);
    multiplier_bound(cfg, &mut rep)?;
    decay_shells(cfg, &mut rep)?;
    dyadic_growth(cfg, &mut rep)?;
    exponent_signs(&mut rep)?;
    Ok(rep)
}

/// `‖T_ψ x‖_∞ ≤ ‖ψ̌‖_∞ ‖x‖_1` over random Gaussian pairs.
fn multiplier_bound(cfg: &ExperimentConfig, rep: &mut Report) -> Result<()> {
    let vartheta = if cfg.table_theta == 0.0 {
        1.0
    } else {
        cfg.table_theta
    };
    let grid = Grid::new(2, cfg.algebra_grid_l, cfg.algebra_grid_n)?;
    let mut worst = 0.0f64;
    let mut identity = 0.0f64;
    let one = SampledSymbol::from_fn(grid, |_| Complex64::new(1.0, 0.0))?;
    for (i, (psi, x)) in multiplier_pairs(cfg.seed, cfg.multiplier_pairs)
        .iter()
        .enumerate()
    {
        let psi = psi.sample(grid)?;
        let x = WeylElement::new(x.sample(grid)?, Theta::planar(vartheta))?;
        let y = multiplier_apply(&psi, &x)?;
        let same = multiplier_apply(&one, &x)?;
        identity = identity.max(lp_norm(&same.symbol().sub(x.symbol())?, f64::INFINITY)?);
        let lhs = schatten_norm(&quantize(y.symbol(), vartheta, cfg.n)?, f64::INFINITY)?;
        let psi_check = lp_norm(&classical_ft(&psi, FtDirection::Inverse)?, f64::INFINITY)?;
        let x1 = schatten_norm(&quantize(x.symbol(), vartheta, cfg.n)?, 1.0)?;
        let r = lhs / (psi_check * x1);
        rep.push(Row::info(
            "multiplier_ratio",
            format!("theta={vartheta};pair={i}"),
            r,
        ));
        worst = worst.max(r);
    }
    rep.push(Row::at_most(
        "multiplier_bound",
        format!("theta={vartheta};pairs={}", cfg.multiplier_pairs),
        worst,
        1.0 + cfg.multiplier_slack,
    ));
    rep.push(Row::at_most(
        "multiplier_identity",
        format!("theta={vartheta};psi=1"),
        identity,
        1e-14,
    ));
    Ok(())
}

/// `max |ďσ(s)| (1 + |s|)^{(d-1)/2}` on dyadic shells of `[4, 64]`.
fn decay_shells(cfg: &ExperimentConfig, rep: &mut Report) -> Result<()> {
    for d in [2usize, 3] {
        let dir: Vec<f64> = if d == 2 {
            vec![0.6, 0.8]
        } else {
            vec![2.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0]
        };
        let e = 0.5 * (d as f64 - 1.0);
        let mut maxima = Vec::new();
        for j in 2..6 {
            let lo = (2.0f64).powi(j);
            let mut m = 0.0f64;
            for i in 0..=SHELL_SAMPLES {
                let r = lo + lo * i as f64 / SHELL_SAMPLES as f64;
                let s: Vec<f64> = dir.iter().map(|u| u * r).collect();
                m = m.max(dsigma_check(&s, d)?.norm() * (1.0 + r).powf(e));
            }
            rep.push(Row::info(
                "decay_shell_max",
                format!("d={d};shell={lo}-{}", 2.0 * lo),
                m,
            ));
            maxima.push(m);
        }
        rep.push(Row::at_most(
            "decay_spread",
            format!("d={d}"),
            spread(&maxima),
            cfg.decay_spread,
        ));
    }
    Ok(())
}

/// `‖(φ_k ďσ)^‖_∞ / 2^k` for `k ≤ 6` in `d = 3`, with the FFT route as a
/// cross-check where it fits in memory.
fn dyadic_growth(cfg: &ExperimentConfig, rep: &mut Report) -> Result<()> {
    let s0 = dyadic_ft_sup(0, 3)?;
    rep.push(Row::info(
        "dyadic_k0_over_sphere_measure",
        "d=3".into(),
        s0 / sphere_measure(3)?,
    ));
    let mut normalized = Vec::new();
    for k in 1..=6u32 {
        let v = dyadic_ft_sup(k, 3)? / (2.0f64).powi(k as i32);
        rep.push(Row::info("dyadic_sup_over_2k", format!("d=3;k={k}"), v));
        normalized.push(v);
    }
    rep.push(Row::at_most(
        "dyadic_spread",
        "d=3;k=1..6".into(),
        spread(&normalized),
        cfg.dyadic_spread,
    ));
    for k in 1..=2u32 {
        let a = dyadic_ft_sup(k, 3)?;
        let b = dyadic_ft_sup_fft(k)?;
        rep.push(Row::at_most(
            "dyadic_fft_crosscheck",
            format!("d=3;k={k}"),
            (a - b).abs() / a,
            0.05,
        ));
    }
    for k in 1..=6u32 {
        let v = dyadic_ft_sup(k, 2)? / (2.0f64).powf(0.5 * k as f64);
        rep.push(Row::info(
            "dyadic_sup_over_2k_half",
            format!("d=2;k={k}"),
            v,
        ));
    }
    Ok(())
}

/// `c(p, d) < 0` exactly when `p < 2(d + 1)/(d + 3)`: the dyadic series
/// `Σ 2^{k c}` is summable iff `p` is below the endpoint.
fn exponent_signs(rep: &mut Report) -> Result<()> {
    for d in [2usize, 3] {
        let end = tomas_stein_endpoint(d);
        let mut mismatches = 0usize;
        for i in 0..P_GRID {
            let p = 1.0 + i as f64 / (P_GRID - 1) as f64;
            let c = c_exponent(p, d)?;
            if (c < 0.0) != (p < end) {
                mismatches += 1;
            }
            rep.push(Row::info("c_exponent", format!("d={d};p={p}"), c));
        }
        rep.push(Row::at_most(
            "c_sign_matches_endpoint",
            format!("d={d};grid={P_GRID};summable_iff_p_below={end}"),
            mismatches as f64,
            0.0,
        ));
        rep.push(Row::near(
            "c_at_endpoint",
            format!("d={d};p={end}"),
            c_exponent(end, d)?,
            0.0,
            1e-12,
        ));
    }
    Ok(())
}
