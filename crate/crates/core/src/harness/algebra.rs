//! Operator-algebra checks: Plancherel, Hausdorff–Young in both directions,
//! intertwining of products and adjoints, trace calibration, the FFT path of
//! twisted convolution, and `Ψ_T` norm scaling.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::config::ExperimentConfig;
use super::families::{gaussians, random_symbols};
use super::report::{Report, Row};
use crate::error::Result;
use crate::matrix_rep::{
    alias_level, convergence_report, nc_lp_norm, quantize, schatten_from_singular, singular_values,
    TruncatedOperator, Truncation, MAX_ALIAS_FRACTION,
};
use crate::symbols::{lp_norm, Gaussian, Grid, PointSymbol, SampledSymbol};
use crate::weyl::{
    adjoint_symbol, determinant, transform_psi, twisted_convolve, twisted_convolve_direct, Theta,
    WeylElement,
};

/// `max |a - b| / max |b|`.
fn rel_max(a: &[Complex64], b: &[Complex64]) -> f64 {
    let num = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    let den = b.iter().map(|y| y.norm()).fold(0.0, f64::max);
    if den == 0.0 {
        num
    } else {
        num / den
    }
}

/// Relative Frobenius distance.
fn rel_frob(a: &TruncatedOperator, b: &TruncatedOperator) -> f64 {
    let num: f64 = a
        .entries()
        .iter()
        .zip(b.entries())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum();
    let den: f64 = b.entries().iter().map(|y| y.norm_sqr()).sum();
    (num / den).sqrt()
}

fn conj_exp(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else {
        p / (p - 1.0)
    }
}

const HY_EXPONENTS: [f64; 3] = [1.0, 4.0 / 3.0, 2.0];
const PSI_EXPONENTS: [f64; 4] = [1.0, 2.0, 4.0, f64::INFINITY];

/// Named maps for the `Ψ_T` check, row-major.
pub fn psi_transforms() -> Vec<(&'static str, [f64; 4])> {
    let (s, c) = (PI / 6.0).sin_cos();
    vec![
        ("rotation_pi_6", [c, -s, s, c]),
        ("diag_2_half", [2.0, 0.0, 0.0, 0.5]),
        ("shear", [1.0, 1.0, 0.0, 1.0]),
        ("dilation_1_5", [1.5, 0.0, 0.0, 1.5]),
    ]
}

fn test_symbols(cfg: &ExperimentConfig, grid: Grid) -> Result<Vec<SampledSymbol>> {
    let mut out = Vec::new();
    for g in gaussians(cfg.seed, cfg.family_size) {
        out.push(g.sample(grid)?);
    }
    for g in random_symbols(cfg.seed, cfg.family_size) {
        out.push(g.sample(grid)?);
    }
    Ok(out)
}

/// All operator-algebra checks for every `ϑ` in the config. `ϑ = 0` runs the
/// classical route only.
pub fn run_algebra_suite(cfg: &ExperimentConfig) -> Result<Report> {
    let mut rep = Report::new("algebra", cfg.hash(), cfg.seed);
    let grid = Grid::new(2, cfg.algebra_grid_l, cfg.algebra_grid_n)?;
    let symbols = test_symbols(cfg, grid)?;
    for &vartheta in &cfg.thetas {
        let theta = Theta::planar(vartheta);
        let tag = format!("theta={vartheta}");
        if vartheta == 0.0 {
            classical_checks(cfg, &symbols, &tag, &mut rep)?;
        } else {
            matrix_checks(cfg, &symbols, vartheta, &tag, &mut rep)?;
        }
        symbol_checks(cfg, &symbols, &theta, &tag, &mut rep)?;
        psi_checks(cfg, grid, vartheta, &tag, &mut rep)?;
    }
    fft_check(cfg, &mut rep)?;
    Ok(rep)
}

fn classical_checks(
    cfg: &ExperimentConfig,
    symbols: &[SampledSymbol],
    tag: &str,
    rep: &mut Report,
) -> Result<()> {
    let opts = Truncation { n: cfg.n };
    let mut planch = 0.0f64;
    let mut fwd = [0.0f64; 3];
    let mut inv = [0.0f64; 3];
    for f in symbols {
        let x = WeylElement::new(f.clone(), Theta::zero(2))?;
        let l2 = lp_norm(f, 2.0)?;
        planch = planch.max((nc_lp_norm(&x, 2.0, &opts)? - l2).abs() / l2);
        for (i, &p) in HY_EXPONENTS.iter().enumerate() {
            let q = conj_exp(p);
            fwd[i] = fwd[i].max(lp_norm(f, q)? / nc_lp_norm(&x, p, &opts)?);
            inv[i] = inv[i].max(nc_lp_norm(&x, q, &opts)? / lp_norm(f, p)?);
        }
    }
    rep.push(Row::at_most(
        "plancherel",
        tag.into(),
        planch,
        cfg.tol_plancherel,
    ));
    for (i, p) in HY_EXPONENTS.iter().enumerate() {
        rep.push(Row::at_most(
            "hausdorff_young",
            format!("{tag};p={p}"),
            fwd[i],
            1.0 + cfg.tol_hausdorff_young,
        ));
        rep.push(Row::at_most(
            "inverse_hausdorff_young",
            format!("{tag};p={p}"),
            inv[i],
            1.0 + cfg.tol_hausdorff_young,
        ));
    }
    Ok(())
}

fn matrix_checks(
    cfg: &ExperimentConfig,
    symbols: &[SampledSymbol],
    vartheta: f64,
    tag: &str,
    rep: &mut Report,
) -> Result<()> {
    let mut planch = 0.0f64;
    let mut trace_err = 0.0f64;
    let mut fwd = [0.0f64; 3];
    let mut inv = [0.0f64; 3];
    let mut ops = Vec::with_capacity(symbols.len());
    for f in symbols {
        let op = quantize(f, vartheta, cfg.n)?;
        let sv = singular_values(&op);
        let c = op.trace_scale();
        let l2 = lp_norm(f, 2.0)?;
        planch = planch.max((schatten_from_singular(&sv, c, 2.0)? - l2).abs() / l2);
        let peak = lp_norm(f, f64::INFINITY)?;
        trace_err = trace_err.max((op.trace() - f.at_origin()).norm() / peak);
        for (i, &p) in HY_EXPONENTS.iter().enumerate() {
            let q = conj_exp(p);
            fwd[i] = fwd[i].max(lp_norm(f, q)? / schatten_from_singular(&sv, c, p)?);
            inv[i] = inv[i].max(schatten_from_singular(&sv, c, q)? / lp_norm(f, p)?);
        }
        ops.push(op);
    }
    rep.push(Row::at_most(
        "plancherel",
        tag.into(),
        planch,
        cfg.tol_plancherel,
    ));
    rep.push(Row::at_most(
        "trace_calibration",
        format!("{tag};symbols={}", symbols.len()),
        trace_err,
        cfg.tol_trace,
    ));
    for (i, p) in HY_EXPONENTS.iter().enumerate() {
        rep.push(Row::at_most(
            "hausdorff_young",
            format!("{tag};p={p}"),
            fwd[i],
            1.0 + cfg.tol_hausdorff_young,
        ));
        rep.push(Row::at_most(
            "inverse_hausdorff_young",
            format!("{tag};p={p}"),
            inv[i],
            1.0 + cfg.tol_hausdorff_young,
        ));
    }

    let theta = Theta::planar(vartheta);
    let half = cfg.n / 2;
    let mut adj = 0.0f64;
    let mut prod = 0.0f64;
    for i in 0..symbols.len().min(4) {
        let q_adj = quantize(&adjoint_symbol(&symbols[i]), vartheta, cfg.n)?;
        adj = adj.max(rel_frob(&q_adj, &ops[i].adjoint()));
        let j = (i + 1) % symbols.len();
        let fg = twisted_convolve(&symbols[i], &symbols[j], &theta)?;
        let q_fg = quantize(&fg, vartheta, cfg.n)?.leading_block(half)?;
        let qq = ops[i].mul(&ops[j])?.leading_block(half)?;
        prod = prod.max(rel_frob(&q_fg, &qq));
    }
    rep.push(Row::at_most(
        "adjoint_intertwining",
        tag.into(),
        adj,
        cfg.tol_intertwining,
    ));
    rep.push(Row::at_most(
        "product_intertwining",
        format!("{tag};block={half}"),
        prod,
        cfg.tol_intertwining,
    ));

    let conv = convergence_report(&symbols[0], vartheta, 2.0, &[cfg.n / 2, cfg.n])?;
    let last = conv.rows.last().and_then(|r| r.delta).unwrap_or(0.0);
    rep.push(Row::at_most(
        "truncation_convergence",
        format!("{tag};n={}", cfg.n),
        last,
        crate::matrix_rep::norm::CONVERGED_DELTA,
    ));
    Ok(())
}

/// Identities checked on symbols alone: associativity, star compatibility,
/// traciality.
fn symbol_checks(
    cfg: &ExperimentConfig,
    symbols: &[SampledSymbol],
    theta: &Theta,
    tag: &str,
    rep: &mut Report,
) -> Result<()> {
    let (f, g, h) = (&symbols[0], &symbols[1], &symbols[2]);
    let fg = twisted_convolve(f, g, theta)?;
    let gh = twisted_convolve(g, h, theta)?;
    let left = twisted_convolve(&fg, h, theta)?;
    let right = twisted_convolve(f, &gh, theta)?;
    rep.push(Row::at_most(
        "associativity",
        tag.into(),
        rel_max(left.values(), right.values()),
        cfg.tol_associativity,
    ));

    let star = adjoint_symbol(&fg);
    let swapped = twisted_convolve(&adjoint_symbol(g), &adjoint_symbol(f), theta)?;
    rep.push(Row::at_most(
        "star_compatibility",
        tag.into(),
        rel_max(star.values(), swapped.values()),
        cfg.tol_associativity,
    ));

    let gf = twisted_convolve(g, f, theta)?;
    let (a, b) = (fg.at_origin(), gf.at_origin());
    let tr = (a - b).norm() / a.norm().max(b.norm()).max(f64::MIN_POSITIVE);
    rep.push(Row::at_most(
        "traciality",
        tag.into(),
        tr,
        cfg.tol_associativity,
    ));
    Ok(())
}

/// `‖Ψ_T x‖_p / ‖x‖_p = |det T|^{1/p}`.
fn psi_checks(
    cfg: &ExperimentConfig,
    grid: Grid,
    vartheta: f64,
    tag: &str,
    rep: &mut Report,
) -> Result<()> {
    let base = Gaussian {
        center: vec![0.3, -0.2],
        width: 2.0,
        freq: vec![0.0, 0.0],
        amp: Complex64::new(1.0, 0.0),
    };
    let x = WeylElement::new(base.sample(grid)?, Theta::planar(vartheta))?;
    let norms = |x: &WeylElement| -> Result<Vec<f64>> {
        match x.theta().vartheta() {
            Some(v) if v != 0.0 => {
                // stay under the alias guard when det T enlarges ϑ
                let cap = (MAX_ALIAS_FRACTION * alias_level(x.symbol().grid().spacing(), v)).floor()
                    as usize;
                let op = quantize(x.symbol(), v, cfg.n.min(cap))?;
                let sv = singular_values(&op);
                PSI_EXPONENTS
                    .iter()
                    .map(|&p| schatten_from_singular(&sv, op.trace_scale(), p))
                    .collect()
            }
            _ => {
                let opts = Truncation { n: cfg.n };
                PSI_EXPONENTS
                    .iter()
                    .map(|&p| nc_lp_norm(x, p, &opts))
                    .collect()
            }
        }
    };
    let base_norms = norms(&x)?;
    for (name, t) in psi_transforms() {
        let y = transform_psi(&x, &t)?;
        let det = determinant(&t, 2).abs();
        let ny = norms(&y)?;
        for (i, &p) in PSI_EXPONENTS.iter().enumerate() {
            let target = det.powf(1.0 / p);
            let ratio = ny[i] / base_norms[i];
            rep.push(Row::near(
                "psi_scaling",
                format!("{tag};T={name};p={p}"),
                ratio,
                target,
                cfg.tol_psi * target,
            ));
        }
    }
    Ok(())
}

/// FFT path against the direct sum on a 64² grid.
fn fft_check(cfg: &ExperimentConfig, rep: &mut Report) -> Result<()> {
    let grid = Grid::new(2, 4.0, 64)?;
    let fam = gaussians(cfg.seed, 2);
    let (f, g) = (fam[0].sample(grid)?, fam[1].sample(grid)?);
    let mut worst = 0.0f64;
    for v in cfg
        .thetas
        .iter()
        .copied()
        .filter(|v| *v != 0.0)
        .chain([1.0])
    {
        let th = Theta::planar(v);
        let a = twisted_convolve(&f, &g, &th)?;
        let b = twisted_convolve_direct(&f, &g, &th)?;
        worst = worst.max(rel_max(a.values(), b.values()));
    }
    rep.push(Row::at_most(
        "twisted_fft_vs_direct",
        "grid=64".into(),
        worst,
        cfg.tol_fft,
    ));
    Ok(())
}
