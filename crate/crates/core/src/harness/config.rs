//! Experiment configuration: flat `key = value` pairs (TOML without tables).

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

fn dyadic(range: std::ops::RangeInclusive<i32>) -> Vec<f64> {
    range.map(|k| (2.0f64).powi(-k)).collect()
}

/// Every tunable of the experiments. Unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: String,
    pub seed: u64,
    /// Number of elements in each test family.
    pub family_size: usize,
    /// `ϑ` values swept by the scaling experiments and the algebra suite.
    pub thetas: Vec<f64>,
    /// `ϑ` used by the restriction table and the multiplier check.
    pub table_theta: f64,
    /// Truncation `N` of the dense matrix route.
    pub n: usize,
    /// Exact modes of the radial route before its classical tail.
    pub mode_budget: usize,
    pub grid_n: usize,
    pub grid_l: f64,
    pub algebra_grid_n: usize,
    pub algebra_grid_l: f64,
    pub annulus_deltas: Vec<f64>,
    pub endpoint_deltas: Vec<f64>,
    pub table_deltas: Vec<f64>,
    pub bilinear_deltas: Vec<f64>,
    pub overlap_deltas: Vec<f64>,
    /// Small-δ overlap sweep where the separated pairs are non-empty.
    pub overlap_deep_deltas: Vec<f64>,
    pub overlap_m0: Vec<usize>,
    pub overlap_probes: usize,
    /// `[p, q]` pairs of the restriction table.
    pub pq: Vec<[f64; 2]>,
    /// Nodes of the sphere rule used for restriction norms.
    pub sphere_nodes: usize,
    pub multiplier_pairs: usize,
    pub extension_samples: usize,
    pub out: PathBuf,
    pub format: String,
    /// `0` keeps rayon's default.
    pub threads: usize,

    pub tol_plancherel: f64,
    pub tol_hausdorff_young: f64,
    pub tol_intertwining: f64,
    pub tol_trace: f64,
    pub tol_fft: f64,
    pub tol_associativity: f64,
    pub tol_psi: f64,
    pub tol_annulus_slope: f64,
    pub endpoint_band: [f64; 2],
    pub growing_min: f64,
    pub flat_max: f64,
    pub bilinear_spread: f64,
    pub multiplier_slack: f64,
    pub decay_spread: f64,
    pub dyadic_spread: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            experiment: "all".into(),
            seed: 20_240_601,
            family_size: 10,
            thetas: vec![0.0, 1.0],
            table_theta: 1.0,
            n: 256,
            mode_budget: crate::matrix_rep::DEFAULT_MODE_BUDGET,
            grid_n: 512,
            grid_l: 16.0,
            algebra_grid_n: 128,
            algebra_grid_l: 8.0,
            annulus_deltas: dyadic(4..=9),
            endpoint_deltas: dyadic(5..=9),
            table_deltas: vec![(2.0f64).powi(-6), (2.0f64).powi(-8), (2.0f64).powi(-10)],
            bilinear_deltas: vec![(2.0f64).powi(-6), (2.0f64).powi(-8), (2.0f64).powi(-10)],
            overlap_deltas: dyadic(8..=10),
            overlap_deep_deltas: vec![(2.0f64).powi(-14), (2.0f64).powi(-16), (2.0f64).powi(-18)],
            overlap_m0: vec![4, 8, 16],
            overlap_probes: 200,
            pq: vec![[1.25, 5.0 / 3.0], [1.25, 2.2], [1.0, 1.0]],
            sphere_nodes: 16_384,
            multiplier_pairs: 30,
            extension_samples: 50,
            out: PathBuf::from("reports"),
            format: "csv".into(),
            threads: 0,
            tol_plancherel: 1e-3,
            tol_hausdorff_young: 0.01,
            tol_intertwining: 1e-3,
            tol_trace: 1e-3,
            tol_fft: 1e-6,
            tol_associativity: 1e-7,
            tol_psi: 0.01,
            tol_annulus_slope: 0.05,
            endpoint_band: [0.70, 0.85],
            growing_min: 1.5,
            flat_max: 1.2,
            bilinear_spread: 10.0,
            multiplier_slack: 0.02,
            decay_spread: 4.0,
            dyadic_spread: 6.0,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        let lists = [
            ("annulus_deltas", &self.annulus_deltas),
            ("endpoint_deltas", &self.endpoint_deltas),
            ("table_deltas", &self.table_deltas),
            ("bilinear_deltas", &self.bilinear_deltas),
            ("overlap_deltas", &self.overlap_deltas),
            ("overlap_deep_deltas", &self.overlap_deep_deltas),
        ];
        for (name, list) in lists {
            if let Some(d) = list.iter().find(|d| !(**d > 0.0 && **d < 0.5)) {
                return Err(Error::Config(format!("{name}: δ = {d} outside (0, 1/2)")));
            }
        }
        if let Some(pq) = self
            .pq
            .iter()
            .find(|pq| !(1.0..=2.0).contains(&pq[0]) || !(pq[1] >= 1.0))
        {
            return Err(Error::Config(format!(
                "pq: p must lie in [1, 2] and q ≥ 1, got {pq:?}"
            )));
        }
        if self.family_size == 0 {
            return Err(Error::Config("family_size must be positive".into()));
        }
        if self.n < crate::matrix_rep::MIN_TRUNCATION {
            return Err(Error::Config(format!(
                "n = {} below the minimum truncation",
                self.n
            )));
        }
        if self.grid_n < 2
            || !self.grid_n.is_multiple_of(2)
            || self.algebra_grid_n < 2
            || !self.algebra_grid_n.is_multiple_of(2)
        {
            return Err(Error::Config("grid sizes must be even".into()));
        }
        if !(self.grid_l > 0.0 && self.algebra_grid_l > 0.0) {
            return Err(Error::Config("grid half-widths must be positive".into()));
        }
        if self.format != "csv" && self.format != "json" {
            return Err(Error::Config(format!(
                "format {:?} is neither csv nor json",
                self.format
            )));
        }
        if self.thetas.iter().any(|t| !t.is_finite()) {
            return Err(Error::Config("non-finite ϑ".into()));
        }
        Ok(())
    }

    /// SHA-256 of the canonical serialization, minus the fields that do not
    /// affect results (output location, format, thread count).
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.out = PathBuf::new();
        c.format = String::new();
        c.threads = 0;
        let bytes = serde_json::to_vec(&c).expect("config serializes");
        let digest = Sha256::digest(bytes);
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}
