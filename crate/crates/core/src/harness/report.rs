//! Long-format reports: one row per measured quantity.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// Measured and recorded, not gated.
    Info,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Info => "info",
        })
    }
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    /// Named check, e.g. `plancherel` or `slope`.
    pub check: String,
    /// `key=value` pairs joined by `;`.
    pub params: String,
    pub value: f64,
    /// Target or bound the value is compared with, if any.
    pub reference: Option<f64>,
    /// Human-readable acceptance rule.
    pub tolerance: String,
    pub verdict: Verdict,
}

impl Row {
    pub fn info(check: &str, params: String, value: f64) -> Self {
        Self {
            check: check.into(),
            params,
            value,
            reference: None,
            tolerance: String::new(),
            verdict: Verdict::Info,
        }
    }

    /// `value ≤ bound`.
    pub fn at_most(check: &str, params: String, value: f64, bound: f64) -> Self {
        Self {
            check: check.into(),
            params,
            value,
            reference: Some(bound),
            tolerance: format!("<= {bound}"),
            verdict: Verdict::from_bool(value <= bound),
        }
    }

    /// `|value - target| ≤ tol`.
    pub fn near(check: &str, params: String, value: f64, target: f64, tol: f64) -> Self {
        Self {
            check: check.into(),
            params,
            value,
            reference: Some(target),
            tolerance: format!("|value - {target}| <= {tol}"),
            verdict: Verdict::from_bool((value - target).abs() <= tol),
        }
    }

    /// `lo ≤ value ≤ hi`.
    pub fn within(check: &str, params: String, value: f64, lo: f64, hi: f64) -> Self {
        Self {
            check: check.into(),
            params,
            value,
            reference: None,
            tolerance: format!("in [{lo}, {hi}]"),
            verdict: Verdict::from_bool((lo..=hi).contains(&value)),
        }
    }

    pub fn gate(check: &str, params: String, value: f64, rule: String, ok: bool) -> Self {
        Self {
            check: check.into(),
            params,
            value,
            reference: None,
            tolerance: rule,
            verdict: Verdict::from_bool(ok),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub experiment: String,
    pub config_hash: String,
    pub seed: u64,
    pub rows: Vec<Row>,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    config_hash: &'a str,
    seed: u64,
    experiment: &'a str,
    check: &'a str,
    params: &'a str,
    value: String,
    reference: String,
    tolerance: &'a str,
    verdict: Verdict,
}

fn num(v: f64) -> String {
    format!("{v:.12e}")
}

impl Report {
    pub fn new(experiment: &str, config_hash: String, seed: u64) -> Self {
        Self {
            experiment: experiment.into(),
            config_hash,
            seed,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Row) {
        self.rows.push(row);
    }

    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.verdict != Verdict::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Row> {
        self.rows.iter().filter(|r| r.verdict == Verdict::Fail)
    }

    /// Rows whose check name matches.
    pub fn rows_for<'a>(&'a self, check: &'a str) -> impl Iterator<Item = &'a Row> + 'a {
        self.rows.iter().filter(move |r| r.check == check)
    }

    /// Several reports in one CSV, header written once.
    pub fn write_csv_all<W: std::io::Write>(reports: &[&Report], w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        for rep in reports {
            for r in &rep.rows {
                out.serialize(CsvRow {
                    config_hash: &rep.config_hash,
                    seed: rep.seed,
                    experiment: &rep.experiment,
                    check: &r.check,
                    params: &r.params,
                    value: num(r.value),
                    reference: r.reference.map(num).unwrap_or_default(),
                    tolerance: &r.tolerance,
                    verdict: r.verdict,
                })
                .map_err(|e| Error::Format(e.to_string()))?;
            }
        }
        out.flush()?;
        Ok(())
    }

    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        Self::write_csv_all(&[self], w)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))
    }
}

/// Write `reports` under `dir` as `<experiment>.<format>`; returns the paths.
pub fn emit_report(reports: &[&Report], dir: &Path, format: &str) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let mut paths = Vec::new();
    for rep in reports {
        let path = dir.join(format!("{}.{format}", rep.experiment));
        let file = std::fs::File::create(&path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let mut w = std::io::BufWriter::new(file);
        match format {
            "csv" => rep.write_csv(&mut w)?,
            "json" => {
                use std::io::Write;
                w.write_all(rep.to_json()?.as_bytes())?;
                w.write_all(b"\n")?;
            }
            other => return Err(Error::Config(format!("unknown format {other:?}"))),
        }
        paths.push(path);
    }
    Ok(paths)
}
