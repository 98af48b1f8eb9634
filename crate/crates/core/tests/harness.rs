use std::process::Command;

use qeuclid::harness::{
    emit_report, run_annulus_scaling, run_experiment, run_full_restriction_table, ExperimentConfig,
    Report, Verdict,
};

/// Small enough to run in seconds.
fn quick() -> ExperimentConfig {
    ExperimentConfig {
        family_size: 2,
        n: 64,
        grid_n: 128,
        grid_l: 6.0,
        mode_budget: 20_000,
        annulus_deltas: vec![1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0, 1.0 / 128.0],
        table_deltas: vec![1.0 / 16.0, 1.0 / 64.0, 1.0 / 256.0],
        sphere_nodes: 1024,
        extension_samples: 5,
        ..ExperimentConfig::default()
    }
}

fn csv_bytes(r: &Report) -> Vec<u8> {
    let mut out = Vec::new();
    r.write_csv(&mut out).unwrap();
    out
}

#[test]
fn reports_identical_across_thread_counts() {
    let cfg = quick();
    let run = |threads| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(|| csv_bytes(&run_annulus_scaling(&cfg).unwrap()))
    };
    let one = run(1);
    assert_eq!(one, run(3));
    assert_eq!(one, run(1));
}

#[test]
fn annulus_slope_on_quick_config() {
    let rep = run_annulus_scaling(&quick()).unwrap();
    let slopes: Vec<_> = rep.rows_for("slope").collect();
    assert_eq!(slopes.len(), 2);
    for r in slopes {
        assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
    }
}

#[test]
fn table_cardinality_and_json_round_trip() {
    let cfg = quick();
    let rep = run_full_restriction_table(&cfg).unwrap();
    // ratio rows: #δ × #elements (three families) × #(p, q)
    let ratios = rep.rows_for("ratio").count();
    assert_eq!(
        ratios,
        cfg.table_deltas.len() * 3 * cfg.family_size * cfg.pq.len()
    );
    assert_eq!(rep.rows_for("growth").count(), cfg.pq.len());
    let back = Report::from_json(&rep.to_json().unwrap()).unwrap();
    assert_eq!(back, rep);

    let dir = tempfile::tempdir().unwrap();
    let paths = emit_report(&[&rep], dir.path(), "csv").unwrap();
    let text = std::fs::read_to_string(&paths[0]).unwrap();
    assert_eq!(text.lines().count(), rep.rows.len() + 1);
    assert!(text.starts_with(
        "config_hash,seed,experiment,check,params,value,reference,tolerance,verdict\n"
    ));
    assert!(text.lines().skip(1).all(|l| l.starts_with(&cfg.hash())));
}

#[test]
fn unknown_experiment_is_an_error() {
    assert!(run_experiment("nope", &quick()).is_err());
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qeuclid"))
}

fn write_quick_config(dir: &std::path::Path) -> std::path::PathBuf {
    let path = dir.join("quick.toml");
    std::fs::write(&path, quick().to_toml_string().unwrap()).unwrap();
    path
}

#[test]
fn cli_runs_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_quick_config(dir.path());
    let run = |out: &str, threads: &str| {
        let status = bin()
            .args(["annulus", "--config"])
            .arg(&cfg)
            .args([
                "--out",
                dir.path().join(out).to_str().unwrap(),
                "--threads",
                threads,
            ])
            .args([
                "--deltas",
                "0.0625,0.03125,0.015625,0.0078125",
                "--theta",
                "0,1",
            ])
            .output()
            .unwrap()
            .status;
        assert_eq!(status.code(), Some(0));
        std::fs::read(dir.path().join(out).join("annulus.csv")).unwrap()
    };
    let a = run("a", "1");
    let b = run("b", "2");
    assert_eq!(a, b);
    let meta = std::fs::read_to_string(dir.path().join("a").join("annulus.meta.json")).unwrap();
    assert!(meta.contains("runtime_seconds"));
}

#[test]
fn cli_json_format() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_quick_config(dir.path());
    let out = dir.path().join("j");
    let status = bin()
        .args(["annulus", "--format", "json", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap()
        .status;
    assert_eq!(status.code(), Some(0));
    let rep =
        Report::from_json(&std::fs::read_to_string(out.join("annulus.json")).unwrap()).unwrap();
    assert!(rep.passed());
}

#[test]
fn cli_rejects_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "no_such_key = 3\n").unwrap();
    let out = bin()
        .args(["algebra", "--config"])
        .arg(&bad)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no_such_key"));

    let out = bin().args(["annulus", "--deltas", "0.7"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().args(["table", "--format", "xml"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(!bin().arg("frobnicate").output().unwrap().status.success());
    assert!(bin().arg("--help").output().unwrap().status.success());
}
