use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;

use qeuclid::harness::{emit_report, run_experiment, ExperimentConfig, Report, Verdict};

#[derive(Parser)]
#[command(
    name = "qeuclid",
    version,
    about = "Restriction experiments on the quantum Euclidean plane"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Flat key = value config file; flags below override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory for reports.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// csv or json.
    #[arg(long, global = true)]
    format: Option<String>,
    /// Matrix truncation size.
    #[arg(long, global = true)]
    n: Option<usize>,
    #[arg(long = "grid-n", global = true)]
    grid_n: Option<usize>,
    /// Grid half-width.
    #[arg(long = "grid-L", global = true)]
    grid_l: Option<f64>,
    /// Comma-separated ϑ values; the last one is also used by the table.
    #[arg(
        long,
        global = true,
        value_delimiter = ',',
        allow_negative_numbers = true
    )]
    theta: Option<Vec<f64>>,
    /// Comma-separated δ values for the selected experiment's sweep.
    #[arg(long, global = true, value_delimiter = ',')]
    deltas: Option<Vec<f64>>,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Print every row, not just gated ones.
    #[arg(long, short, global = true)]
    verbose: bool,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Weyl algebra, quantization and transform checks.
    Algebra,
    /// Annulus scaling δ^{1/q} at p = 5/4.
    Annulus,
    /// Endpoint scaling at p = q = 4/3 over Knapp caps.
    Endpoint,
    /// Restriction ratio table with GROWING/FLAT verdicts.
    Table,
    /// Multiplier bound, decay, dyadic growth and c(p, d).
    TomasStein,
    /// Bilinear support constant and overlap counts.
    Geometry,
    /// Every experiment above.
    All,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Algebra => "algebra",
            Command::Annulus => "annulus",
            Command::Endpoint => "endpoint",
            Command::Table => "table",
            Command::TomasStein => "tomas-stein",
            Command::Geometry => "geometry",
            Command::All => "all",
        }
    }
}

#[derive(Serialize)]
struct Meta<'a> {
    experiment: &'a str,
    config_hash: String,
    seed: u64,
    runtime_seconds: f64,
    threads: usize,
    version: &'static str,
    os: &'static str,
    arch: &'static str,
    rows: usize,
    failures: usize,
}

fn build_config(cli: &Cli) -> qeuclid::Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    cfg.experiment = cli.command.name().to_string();
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(o) = &cli.out {
        cfg.out = o.clone();
    }
    if let Some(f) = &cli.format {
        cfg.format = f.clone();
    }
    if let Some(n) = cli.n {
        cfg.n = n;
    }
    if let Some(n) = cli.grid_n {
        cfg.grid_n = n;
    }
    if let Some(l) = cli.grid_l {
        cfg.grid_l = l;
    }
    if let Some(t) = &cli.theta {
        if let Some(&last) = t.last() {
            cfg.thetas = t.clone();
            cfg.table_theta = last;
        }
    }
    if let Some(t) = cli.threads {
        cfg.threads = t;
    }
    if let Some(d) = &cli.deltas {
        let all = matches!(cli.command, Command::All);
        let cmd = cli.command;
        if all || matches!(cmd, Command::Annulus) {
            cfg.annulus_deltas = d.clone();
        }
        if all || matches!(cmd, Command::Endpoint) {
            cfg.endpoint_deltas = d.clone();
        }
        if all || matches!(cmd, Command::Table) {
            cfg.table_deltas = d.clone();
        }
        if all || matches!(cmd, Command::Geometry) {
            cfg.bilinear_deltas = d.clone();
            cfg.overlap_deltas = d.clone();
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn print_rows(rep: &Report, verbose: bool) {
    for r in &rep.rows {
        if verbose || r.verdict != Verdict::Info {
            let v = match r.verdict {
                Verdict::Pass => "PASS",
                Verdict::Fail => "FAIL",
                Verdict::Info => "info",
            };
            println!(
                "{v:4}  {}/{} [{}] value={:.6e} {}",
                rep.experiment, r.check, r.params, r.value, r.tolerance
            );
        }
    }
}

fn run(cli: &Cli) -> qeuclid::Result<bool> {
    let cfg = build_config(cli)?;
    if cfg.threads > 0 {
        // a second initialisation only fails if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build_global();
    }
    let t0 = Instant::now();
    let reports = run_experiment(&cfg.experiment, &cfg)?;
    let runtime = t0.elapsed().as_secs_f64();

    let refs: Vec<&Report> = reports.iter().collect();
    std::fs::create_dir_all(&cfg.out)?;
    let mut written = emit_report(&refs, &cfg.out, &cfg.format)?;
    if refs.len() > 1 && cfg.format == "csv" {
        let path = cfg.out.join("all.csv");
        Report::write_csv_all(&refs, std::fs::File::create(&path)?)?;
        written.push(path);
    }
    let failures: usize = reports.iter().map(|r| r.failures().count()).sum();
    let meta = Meta {
        experiment: &cfg.experiment,
        config_hash: cfg.hash(),
        seed: cfg.seed,
        runtime_seconds: runtime,
        threads: rayon::current_num_threads(),
        version: env!("CARGO_PKG_VERSION"),
        os: std::env::consts::OS,
        arch: std::env::consts::ARCH,
        rows: reports.iter().map(|r| r.rows.len()).sum(),
        failures,
    };
    let meta_path = cfg.out.join(format!("{}.meta.json", cfg.experiment));
    std::fs::write(
        &meta_path,
        serde_json::to_string_pretty(&meta).map_err(|e| qeuclid::Error::Format(e.to_string()))?,
    )?;

    for rep in &reports {
        print_rows(rep, cli.verbose);
    }
    for p in &written {
        eprintln!("wrote {}", p.display());
    }
    eprintln!("{} failing check(s), {runtime:.1}s", failures);
    Ok(failures == 0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
