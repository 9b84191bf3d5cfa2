use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, ValueEnum};
use ffr_core::harness::{run_suite, ExperimentConfig, OutputFormat, VerificationReport, SUITES};
use ffr_core::grid::{Exponent, ExponentPair};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// Runs a verification suite and reports pass/fail per assertion.
///
/// Exit status: 0 when every assertion passes, 1 when one fails, 2 on error.
#[derive(Debug, Parser)]
#[command(name = "ffr", version)]
struct Args {
    /// Suite name, `all`, or `list` to print the suite names.
    suite: String,
    /// Dimensions (comma separated); replaces the suite's default grid.
    #[arg(long, value_delimiter = ',')]
    d: Vec<usize>,
    /// Field orders (comma separated); replaces the suite's default grid.
    #[arg(long, value_delimiter = ',')]
    q_list: Vec<u32>,
    /// Radii as field element indices (comma separated).
    #[arg(long, value_delimiter = ',')]
    j: Vec<u32>,
    /// Surface exponent p, e.g. 2 or 8/3 or inf. Needs --r.
    #[arg(long, requires = "r")]
    p: Option<Exponent>,
    /// Grid exponent r. Needs --p.
    #[arg(long, requires = "p")]
    r: Option<Exponent>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Largest q^d a case may enumerate.
    #[arg(long)]
    budget: Option<usize>,
    /// Report path; the other format is written next to it.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// JSON config file; flags given on the command line override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Print the full JSON report to stdout.
    #[arg(long)]
    json: bool,
}

fn config_for(args: &Args, suite: &str) -> Result<ExperimentConfig> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            ExperimentConfig::from_json(&text)?
        }
        None => ExperimentConfig::for_suite(suite)?,
    };
    if !args.d.is_empty() || !args.q_list.is_empty() {
        if !args.d.is_empty() {
            cfg.d_list = args.d.clone();
        }
        if !args.q_list.is_empty() {
            cfg.q_list = args.q_list.clone();
        }
        if cfg.d_list.is_empty() || cfg.q_list.is_empty() {
            let defaults: Vec<_> = cfg.cases();
            if cfg.d_list.is_empty() {
                cfg.d_list = defaults.iter().map(|p| p.d).collect();
            }
            if cfg.q_list.is_empty() {
                cfg.q_list = defaults.iter().map(|p| p.q).collect();
            }
            cfg.d_list.sort_unstable();
            cfg.d_list.dedup();
            cfg.q_list.sort_unstable();
            cfg.q_list.dedup();
        }
        cfg.grid.clear();
        cfg.secondary_grid.clear();
    }
    if !args.j.is_empty() {
        cfg.j_list = args.j.clone();
    }
    if let (Some(p), Some(r)) = (args.p, args.r) {
        cfg.pairs = vec![ExponentPair { p, r }];
    }
    if let Some(n) = args.samples {
        cfg.samples = n;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(b) = args.budget {
        cfg.budget = b;
    }
    if let Some(f) = args.format {
        cfg.format = match f {
            Format::Json => OutputFormat::Json,
            Format::Csv => OutputFormat::Csv,
        };
    }
    if let Some(out) = &args.out {
        cfg.out = Some(out.clone());
    }
    Ok(cfg)
}

fn summarize(report: &VerificationReport) {
    println!("{}: {}", report.suite, report.statement);
    for a in &report.assertions {
        let status = match (a.informational, a.passed) {
            (true, true) => "ok  ",
            (true, false) => "note",
            (false, true) => "PASS",
            (false, false) => "FAIL",
        };
        println!("  [{status}] {}: {}", a.name, a.detail);
    }
    for n in &report.notices {
        println!("  notice: {n}");
    }
    if let Some(t) = report.timing("total") {
        println!("  {} cases in {t:.2}s -> {}", report.cases.len(), if report.pass { "pass" } else { "FAIL" });
    }
}

fn run(args: &Args) -> Result<bool> {
    let names: Vec<&str> = match args.suite.as_str() {
        "list" => {
            for s in SUITES {
                println!("{s}");
            }
            return Ok(true);
        }
        "all" => {
            if args.out.is_some() || args.config.is_some() {
                bail!("`all` takes neither --out nor --config");
            }
            SUITES.to_vec()
        }
        s => vec![s],
    };
    let mut pass = true;
    for name in names {
        let cfg = config_for(args, name)?;
        let report = run_suite(name, &cfg)?;
        if args.json {
            println!("{}", report.to_json()?);
        } else {
            summarize(&report);
        }
        pass &= report.pass;
    }
    Ok(pass)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
