use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tyd_core::relations::catalogs;
use tyd_core::report::{Report, Status};
use tyd_core::suites::{self, RunConfig, VariantChoice};

#[derive(Parser)]
#[command(name = "tyd", version, about = "Exact checks for the twisted current algebra and the twisted Yangian of type D")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one or more suites and write a JSON report.
    Check(CheckArgs),
    /// Relation catalog utilities.
    Catalog {
        #[command(subcommand)]
        command: CatalogCommand,
    },
}

#[derive(Subcommand)]
enum CatalogCommand {
    /// Validate catalog files.
    Lint {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
}

#[derive(Args)]
struct CheckArgs {
    /// Comma-separated suites: typeA, L, mini, appendixA, s-lemma, ty-phi, oracle, props.
    #[arg(value_delimiter = ',', required = true)]
    suites: Vec<String>,
    /// Rank parameter; the construction needs n ≥ 5.
    #[arg(long, default_value_t = 5, allow_negative_numbers = true)]
    n: i32,
    /// Largest mode index instantiated by the catalogs.
    #[arg(long, default_value_t = 4)]
    modes: u32,
    /// Φ variant: paper_literal, transposed_minus or both.
    #[arg(long, default_value = "both")]
    variant: String,
    /// Seed for the randomized suites.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Report destination; standard output when absent or "-".
    #[arg(long)]
    out: Option<PathBuf>,
    /// Replace a suite's built-in catalog: SUITE=PATH. Repeatable.
    #[arg(long = "catalog", value_name = "SUITE=PATH")]
    catalogs: Vec<String>,
    /// Record per-instance timings (makes reports run-dependent).
    #[arg(long)]
    timings: bool,
}

fn config(args: &CheckArgs) -> Result<RunConfig, String> {
    let variant = VariantChoice::parse(&args.variant)
        .ok_or_else(|| format!("unknown variant '{}' (paper_literal, transposed_minus, both)", args.variant))?;
    let mut overrides = BTreeMap::new();
    for spec in &args.catalogs {
        let (suite, path) = spec.split_once('=').ok_or_else(|| format!("--catalog expects SUITE=PATH, got '{spec}'"))?;
        let text = fs::read_to_string(path).map_err(|e| format!("cannot read catalog {path}: {e}"))?;
        overrides.insert(suite.to_string(), text);
    }
    let cfg = RunConfig {
        suites: args.suites.clone(),
        n: args.n,
        mode_bound: args.modes,
        variant,
        seed: args.seed,
        timings: args.timings,
        catalogs: overrides,
        ..RunConfig::default()
    };
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

fn summarize(report: &Report) {
    let mut per: BTreeMap<&str, [usize; 4]> = BTreeMap::new();
    for e in &report.entries {
        let c = per.entry(e.suite.as_str()).or_default();
        c[match e.status {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Skipped => 2,
            Status::Informational => 3,
        }] += 1;
    }
    for (suite, [p, f, s, i]) in &per {
        eprintln!("{suite:<12} pass {p:>6}  fail {f:>5}  skipped {s:>3}  informational {i:>5}");
    }
    let mut shown = BTreeMap::new();
    for e in report.failures() {
        *shown.entry((e.suite.as_str(), e.relation_id.as_str())).or_insert(0usize) += 1;
    }
    for ((suite, id), count) in &shown {
        eprintln!("  FAIL {suite}/{id} ({count} instances)");
    }
    let s = &report.summary;
    let verdict = if report.passed() { "PASS" } else { "FAIL" };
    eprintln!("{verdict}: {} entries, {} failing", s.total, s.fail);
}

fn check(args: CheckArgs) -> ExitCode {
    let cfg = match config(&args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(args.jobs).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let report = match pool.install(|| suites::run(&cfg)) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let mut json = report.to_json();
    json.push('\n');
    let written = match args.out.as_deref() {
        Some(p) if p.as_os_str() != "-" => fs::write(p, json).map_err(|e| format!("cannot write {}: {e}", p.display())),
        _ => std::io::stdout().write_all(json.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    summarize(&report);
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn lint(paths: Vec<PathBuf>) -> ExitCode {
    let mut ok = true;
    for p in paths {
        let result = fs::read_to_string(&p).map_err(|e| e.to_string()).and_then(|t| catalogs::lint(&t).map_err(|e| e.to_string()));
        match result {
            Ok(ids) => eprintln!("{}: ok, {} entries", p.display(), ids.len()),
            Err(e) => {
                eprintln!("{}: {e}", p.display());
                ok = false;
            }
        }
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Check(args) => check(args),
        Command::Catalog { command: CatalogCommand::Lint { paths } } => lint(paths),
    }
}
