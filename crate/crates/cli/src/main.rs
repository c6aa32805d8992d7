use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use srlab::field::FiniteField;
use srlab::moufang::enumerate_group;
use srlab::suite::config::{ConfigError, Settings};
use srlab::suite::{run, RunOutcome};

/// Runs the srlab property suites and writes a JSON report.
#[derive(Parser)]
#[command(name = "srlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Subcommand)]
enum Command {
    /// Order and transitivity of the Ree Moufang set group over GF(3^m), as JSON.
    MoufangStats {
        #[arg(long, default_value_t = 1)]
        m: u32,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Config file of `key = value` lines; flags override it.
    config: Option<PathBuf>,
    /// Case B, F or G.
    #[arg(long)]
    case: Option<String>,
    /// Base sample count; every property scales with it.
    #[arg(long)]
    samples: Option<String>,
    /// Seed; falls back to SRLAB_SEED, then 0.
    #[arg(long)]
    seed: Option<String>,
    /// Suites to run, comma separated or repeated; default all.
    #[arg(long = "suite", value_delimiter = ',')]
    suites: Vec<String>,
    /// Report path; default stdout.
    #[arg(long)]
    out: Option<String>,
    /// Worker threads.
    #[arg(long)]
    jobs: Option<String>,
    /// Drop the unforced m-sign entries so checks that need them fail.
    #[arg(long)]
    corrupt_signs: bool,
    /// Print wall-clock time per suite to stderr.
    #[arg(long)]
    timings: bool,
    /// Any config key, as `key=value`; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

fn settings(args: &RunArgs) -> Result<Settings, ConfigError> {
    let file = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| ConfigError::Io(path.display().to_string(), e.to_string()))?;
            Settings::parse(&text)?
        }
        None => Settings::default(),
    };
    let mut flags = Settings::default();
    for kv in &args.set {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| ConfigError::Value("set".into(), kv.clone()))?;
        flags.set(k.trim(), v.trim())?;
    }
    let pairs = [
        ("case", args.case.clone()),
        ("samples", args.samples.clone()),
        ("seed", args.seed.clone()),
        ("out", args.out.clone()),
        ("jobs", args.jobs.clone()),
        (
            "suites",
            (!args.suites.is_empty()).then(|| args.suites.join(",")),
        ),
        (
            "corrupt_signs",
            args.corrupt_signs.then(|| "true".to_string()),
        ),
    ];
    for (k, v) in pairs {
        if let Some(v) = v {
            flags.set(k, &v)?;
        }
    }
    Ok(file.overlay(flags))
}

fn summarize(outcome: &RunOutcome, timings: bool) {
    for s in &outcome.report.suites {
        let status = if s.failed == 0 { "PASS" } else { "FAIL" };
        eprintln!(
            "{status} {:<17} {} checks, {} samples, {} failed",
            s.suite, s.checks, s.samples, s.failed
        );
    }
    for r in outcome.report.records.iter().filter(|r| r.failed > 0) {
        let first = r
            .failures
            .first()
            .map(|f| format!(": {} expected {} got {}", f.inputs, f.expected, f.got));
        eprintln!(
            "  {} / {}{}",
            r.suite,
            r.property,
            first.unwrap_or_default()
        );
    }
    if timings {
        for (name, d) in &outcome.timings {
            eprintln!("time {:<17} {:.3}s", name.as_str(), d.as_secs_f64());
        }
    }
}

fn run_suites(args: &RunArgs) -> Result<u8, (u8, String)> {
    let env_seed = std::env::var("SRLAB_SEED").ok();
    let cfg = settings(args)
        .and_then(|s| s.resolve(env_seed.as_deref()))
        .map_err(|e| (2, format!("config error: {e}")))?;
    let outcome = run(&cfg).map_err(|e| (2, format!("config error: {e}")))?;
    let json = outcome.report.to_json();
    match &cfg.out {
        Some(path) => std::fs::write(path, &json)
            .map_err(|e| (2, format!("cannot write {}: {e}", path.display())))?,
        None => print!("{json}"),
    }
    summarize(&outcome, args.timings);
    Ok(outcome.exit_code() as u8)
}

fn moufang_stats(m: u32) -> Result<u8, (u8, String)> {
    let f = FiniteField::new(3, m).map_err(|e| (2, format!("config error: {e}")))?;
    let stats = enumerate_group(&f).map_err(|e| (1, e.to_string()))?;
    let json = serde_json::to_string_pretty(&stats).map_err(|e| (1, e.to_string()))?;
    println!("{json}");
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Some(Command::MoufangStats { m }) => moufang_stats(m),
        None => run_suites(&cli.run),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err((code, msg)) => {
            eprintln!("{msg}");
            ExitCode::from(code)
        }
    }
}
