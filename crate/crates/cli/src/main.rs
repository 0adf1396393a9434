use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fogndt::sweep::{
    manifest, ndt_csv, parse_config_with_overrides, run_ndt_sweep, run_sim_verify, verify_csv,
    SweepConfig,
};

const EXIT_CONFIG: u8 = 1;
const EXIT_VERIFY: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

/// NDT parameter sweeps and high-SNR simulation checks.
#[derive(Parser)]
#[command(name = "fogndt", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate NDT curves over a grid of mu, alpha or r.
    NdtSweep(RunArgs),
    /// Simulate the cloud-based schemes and check their SNR exponents.
    SimVerify(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Configuration file (`key = value` per line).
    #[arg(long)]
    config: Option<PathBuf>,
    /// CSV output path; stdout when absent. A `.manifest` sidecar is
    /// written next to it.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Override a configuration key; may be repeated.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl ToString) -> Self {
        Failure { code, message: message.to_string() }
    }
}

fn load(mode: &str, args: &RunArgs) -> Result<SweepConfig, Failure> {
    let text = match &args.config {
        Some(path) => fs::read_to_string(path)
            .map_err(|e| Failure::new(EXIT_CONFIG, format!("{}: {e}", path.display())))?,
        None => String::new(),
    };
    let mut overrides = args.set.clone();
    overrides.push(format!("mode={mode}"));
    if let Some(seed) = args.seed {
        overrides.push(format!("seed={seed}"));
    }
    if let Some(out) = &args.out {
        overrides.push(format!("out={}", out.display()));
    }
    parse_config_with_overrides(&text, &overrides).map_err(|e| Failure::new(EXIT_CONFIG, e))
}

fn sidecar(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest");
    PathBuf::from(name)
}

fn emit(cfg: &SweepConfig, csv: &str) -> Result<(), Failure> {
    let io_err = |e: io::Error| Failure::new(EXIT_NUMERIC, e);
    match &cfg.out {
        Some(out) => {
            fs::write(out, csv)
                .map_err(|e| Failure::new(EXIT_NUMERIC, format!("{}: {e}", out.display())))?;
            fs::write(sidecar(out), manifest(cfg)).map_err(io_err)
        }
        None => io::stdout().lock().write_all(csv.as_bytes()).map_err(io_err),
    }
}

fn ndt_sweep(args: &RunArgs) -> Result<(), Failure> {
    let cfg = load("ndt-sweep", args)?;
    let rows = run_ndt_sweep(&cfg).map_err(|e| Failure::new(EXIT_CONFIG, e))?;
    let csv = ndt_csv(&rows).map_err(|e| Failure::new(EXIT_NUMERIC, e))?;
    emit(&cfg, &csv)
}

fn sim_verify(args: &RunArgs) -> Result<(), Failure> {
    let cfg = load("sim-verify", args)?;
    let outcome = run_sim_verify(&cfg).map_err(|e| Failure::new(EXIT_CONFIG, e))?;
    let csv = verify_csv(&outcome.claims).map_err(|e| Failure::new(EXIT_NUMERIC, e))?;
    emit(&cfg, &csv)?;
    for (scheme, err) in &outcome.errors {
        eprintln!("fogndt: {} simulation failed: {err}", scheme.name());
    }
    if !outcome.errors.is_empty() {
        return Err(Failure::new(EXIT_NUMERIC, "simulation error"));
    }
    let failed: Vec<&str> =
        outcome.claims.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::new(EXIT_VERIFY, format!("claims failed: {}", failed.join(", "))))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::NdtSweep(args) => ndt_sweep(args),
        Command::SimVerify(args) => sim_verify(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("fogndt: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
