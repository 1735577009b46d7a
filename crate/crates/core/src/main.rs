use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cqi::harness::{self, ExperimentConfig, Format, Task};
use cqi::Error;

#[derive(Parser)]
#[command(name = "cqi", version, about = "Coherent versus incoherent quantum inference experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Forwarding versus tomography-then-prepare on pure states.
    Identity(RunArgs),
    /// Random purification: one-site infidelity slopes.
    Rp(RunArgs),
    /// Optimal cloner against its closed-form fidelities.
    Cloning(RunArgs),
    /// Purity amplification bounds and eigenstate tomography.
    Qpa(RunArgs),
    /// Density-matrix exponentiation.
    Dme(RunArgs),
    /// Measure-and-prepare approximation of symmetric marginals.
    Definetti(RunArgs),
    /// Parse and check a config file without running it.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run the built-in invariant checks.
    Selftest,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_parser = ["csv", "json"])]
    format: Option<String>,
}

const CONFIG_ERROR: u8 = 1;
const NUMERICAL_ERROR: u8 = 2;

fn load(path: &Path) -> Result<ExperimentConfig, ExitCode> {
    ExperimentConfig::load(path).map_err(|e| {
        eprintln!("{e}");
        ExitCode::from(CONFIG_ERROR)
    })
}

fn run_task(task: Task, args: RunArgs) -> Result<ExitCode, ExitCode> {
    let mut cfg = load(&args.config)?;
    if cfg.task != task {
        eprintln!("config error: file describes task `{}`, not `{task}`", cfg.task);
        return Err(ExitCode::from(CONFIG_ERROR));
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(s) = args.samples {
        cfg.samples = s;
    }
    if let Some(o) = args.out {
        cfg.out = Some(o);
    }
    if let Some(f) = args.format {
        cfg.format = f.parse::<Format>().map_err(|_| ExitCode::from(CONFIG_ERROR))?;
    }
    let summary = harness::run(&cfg).map_err(|e| {
        eprintln!("{e}");
        ExitCode::from(if matches!(e, Error::Config(_)) { CONFIG_ERROR } else { NUMERICAL_ERROR })
    })?;
    for (params, e) in &summary.failures {
        let at: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        eprintln!("point {} failed: {e}", at.join(" "));
    }
    if summary.timeouts > 0 {
        eprintln!("{} point(s) exceeded {} s", summary.timeouts, cfg.timeout_s);
    }
    let written = match &cfg.out {
        Some(path) => harness::emit(&summary.records, cfg.format, path),
        None => harness::render(&summary.records, cfg.format).map(|text| print!("{text}")),
    };
    if let Err(e) = written {
        eprintln!("{e}");
        return Err(ExitCode::from(CONFIG_ERROR));
    }
    Ok(ExitCode::from(summary.exit_code() as u8))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = harness::init_threads() {
        eprintln!("{e}");
        return ExitCode::from(CONFIG_ERROR);
    }
    let result = match cli.command {
        Command::Identity(a) => run_task(Task::Identity, a),
        Command::Rp(a) => run_task(Task::Rp, a),
        Command::Cloning(a) => run_task(Task::Cloning, a),
        Command::Qpa(a) => run_task(Task::Qpa, a),
        Command::Dme(a) => run_task(Task::Dme, a),
        Command::Definetti(a) => run_task(Task::Definetti, a),
        Command::Validate { config } => load(&config).map(|cfg| {
            println!("{}: valid {} config", config.display(), cfg.task);
            ExitCode::SUCCESS
        }),
        Command::Selftest => {
            let checks = harness::selftest();
            for c in &checks {
                println!("{} {} {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            Ok(if checks.iter().all(|c| c.passed) { ExitCode::SUCCESS } else { ExitCode::from(NUMERICAL_ERROR) })
        }
    };
    result.unwrap_or_else(|code| code)
}
