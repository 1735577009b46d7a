//! Build an experiment config in code, run the grid, and print the rows.
//! The same config can be written to disk and run with the `cqi` binary.
//!
//! cargo run --release --example experiment_sweep -- [csv|json]

use cqi::harness::{render, run, ExperimentConfig, Format, Task};

fn main() -> cqi::Result<()> {
    let format: Format = std::env::args().nth(1).as_deref().unwrap_or("csv").parse()?;
    let mut cfg = ExperimentConfig::new(Task::Dme);
    cfg.grid.d = vec![2, 3];
    cfg.grid.n = vec![16, 32, 64];
    cfg.grid.probes = 4;
    cfg.grid.trials = 8;
    cfg.seed = 42;
    eprintln!("{}", cfg.to_json()?);
    let summary = run(&cfg)?;
    print!("{}", render(&summary.records, format)?);
    eprintln!("exit code would be {}", summary.exit_code());
    Ok(())
}
