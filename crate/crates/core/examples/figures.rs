//! Reruns the published simulation settings and writes one CSV per figure.
//!
//! Usage: `cargo run --release --example figures -- [out_dir]`

use std::path::PathBuf;

use isoband::harness::{
    run_experiment, write_outputs, ExperimentConfig, ExperimentKind, HarnessError,
};

fn main() -> Result<(), HarnessError> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("figures-out"));
    let mut config = ExperimentConfig::new(ExperimentKind::Figures);
    config.replications = 20;
    let output = run_experiment(&config)?;
    write_outputs(&output, &out)?;
    for table in &output.tables {
        println!("{}", out.join(format!("{}.csv", table.name)).display());
    }
    for cell in output
        .report
        .cells
        .iter()
        .filter(|c| c.metric.ends_with(".covered"))
    {
        println!("{:<40} {:.2}", cell.metric, cell.mean);
    }
    Ok(())
}
