use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use isoband::harness::{
    run_experiment, write_outputs, BandSetting, ExperimentConfig, ExperimentKind, HarnessError,
    OutputFormat,
};

#[derive(Parser)]
#[command(
    name = "isoband",
    version,
    about = "Isotonic quantile bands and monotone bandit simulations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit the isotonic quantile to a data file or a simulated sequence.
    Fit(Flags),
    /// Fit and build the confidence band.
    Band(Flags),
    /// Simultaneous coverage over replications.
    Coverage(Flags),
    /// Average band width across sample sizes.
    Width(Flags),
    /// Constant pieces of the fit across sample sizes.
    Pieces(Flags),
    /// Regret of the elimination policy across horizons.
    Bandit(Flags),
    /// Rerun the reference simulation settings and emit per-figure CSVs.
    Figures(Flags),
}

#[derive(Args)]
struct Flags {
    /// JSON experiment configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    reps: Option<usize>,
    /// Directory for CSV and JSON outputs.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Sample sizes or horizons, e.g. `250,500,1000`.
    #[arg(long, value_delimiter = ',')]
    grid: Option<Vec<usize>>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, requires = "gamma2")]
    gamma1: Option<f64>,
    #[arg(long, requires = "gamma1")]
    gamma2: Option<f64>,
    /// Data file for `fit` and `band`: CSV with a `y` column and optional `x`.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Format of the summary printed to stdout.
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
}

fn build_config(kind: ExperimentKind, flags: Flags) -> Result<ExperimentConfig, HarnessError> {
    let mut config = match &flags.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))?;
            let config = ExperimentConfig::from_json(&text)?;
            if config.experiment != kind {
                return Err(HarnessError::Config(format!(
                    "config is for `{}`, not `{}`",
                    config.experiment.name(),
                    kind.name()
                )));
            }
            config
        }
        None => ExperimentConfig::new(kind),
    };
    if let Some(seed) = flags.seed {
        config.seed = seed;
    }
    if let Some(reps) = flags.reps {
        config.replications = reps;
    }
    if let Some(out) = flags.out {
        config.out_dir = Some(out);
    }
    if let Some(grid) = flags.grid {
        config.sizes = grid;
    }
    if let Some(tau) = flags.tau {
        config.tau = tau;
    }
    if let Some(alpha) = flags.alpha {
        config.alpha = Some(alpha);
    }
    if let (Some(gamma1), Some(gamma2)) = (flags.gamma1, flags.gamma2) {
        config.band = BandSetting::Explicit { gamma1, gamma2 };
    }
    if let Some(input) = flags.input {
        config.input = Some(input);
    }
    if let Some(format) = flags.format {
        config.format = format;
    }
    if kind == ExperimentKind::Bandit && config.arms.is_none() {
        return Err(HarnessError::Config(
            "bandit needs `arms` in a --config file".into(),
        ));
    }
    Ok(config)
}

fn run(kind: ExperimentKind, flags: Flags) -> Result<(), HarnessError> {
    let config = build_config(kind, flags)?;
    let output = run_experiment(&config)?;
    if let Some(dir) = &config.out_dir {
        write_outputs(&output, dir)?;
    }
    let stdout = std::io::stdout().lock();
    match config.format {
        OutputFormat::Csv => output.report.write_cells_csv(stdout),
        OutputFormat::Json => output.report.write_json(stdout),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, flags) = match cli.command {
        Command::Fit(f) => (ExperimentKind::Fit, f),
        Command::Band(f) => (ExperimentKind::Band, f),
        Command::Coverage(f) => (ExperimentKind::Coverage, f),
        Command::Width(f) => (ExperimentKind::Width, f),
        Command::Pieces(f) => (ExperimentKind::Pieces, f),
        Command::Bandit(f) => (ExperimentKind::Bandit, f),
        Command::Figures(f) => (ExperimentKind::Figures, f),
    };
    match run(kind, flags) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
