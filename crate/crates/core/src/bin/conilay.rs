use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use conilay::experiments::{run_with_workers, Experiment, ExperimentConfig};

/// Runs one experiment of the conical-layer toolkit from a JSON configuration.
#[derive(Parser, Debug)]
#[command(name = "conilay", version)]
struct Args {
    /// sweep_theta | counting | potential | modes | semiclassical | agmon | verify
    experiment: String,
    /// JSON configuration; `{}` selects every default.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides `output_dir` of the configuration).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (overrides `workers` of the configuration).
    #[arg(long)]
    workers: Option<usize>,
}

fn run(args: Args) -> anyhow::Result<bool> {
    let experiment: Experiment = args.experiment.parse()?;
    let config = ExperimentConfig::load(&args.config)
        .with_context(|| format!("reading {}", args.config.display()))?
        .for_experiment(experiment)?;
    let out = args
        .out
        .or_else(|| config.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("out").join(experiment.name()));
    let output = run_with_workers(&config, &out, args.workers)?;
    for f in &output.files {
        println!("wrote {}", f.display());
    }
    println!("{}", output.summary);
    Ok(output.passed != Some(false))
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
