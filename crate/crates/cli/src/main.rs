use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use cvgkp::bench::{run_experiment, Experiment, ExperimentConfig};
use cvgkp::Error;

/// Runs one reproducibility experiment and writes its CSV report.
#[derive(Parser, Debug)]
#[command(name = "cvgkp", version)]
struct Args {
    /// threshold, pfail_curve, capacity, analog_vs_binary, sqec_chain,
    /// hrm_sweep, cluster_verify, decomp_check, breed or cubic
    experiment: String,

    /// Flat `key = value` configuration file.
    #[arg(long)]
    config: PathBuf,

    /// Overrides the seed in the config file.
    #[arg(long)]
    seed: Option<u64>,

    /// Overrides the trial count in the config file.
    #[arg(long)]
    trials: Option<u64>,

    /// Output path; defaults to the config's `out` key, then stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Schema(_) | Error::Parse { .. } | Error::InvalidParameter { .. } => 2,
        Error::Io(_) => 1,
        _ => 3,
    }
}

fn run(args: Args) -> Result<(), Error> {
    let experiment: Experiment = args.experiment.parse()?;
    let text = std::fs::read_to_string(&args.config)?;
    let mut config = ExperimentConfig::parse(&text, Some(experiment))?;
    if let Some(seed) = args.seed {
        config = config.with_seed(seed);
    }
    if let Some(trials) = args.trials {
        config = config.with_trials(trials)?;
    }
    let report = run_experiment(&config)?;
    match args.out.or_else(|| config.output_path.clone().map(PathBuf::from)) {
        Some(path) => report.write(&config, &path)?,
        None => print!("{}", report.to_csv(&config)),
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cvgkp: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
