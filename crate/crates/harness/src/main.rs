use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use swaylab::dim::{dim_probe, DEFAULT_SAMPLES};
use swaylab::{read_records, report, run_experiment, write_records, ExperimentConfig};
use swaylab_core::stats::BootstrapConfig;

#[derive(Parser)]
#[command(
    name = "swaylab",
    version,
    about = "Run and rank SWAY against evolutionary optimizers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Override the number of repeats.
    #[arg(long, global = true)]
    repeats: Option<usize>,

    /// Base seed; repeat i uses seed + i.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Evaluation budget of the evolutionary optimizers.
    #[arg(long, global = true)]
    budget: Option<usize>,

    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment config and write records plus a report.
    Run { config: PathBuf },
    /// Rebuild the report from a directory of records.
    Report { dir: PathBuf },
    /// Estimate the intrinsic dimension of a scenario's decision space.
    Dim {
        scenario: String,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
    },
}

fn execute(cli: Cli) -> swaylab::Result<()> {
    match cli.command {
        Command::Run { config } => {
            let mut config = ExperimentConfig::load(&config)?;
            if let Some(r) = cli.repeats {
                config.repeats = r;
            }
            if let Some(s) = cli.seed {
                config.seed = s;
            }
            if let Some(b) = cli.budget {
                config.budget = b;
            }
            if let Some(o) = cli.out {
                config.out = o;
            }
            config.validate()?;
            let records = run_experiment(&config)?;
            write_records(&config.out, &records)?;
            let rep = report(&records, &BootstrapConfig::default())?;
            rep.write(&config.out)?;
            println!("{} runs written to {}", records.len(), config.out.display());
        }
        Command::Report { dir } => {
            let records = read_records(&dir)?;
            let rep = report(&records, &BootstrapConfig::default())?;
            let out = cli.out.unwrap_or(dir);
            rep.write(&out)?;
            print!("{}", rep.to_markdown());
        }
        Command::Dim { scenario, samples } => {
            let probe = dim_probe(&scenario, samples, cli.seed.unwrap_or(0))?;
            println!(
                "{}: intrinsic {:.2} of {} actual dims ({} samples)",
                probe.scenario, probe.intrinsic, probe.actual, probe.samples
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
