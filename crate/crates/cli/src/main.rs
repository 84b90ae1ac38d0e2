use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Parser, Subcommand};

mod catalog;
mod config;
mod output;
mod run;

use config::ExperimentConfig;

/// Experiment runner for Cox-process vehicular networks.
#[derive(Parser, Debug)]
#[command(name = "coxnet", version)]
struct Cli {
    /// Worker threads for Monte Carlo (default: all cores). Results do not
    /// depend on this.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one experiment and write `<name>.csv`, `<name>.manifest` and
    /// `<name>.config.toml` into the output directory.
    Run {
        /// Experiment config file (TOML).
        #[arg(long, conflicts_with = "experiment")]
        config: Option<PathBuf>,
        /// Built-in experiment name; see `coxnet list`.
        #[arg(long)]
        experiment: Option<String>,
        /// Overrides the config's Monte Carlo seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Print the built-in experiments.
    List,
}

fn execute(cli: Cli) -> Result<()> {
    if let Some(n) = cli.jobs {
        if n == 0 {
            bail!("--jobs must be at least 1");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    match cli.command {
        Command::List => print!("{}", catalog::list_experiments()?),
        Command::Run { config, experiment, seed, out } => {
            let mut cfg = match (config, experiment) {
                (Some(path), None) => ExperimentConfig::load(&path)?,
                (None, Some(name)) => catalog::lookup(&name)?,
                _ => bail!("pass exactly one of --config or --experiment"),
            };
            if let Some(s) = seed {
                cfg.mc.seed = s;
            }
            let result = run::run(&cfg)?;
            for path in output::write(&out, &cfg, &result)? {
                println!("wrote {}", path.display());
            }
            if let Some(s) = result.summary {
                println!("{s}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
