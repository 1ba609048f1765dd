use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod config;
mod error;
mod verify;

#[derive(Parser)]
#[command(name = "netblow", version, about = "Blow-up analysis of semilinear heat equations on weighted networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// First Dirichlet eigenpair and interior degree range of a network file.
    Spectrum { graph: PathBuf },
    /// Checks the growth conditions on the configured reaction term.
    Check { config: PathBuf },
    /// Integrate a config and write the trajectory CSV.
    Simulate { config: PathBuf },
    /// Search for constant initial data with positive energy.
    FindInitial { config: PathBuf },
    /// Run the randomized property suites.
    Verify {
        config: PathBuf,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Spectrum { graph } => commands::spectrum(graph),
        Command::Check { config } => commands::check(config),
        Command::Simulate { config } => commands::simulate(config),
        Command::FindInitial { config } => commands::find_initial(config),
        Command::Verify {
            config,
            trials,
            seed,
        } => verify::verify(config, *trials, *seed),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
