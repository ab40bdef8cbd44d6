use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sgtool_core::cli;

#[derive(Parser)]
#[command(name = "sgtool", about = "Green functions, traveling waves and remainder bounds for the viscous sine-Gordon equation")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file.
    Run { config: PathBuf },
    /// Parse and check a config without running it.
    Validate { config: PathBuf },
    /// Print the version.
    Version,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let outcome = match args.command {
        Command::Run { config } => cli::run(&config).map(|s| {
            for f in s.files {
                println!("{}", f.display());
            }
        }),
        Command::Validate { config } => cli::validate(&config).map(|c| println!("ok mode={}", c.mode.name())),
        Command::Version => {
            println!("sgtool {}", env!("CARGO_PKG_VERSION"));
            Ok(())
        }
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.diagnostic());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
