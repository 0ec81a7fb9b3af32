use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gcga_cli::commands::{run_analyze, run_compensate, run_waveform, Format, Mode};

#[derive(Parser)]
#[command(name = "gcga", version, about = "Multivector power analysis and passive compensation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose the apparent power of a circuit file
    Analyze {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Size a shunt compensator and report before/after
    Compensate {
        file: PathBuf,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        /// pole multipliers for lc mode, e.g. 1.2,2.5,4.5
        #[arg(long, value_delimiter = ',')]
        poles: Option<Vec<f64>>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Sample u(t), i(t) and p(t) as CSV
    Waveform {
        file: PathBuf,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        cycles: u32,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze { file, format } => run_analyze(&file, format),
        Command::Compensate { file, mode, poles, format } => run_compensate(&file, mode, poles.as_deref(), format),
        Command::Waveform { file, samples, cycles } => run_waveform(&file, samples, cycles),
    };
    match result {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
