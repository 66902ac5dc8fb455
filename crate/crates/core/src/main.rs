use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use swag_core::io::commands::{
    exit_code_for, exit_code_for_error, run_path, RunOptions, Subcommand,
};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Command {
    Props,
    Force,
    Pressure,
    Stiffness,
    Calibrate,
    JointFit,
    Simulate,
    Design,
}

impl From<Command> for Subcommand {
    fn from(c: Command) -> Self {
        match c {
            Command::Props => Subcommand::Props,
            Command::Force => Subcommand::Force,
            Command::Pressure => Subcommand::Pressure,
            Command::Stiffness => Subcommand::Stiffness,
            Command::Calibrate => Subcommand::Calibrate,
            Command::JointFit => Subcommand::JointFit,
            Command::Simulate => Subcommand::Simulate,
            Command::Design => Subcommand::Design,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
}

/// Sheath-and-subvine garment analysis.
///
/// Exit status: 0 success, 2 invalid input, 3 valid input with an
/// infeasible outcome.
#[derive(Debug, Parser)]
#[command(name = "swag", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// TOML run configuration.
    #[arg(long, short)]
    config: PathBuf,
    /// Directory for output files.
    #[arg(long, short, default_value = ".")]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// CSV input overriding the path named in the config.
    #[arg(long)]
    input: Option<PathBuf>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let Format::Csv = args.format;
    let opts = RunOptions {
        out_dir: args.out,
        input: args.input,
    };
    match run_path(args.command.into(), &args.config, &opts) {
        Ok(report) => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(report.summary.as_bytes());
            for f in &report.files {
                let _ = writeln!(out, "wrote {}", f.display());
            }
            ExitCode::from(exit_code_for(&report) as u8)
        }
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            ExitCode::from(exit_code_for_error(&e) as u8)
        }
    }
}
