use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qthermo_cli::{execute, Command, Format, Invocation, EXIT_CONFIG};

#[derive(Parser)]
#[command(
    name = "qthermo",
    version,
    about = "Single-qubit thermometry experiment runner"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// JSON configuration file (flat keys; missing keys take defaults)
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output file (stdout if omitted)
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Master seed, overriding `master_seed` from the config
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: FormatArg,

    /// Also write the JSON report to this file
    #[arg(long, global = true)]
    report: Option<PathBuf>,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// Optimal-observable expectations and separation versus interaction time
    Discriminate,
    /// Energy, entropy and free-energy changes along each trajectory
    FreeEnergy,
    /// Phase-to-time and weight-to-temperature calibration tables
    Calibration,
    /// Full optical simulation with tomography and Monte Carlo error bars
    SimulateExperiment,
}

#[derive(ValueEnum, Clone, Copy)]
enum FormatArg {
    Csv,
    Json,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_CONFIG as u8 } else { 0 });
        }
    };
    let inv = Invocation {
        command: match cli.command {
            Cmd::Discriminate => Command::Discriminate,
            Cmd::FreeEnergy => Command::FreeEnergy,
            Cmd::Calibration => Command::Calibration,
            Cmd::SimulateExperiment => Command::SimulateExperiment,
        },
        config: cli.config,
        out: cli.out,
        seed: cli.seed,
        format: match cli.format {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        },
        report: cli.report,
    };
    match execute(&inv) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("qthermo: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
