use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fwlab::{parse_scenario, run_scenario, RunConfig, RunError, SourceError};
use fwlab_core::histories::ConsistencyConfig;
use fwlab_core::Tolerances;

#[derive(Parser)]
#[command(
    name = "fwlab",
    version,
    about = "Framework analyses of small quantum systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and run a scenario, printing a report to standard output.
    Run {
        file: PathBuf,
        /// Emit the machine-readable JSON report.
        #[arg(long)]
        json: bool,
        #[arg(long, env = "FWLAB_TOL_ALGEBRAIC", default_value_t = 1e-10)]
        tol_algebraic: f64,
        /// Threshold on off-diagonal decoherence functional entries.
        #[arg(long, default_value_t = 1e-10)]
        tol_consistency: f64,
        /// Threshold for channel certification.
        #[arg(long, default_value_t = 1e-9)]
        tol_cert: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Parse a scenario and report source errors only.
    Check { file: PathBuf },
}

fn read(path: &Path) -> Result<String, ExitCode> {
    std::fs::read_to_string(path).map_err(|e| {
        eprintln!("fwlab: cannot read {}: {e}", path.display());
        ExitCode::from(2)
    })
}

fn report_errors(path: &Path, errors: &[SourceError]) -> ExitCode {
    for e in errors {
        eprintln!("{}:{e}", path.display());
    }
    ExitCode::from(1)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Check { file } => {
            let text = match read(&file) {
                Ok(t) => t,
                Err(code) => return code,
            };
            match parse_scenario(&text) {
                Ok(_) => ExitCode::SUCCESS,
                Err(errors) => report_errors(&file, &errors),
            }
        }
        Command::Run {
            file,
            json,
            tol_algebraic,
            tol_consistency,
            tol_cert,
            seed,
        } => {
            let text = match read(&file) {
                Ok(t) => t,
                Err(code) => return code,
            };
            let ast = match parse_scenario(&text) {
                Ok(a) => a,
                Err(errors) => return report_errors(&file, &errors),
            };
            let tolerances = match Tolerances::default().with_algebraic(tol_algebraic) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("fwlab: {e}");
                    return ExitCode::from(2);
                }
            };
            let config = RunConfig {
                tolerances,
                consistency: ConsistencyConfig {
                    tolerance: tol_consistency,
                    ..ConsistencyConfig::default()
                },
                tol_cert,
                seed,
                ..RunConfig::default()
            };
            match run_scenario(&ast, &config) {
                Ok(report) => {
                    if json {
                        print!("{}", report.to_json_string());
                    } else {
                        print!("{}", report.to_text());
                    }
                    ExitCode::SUCCESS
                }
                Err(RunError::Source(errors)) => report_errors(&file, &errors),
                Err(RunError::Config(message)) => {
                    eprintln!("fwlab: invalid configuration: {message}");
                    ExitCode::from(2)
                }
            }
        }
    }
}
