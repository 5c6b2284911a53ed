use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use curvlab::cli::{self, Overrides, EXIT_USAGE};

#[derive(Parser)]
#[command(name = "curvlab", version, about = "Checks for algebraic curvature tensors")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the checks listed in a JSON config.
    Run {
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Suppress the per-check summary.
        #[arg(long)]
        quiet: bool,
    },
    /// List generator builtins and check names.
    ListBuiltins,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match args.command {
        Command::ListBuiltins => {
            print!("{}", cli::list_builtins());
            ExitCode::SUCCESS
        }
        Command::Run {
            config,
            seed,
            samples,
            tol,
            report,
            quiet,
        } => {
            let overrides = Overrides { seed, samples, tol };
            let resolved = match cli::load_config(&config, overrides) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("config error: {e}");
                    return ExitCode::from(EXIT_USAGE as u8);
                }
            };
            let result = cli::run_checks(&resolved);
            let body = cli::report_json(&result);
            match &report {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &body) {
                        eprintln!("cannot write report {}: {e}", path.display());
                        return ExitCode::from(EXIT_USAGE as u8);
                    }
                }
                None => print!("{body}"),
            }
            if !quiet {
                eprint!("{}", cli::summary(&result));
            }
            ExitCode::from(cli::exit_code(&result) as u8)
        }
    }
}
