use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use relaxlab::experiments::{compare, emit_plot_data, format_diff, run, RunConfig, RunError, RunOptions};
use relaxlab::{parallel, Error};

#[derive(Parser)]
#[command(name = "relaxlab", version, about = "Vanishing-epsilon studies of Ginzburg-Landau type energies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a configuration: continuation, harmonic limit, diagnostics, acceptance checks.
    Run {
        config: PathBuf,
        /// Coarse grid preset (h = 1/12).
        #[arg(long)]
        fast: bool,
        /// Output directory; overrides the configuration.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Side-by-side differences of two run summaries.
    Compare { a: PathBuf, b: PathBuf },
    /// Write .dat files and SVG charts for a run directory.
    Plot { dir: PathBuf },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    parallel::init_from_env();
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config, fast, out } => {
            let cfg = match RunConfig::load(&config) {
                Ok(c) => c,
                Err(e) => return fail(&RunError::Schema(e)),
            };
            match run(&cfg, &RunOptions { fast, out }) {
                Ok(summary) => {
                    for c in &summary.criteria {
                        println!("{:>2} {} {}: {}", c.id, c.status.as_str(), c.name, c.detail);
                    }
                    println!(
                        "{}: {} of {} criteria passed in {:.1} s",
                        summary.name,
                        summary.criteria.iter().filter(|c| c.status.as_str() == "PASS").count(),
                        summary.criteria.len(),
                        summary.timing.total_seconds
                    );
                    ExitCode::SUCCESS
                }
                Err(e) => fail(&e),
            }
        }
        Command::Compare { a, b } => match compare(&a, &b) {
            Ok(rows) => {
                print!("{}", format_diff(&rows));
                ExitCode::SUCCESS
            }
            Err(e) => report(&e, 1),
        },
        Command::Plot { dir } => match emit_plot_data(&dir) {
            Ok(files) => {
                for f in files {
                    println!("{}", f.display());
                }
                ExitCode::SUCCESS
            }
            Err(e) => report(&e, 1),
        },
    }
}

fn fail(e: &RunError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}

fn report(e: &Error, code: u8) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(code)
}
