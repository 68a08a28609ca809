use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use rkbvp::build_bivariate_kernel;
use rkbvp_bench::kernel_dump::kernel_csv;
use rkbvp_bench::verify::verify_suite;
use rkbvp_bench::{emit, run, BenchError, ExampleId, Grid, OutputFormat, ProblemSource, RunConfig};

#[derive(Parser)]
#[command(name = "rkbvp", version, about = "Reproducing kernel solver for fifth-order boundary-value problems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a problem and print its error table.
    #[command(group(ArgGroup::new("source").required(true).args(["problem", "example"])))]
    Solve {
        /// Problem file (key = value format).
        #[arg(long)]
        problem: Option<PathBuf>,
        /// Built-in example: 4.1, 4.2, 4.3 or 4.4.
        #[arg(long)]
        example: Option<String>,
        #[arg(long, default_value_t = 36)]
        nodes: usize,
        /// `a:b:step`, a comma list, `table3`, `table4` or `default`.
        #[arg(long, default_value = "default")]
        grid: String,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 25)]
        max_iter: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Output file (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the 12×12 coefficient matrix of the kernel on x ≤ y as CSV.
    KernelDump {
        /// Dump the x > y branch instead.
        #[arg(long)]
        upper: bool,
    },
    /// Run the invariant suite.
    Verify,
}

fn write_output(out: Option<&PathBuf>, text: &str) -> Result<(), BenchError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|source| BenchError::Io { path: path.clone(), source }),
        None => {
            io::stdout().write_all(text.as_bytes()).map_err(|source| BenchError::Io { path: "<stdout>".into(), source })
        }
    }
}

fn execute(command: Command) -> Result<ExitCode, BenchError> {
    match command {
        Command::Solve { problem, example, nodes, grid, tol, max_iter, format, out } => {
            let source = match (problem, example) {
                (Some(path), _) => ProblemSource::File(path),
                (None, Some(id)) => ProblemSource::Builtin(id.parse::<ExampleId>()?),
                (None, None) => unreachable!("clap enforces a source"),
            };
            let format = match format {
                Format::Csv => OutputFormat::Csv,
                Format::Text => OutputFormat::Text,
            };
            let config = RunConfig { source, nodes, grid: grid.parse::<Grid>()?, tol, max_iter, format };
            let table = run(&config)?;
            if !table.meta.converged {
                eprintln!("warning: Newton iteration did not converge in {} steps", table.meta.iterations);
            }
            write_output(out.as_ref(), &emit(&table, format))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::KernelDump { upper } => {
            let kernel = build_bivariate_kernel()?;
            write_output(None, &kernel_csv(&kernel, upper))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify => {
            let kernel = build_bivariate_kernel()?;
            let checks = verify_suite(&kernel);
            for c in &checks {
                println!("{c}");
            }
            Ok(if checks.iter().all(|c| c.passed) { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
