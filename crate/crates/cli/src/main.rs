use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lowdisc_cli::commands::{self, emit};
use lowdisc_cli::config::parse_positive_rational;
use lowdisc_cli::verify::{self, Faults};
use lowdisc_cli::{CliError, Format, RunConfig, SequenceSpec};
use num_rational::BigRational;

#[derive(Parser)]
#[command(
    name = "lowdisc",
    version,
    about = "Low-discrepancy sequences {α n_k} built from φ"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Zeckendorf and positive-digit representations of N with the rewrite trace.
    FibRep { n: u64 },
    /// Build α and write its interval and certified decimal expansion.
    Construct(RunArgs),
    /// Tabulate D_N and per-block discrepancies.
    Experiment(RunArgs),
    /// Run the invariant suite.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, hide = true)]
        inject_fault: Option<u64>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// `factorial`, `k_pow_k`, or an expression in k such as `(k+1)! * 2^k`.
    #[arg(long, default_value = "factorial")]
    sequence: SequenceSpec,
    #[arg(long, default_value_t = 200)]
    stages: u64,
    /// Exact constant c, as p/q or a finite decimal.
    #[arg(long, value_parser = parse_positive_rational)]
    c: Option<BigRational>,
    /// Largest N for the experiment (defaults to --stages).
    #[arg(long)]
    nmax: Option<u64>,
    #[arg(long, default_value_t = 50)]
    precision: usize,
    #[arg(long, env = "LOWDISC_OUT_DIR", default_value = "out")]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Add a D_N / N column.
    #[arg(long)]
    normalized: bool,
}

impl From<RunArgs> for RunConfig {
    fn from(a: RunArgs) -> Self {
        RunConfig {
            sequence: a.sequence,
            stages: a.stages,
            c: a.c,
            n_max: a.nmax.unwrap_or(a.stages),
            out: a.out,
            precision: a.precision,
            seed: a.seed,
            format: a.format,
            normalized: a.normalized,
        }
    }
}

fn list(paths: &[PathBuf]) -> String {
    paths
        .iter()
        .map(|p| format!("wrote {}\n", p.display()))
        .collect()
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::FibRep { n } => emit(&commands::fib_rep(n)?),
        Command::Construct(args) => emit(&list(&commands::construct(&args.into())?)),
        Command::Experiment(args) => {
            let (paths, line) = commands::experiment(&args.into())?;
            emit(&format!("{}{line}\n", list(&paths)));
        }
        Command::Verify { seed, inject_fault } => {
            let results = verify::run_suite(
                seed,
                Faults {
                    corrupt_digits_at: inject_fault,
                },
            );
            let text: String = results.iter().map(|r| format!("{r}\n")).collect();
            emit(&text);
            let failed: Vec<&str> = results
                .iter()
                .filter(|r| !r.passed)
                .map(|r| r.name)
                .collect();
            if !failed.is_empty() {
                return Err(CliError::Verification(failed.join(", ")));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
