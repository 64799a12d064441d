use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use thermo_bench::{
    run_bench, run_check, Bench, BenchError, BenchReport, BenchSpec, Fraction, Impl,
};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Csv,
}

/// Run a benchmark on one implementation and cross-check its result
/// against the indirect one.
#[derive(Debug, Parser)]
#[command(version)]
struct Args {
    /// nqueens, intparse-glob, intparse-local, arith-parse or verify-machines
    #[arg(long)]
    bench: Bench,
    /// indirect, replay, thermo or thermo-opt
    #[arg(long = "impl", default_value = "indirect")]
    imp: Impl,
    /// Board size, entry count, leaf count, or number of terms
    #[arg(long, default_value_t = 8)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Fraction p/q of bad entries for intparse (local defaults to 1/10)
    #[arg(long)]
    bad_fraction: Option<Fraction>,
    /// Largest generated term for verify-machines
    #[arg(long, default_value_t = 12)]
    max_size: usize,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Only cross-check the result digest; no timing
    #[arg(long)]
    check: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let spec = BenchSpec {
        bench: args.bench,
        imp: args.imp,
        n: args.n,
        trials: args.trials,
        seed: args.seed,
        bad_fraction: args.bad_fraction,
        max_size: args.max_size,
    };

    let result = if args.check {
        run_check(&spec).map(|o| {
            println!(
                "ok {}/{} n={} digest={} {}",
                spec.bench, spec.imp, spec.n, o.digest, o.summary
            );
        })
    } else {
        run_bench(&spec).map(|report| match args.format {
            Format::Csv => print!(
                "{}{}",
                format_args!("{}\n", BenchReport::CSV_HEADER),
                report.to_csv()
            ),
            Format::Table => print!("{}", report.to_table()),
        })
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ BenchError::InvalidSpec(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
