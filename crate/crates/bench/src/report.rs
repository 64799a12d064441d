//! Running a benchmark spec, cross-checking digests, and printing results.

use std::fmt::{Debug, Write as _};
use std::thread;
use std::time::Instant;

use sha2::{Digest, Sha256};
use thermo::machine::{differential_check, gen_term, run_cont};

use crate::intparse::{self, Mode};
use crate::{arith, nqueens, Bench, BenchError, Fraction, Impl};

// deep replays on the unoptimized engines recurse once per effect
const STACK_SIZE: usize = 1 << 30;

/// Default fraction of bad entries for `intparse-local`.
pub const DEFAULT_BAD_FRACTION: Fraction = Fraction { num: 1, den: 10 };

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchSpec {
    pub bench: Bench,
    pub imp: Impl,
    /// Board size, entry count, leaf count or term count, by benchmark.
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    /// Fraction of unparseable entries for the intparse benchmarks.
    pub bad_fraction: Option<Fraction>,
    /// Largest generated term for `verify-machines`.
    pub max_size: usize,
}

impl BenchSpec {
    pub fn new(bench: Bench, imp: Impl, n: usize) -> Self {
        BenchSpec {
            bench,
            imp,
            n,
            trials: 1,
            seed: 0,
            bad_fraction: None,
            max_size: 12,
        }
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        let bad = |msg: String| Err(BenchError::InvalidSpec(msg));
        if !self.bench.impls().contains(&self.imp) {
            return bad(format!("{} cannot run on {}", self.bench, self.imp));
        }
        if self.trials == 0 {
            return bad("at least one trial is required".into());
        }
        match self.bench {
            Bench::Nqueens if !(1..=13).contains(&self.n) => {
                bad(format!("board size {} outside 1..=13", self.n))
            }
            Bench::ArithParse if self.n == 0 => bad("at least one leaf is required".into()),
            Bench::VerifyMachines if self.max_size == 0 => bad("max size must be positive".into()),
            _ => Ok(()),
        }
    }

    fn bad_fraction(&self) -> Fraction {
        match (self.bench, self.bad_fraction) {
            (_, Some(f)) => f,
            (Bench::IntparseLocal, None) => DEFAULT_BAD_FRACTION,
            _ => Fraction::ZERO,
        }
    }
}

/// What a run produced, reduced to something comparable and printable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub digest: String,
    pub summary: String,
}

#[derive(Debug, Clone)]
pub struct BenchReport {
    pub spec: BenchSpec,
    pub seconds: Vec<f64>,
    pub outcome: Outcome,
}

impl BenchReport {
    pub fn mean_seconds(&self) -> f64 {
        self.seconds.iter().sum::<f64>() / self.seconds.len() as f64
    }

    pub const CSV_HEADER: &'static str = "bench,impl,n,trial,seconds,result_digest,result_summary";

    fn rows(&self) -> Vec<[String; 7]> {
        self.seconds
            .iter()
            .enumerate()
            .map(|(i, s)| {
                [
                    self.spec.bench.to_string(),
                    self.spec.imp.to_string(),
                    self.spec.n.to_string(),
                    (i + 1).to_string(),
                    format!("{s:.6}"),
                    self.outcome.digest.clone(),
                    self.outcome.summary.clone(),
                ]
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in self.rows() {
            let fields: Vec<String> = row.iter().map(|f| csv_field(f)).collect();
            writeln!(out, "{}", fields.join(",")).unwrap();
        }
        out
    }

    pub fn to_table(&self) -> String {
        let header = BenchReport::CSV_HEADER.split(',').map(str::to_string);
        let mut rows: Vec<Vec<String>> = vec![header.collect()];
        rows.extend(self.rows().into_iter().map(Vec::from));
        let widths: Vec<usize> = (0..7)
            .map(|c| rows.iter().map(|r| r[c].len()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for r in &rows {
            let cells: Vec<String> = r
                .iter()
                .zip(&widths)
                .map(|(cell, w)| format!("{cell:<w$}"))
                .collect();
            writeln!(out, "{}", cells.join("  ").trim_end()).unwrap();
        }
        writeln!(
            out,
            "mean {:.6}s over {} trial(s)",
            self.mean_seconds(),
            self.seconds.len()
        )
        .unwrap();
        out
    }
}

fn csv_field(f: &str) -> String {
    if f.contains([',', '"', '\n']) {
        format!("\"{}\"", f.replace('"', "\"\""))
    } else {
        f.to_string()
    }
}

/// Short stable hash of a value's debug rendering.
pub fn digest_of(value: &impl Debug) -> String {
    let hash = Sha256::digest(format!("{value:?}").as_bytes());
    hex::encode(hash)[..16].to_string()
}

/// Run one trial of `spec` on `imp`, returning wall seconds and outcome.
fn execute(spec: &BenchSpec, imp: Impl) -> Result<(f64, Outcome), BenchError> {
    let spec = spec.clone();
    let worker = thread::Builder::new()
        .stack_size(STACK_SIZE)
        .spawn(move || execute_here(&spec, imp))
        .map_err(|e| BenchError::Panicked(e.to_string()))?;
    match worker.join() {
        Ok(r) => r,
        Err(p) => Err(BenchError::Panicked(thermo::panic_message(&*p))),
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (f64, T) {
    let start = Instant::now();
    let v = f();
    (start.elapsed().as_secs_f64(), v)
}

fn execute_here(spec: &BenchSpec, imp: Impl) -> Result<(f64, Outcome), BenchError> {
    let outcome = |digest: String, summary: String| Outcome { digest, summary };
    Ok(match spec.bench {
        Bench::Nqueens => {
            let (secs, sols) = timed(|| nqueens::solve(spec.n, imp));
            (
                secs,
                outcome(digest_of(&sols), format!("{} solutions", sols.len())),
            )
        }
        Bench::IntparseGlob | Bench::IntparseLocal => {
            let mode = if spec.bench == Bench::IntparseGlob {
                Mode::Glob
            } else {
                Mode::Local
            };
            let xs = intparse::gen_inputs(spec.n, spec.bad_fraction(), spec.seed);
            let (secs, sum) = timed(|| intparse::run(&xs, mode, imp));
            let summary = match sum {
                Some(v) => format!("sum={v}"),
                None => "failed".to_string(),
            };
            (secs, outcome(digest_of(&sum), summary))
        }
        Bench::ArithParse => {
            let input = arith::gen_expr(spec.n, spec.seed);
            let (secs, values) = timed(|| arith::run(&input, imp));
            (
                secs,
                outcome(digest_of(&values), format!("{} prefixes", values.len())),
            )
        }
        Bench::VerifyMachines => {
            let seeds = spec.seed..spec.seed + spec.n as u64;
            let (secs, failed) = timed(|| {
                seeds
                    .clone()
                    .map(|s| gen_term(s, spec.max_size))
                    .filter(|t| !differential_check(t))
                    .collect::<Vec<_>>()
            });
            if let Some(first) = failed.first() {
                return Err(BenchError::MachineDisagreement {
                    failed: failed.len(),
                    total: spec.n,
                    first: first.to_string(),
                });
            }
            let results: Vec<_> = seeds
                .map(|s| run_cont(&gen_term(s, spec.max_size)).ok())
                .collect();
            (
                secs,
                outcome(digest_of(&results), format!("{0}/{0} agree", spec.n)),
            )
        }
    })
}

fn cross_check(spec: &BenchSpec, got: &Outcome) -> Result<(), BenchError> {
    if spec.imp == Impl::Indirect {
        return Ok(());
    }
    let (_, expected) = execute(spec, Impl::Indirect)?;
    if expected.digest != got.digest {
        return Err(BenchError::ImplMismatch {
            bench: spec.bench,
            imp: spec.imp,
            n: spec.n,
            expected: expected.digest,
            got: got.digest.clone(),
        });
    }
    Ok(())
}

/// Run every trial, then compare the result against the indirect
/// implementation.
pub fn run_bench(spec: &BenchSpec) -> Result<BenchReport, BenchError> {
    spec.validate()?;
    let mut seconds = Vec::with_capacity(spec.trials);
    let mut first: Option<Outcome> = None;
    for _ in 0..spec.trials {
        let (secs, outcome) = execute(spec, spec.imp)?;
        seconds.push(secs);
        match &first {
            Some(o) if *o != outcome => {
                return Err(BenchError::InvalidSpec(
                    "trials produced different results".into(),
                ))
            }
            Some(_) => {}
            None => first = Some(outcome),
        }
    }
    let outcome = first.expect("at least one trial");
    cross_check(spec, &outcome)?;
    Ok(BenchReport {
        spec: spec.clone(),
        seconds,
        outcome,
    })
}

/// One untimed run, compared against the indirect implementation.
pub fn run_check(spec: &BenchSpec) -> Result<Outcome, BenchError> {
    spec.validate()?;
    let (_, outcome) = execute(spec, spec.imp)?;
    cross_check(spec, &outcome)?;
    Ok(outcome)
}
