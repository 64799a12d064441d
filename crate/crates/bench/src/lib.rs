//! Benchmark programs run on every implementation strategy, with digests to
//! confirm the strategies agree.

pub mod arith;
pub mod intparse;
pub mod nqueens;
pub mod report;

pub use report::{run_bench, run_check, BenchReport, BenchSpec, Outcome};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BenchError {
    #[error("{bench}/{imp} n={n}: digest {got} differs from indirect {expected}")]
    ImplMismatch {
        bench: Bench,
        imp: Impl,
        n: usize,
        expected: String,
        got: String,
    },
    #[error("machines disagree on {failed} of {total} terms (first: {first})")]
    MachineDisagreement {
        failed: usize,
        total: usize,
        first: String,
    },
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("benchmark thread panicked: {0}")]
    Panicked(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Bench {
    Nqueens,
    IntparseGlob,
    IntparseLocal,
    ArithParse,
    VerifyMachines,
}

impl Bench {
    pub const ALL: [Bench; 5] = [
        Bench::Nqueens,
        Bench::IntparseGlob,
        Bench::IntparseLocal,
        Bench::ArithParse,
        Bench::VerifyMachines,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Bench::Nqueens => "nqueens",
            Bench::IntparseGlob => "intparse-glob",
            Bench::IntparseLocal => "intparse-local",
            Bench::ArithParse => "arith-parse",
            Bench::VerifyMachines => "verify-machines",
        }
    }

    /// Implementations this benchmark can run on.
    pub fn impls(self) -> &'static [Impl] {
        match self {
            // the parser monad carries state, which the optimized driver
            // cannot support
            Bench::ArithParse => &[Impl::Indirect, Impl::Replay, Impl::Thermo],
            Bench::VerifyMachines => &[Impl::Indirect],
            _ => &Impl::ALL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Impl {
    /// Explicit monadic or pure code, no control effects.
    Indirect,
    /// Replay-based nondeterminism.
    Replay,
    /// Reflection over thermometer continuations.
    Thermo,
    /// Optimized reflection.
    ThermoOpt,
}

impl Impl {
    pub const ALL: [Impl; 4] = [Impl::Indirect, Impl::Replay, Impl::Thermo, Impl::ThermoOpt];

    pub fn name(self) -> &'static str {
        match self {
            Impl::Indirect => "indirect",
            Impl::Replay => "replay",
            Impl::Thermo => "thermo",
            Impl::ThermoOpt => "thermo-opt",
        }
    }
}

macro_rules! named_enum {
    ($ty:ident) => {
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.name())
            }
        }

        impl FromStr for $ty {
            type Err = String;

            fn from_str(s: &str) -> Result<Self, String> {
                $ty::ALL.into_iter().find(|v| v.name() == s).ok_or_else(|| {
                    let names: Vec<_> = $ty::ALL.iter().map(|v| v.name()).collect();
                    format!("unknown value `{s}`, expected one of {}", names.join(", "))
                })
            }
        }
    };
}

named_enum!(Bench);
named_enum!(Impl);

/// A fraction `p/q` with `0 <= p <= q`, `q > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fraction {
    pub num: u64,
    pub den: u64,
}

impl Fraction {
    pub const ZERO: Fraction = Fraction { num: 0, den: 1 };
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Fraction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (p, q) = s.split_once('/').unwrap_or((s, "1"));
        let num: u64 = p
            .trim()
            .parse()
            .map_err(|_| format!("bad numerator in `{s}`"))?;
        let den: u64 = q
            .trim()
            .parse()
            .map_err(|_| format!("bad denominator in `{s}`"))?;
        if den == 0 || num > den {
            return Err(format!("fraction `{s}` must satisfy 0 <= p <= q, q > 0"));
        }
        Ok(Fraction { num, den })
    }
}
