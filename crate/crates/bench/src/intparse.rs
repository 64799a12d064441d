//! Parse a list of strings as integers and sum them, either failing as a
//! whole on a bad entry (`glob`) or skipping bad entries (`local`).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thermo::{Failure, MaybeMonad, Nondet, NondetContext, OptReflected, Reflected};

use crate::{Fraction, Impl};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Glob,
    Local,
}

/// `n` entries; a `bad` fraction of them, evenly spaced, are not numbers.
pub fn gen_inputs(n: usize, bad: Fraction, seed: u64) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (p, q) = (bad.num as u128, bad.den as u128);
    (0..n as u128)
        .map(|i| {
            if (i + 1) * p / q > i * p / q {
                let len = rng.random_range(1..6);
                (0..len).map(|_| rng.random_range('a'..='z')).collect()
            } else {
                rng.random_range(0..1_000_000i64).to_string()
            }
        })
        .collect()
}

/// Input with a single bad entry halfway through.
pub fn gen_inputs_one_bad(n: usize, seed: u64) -> Vec<String> {
    let mut xs = gen_inputs(n, Fraction::ZERO, seed);
    if !xs.is_empty() {
        let mid = xs.len() / 2;
        xs[mid] = "oops".to_string();
    }
    xs
}

fn parse(s: &str) -> Option<i64> {
    s.parse().ok()
}

fn sum_all<F: Failure>(f: &F, xs: &[String]) -> i64 {
    xs.iter().map(|s| f.require(parse(s))).sum()
}

fn sum_all_nondet(nd: &NondetContext, xs: &[String]) -> i64 {
    xs.iter()
        .map(|s| match parse(s) {
            Some(v) => v,
            None => Nondet::fail(nd),
        })
        .sum()
}

/// Sum of the entries, `None` under `Glob` if any entry is bad. Under
/// `Local` the result is always present.
pub fn run(xs: &[String], mode: Mode, imp: Impl) -> Option<i64> {
    match (mode, imp) {
        (Mode::Glob, Impl::Indirect) => xs.iter().map(|s| parse(s)).sum(),
        (Mode::Local, Impl::Indirect) => Some(xs.iter().filter_map(|s| parse(s)).sum()),

        // failure is a path with no result
        (Mode::Glob, Impl::Replay) => {
            let nd = NondetContext::new();
            nd.with_nondeterminism(|nd| sum_all_nondet(nd, xs)).pop()
        }
        (Mode::Local, Impl::Replay) => {
            let nd = NondetContext::new();
            let each = |s: &String| {
                nd.with_nondeterminism(|nd| sum_all_nondet(nd, std::slice::from_ref(s)))
                    .pop()
                    .unwrap_or(0)
            };
            Some(xs.iter().map(each).sum())
        }

        (Mode::Glob, Impl::Thermo) => {
            let owned = xs.to_vec();
            Reflected::<MaybeMonad>::new().reify(move |r| sum_all(r, &owned))
        }
        (Mode::Local, Impl::Thermo) => {
            let r = Reflected::<MaybeMonad>::new();
            let each = |s: &String| {
                let s = s.clone();
                r.reify(move |r| r.require(parse(&s))).unwrap_or(0)
            };
            Some(xs.iter().map(each).sum())
        }

        (Mode::Glob, Impl::ThermoOpt) => {
            OptReflected::<MaybeMonad>::new().reify(|r| sum_all(r, xs))
        }
        (Mode::Local, Impl::ThermoOpt) => {
            let r = OptReflected::<MaybeMonad>::new();
            let each = |s: &String| r.reify(|r| r.require(parse(s))).unwrap_or(0);
            Some(xs.iter().map(each).sum())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strs(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn examples() {
        for imp in Impl::ALL {
            assert_eq!(run(&strs(&["1", "2", "3"]), Mode::Glob, imp), Some(6));
            assert_eq!(run(&strs(&["1", "x", "3"]), Mode::Glob, imp), None);
            assert_eq!(run(&strs(&["1", "x", "3"]), Mode::Local, imp), Some(4));
            assert_eq!(run(&[], Mode::Glob, imp), Some(0));
        }
    }

    #[test]
    fn bad_entries_are_evenly_spaced() {
        let xs = gen_inputs(100, Fraction { num: 1, den: 10 }, 7);
        let bad: Vec<usize> = (0..100).filter(|&i| parse(&xs[i]).is_none()).collect();
        assert_eq!(bad, (0..10).map(|k| 10 * k + 9).collect::<Vec<_>>());
        assert_eq!(gen_inputs(100, Fraction { num: 1, den: 10 }, 7), xs);
        let half = gen_inputs(10, Fraction { num: 1, den: 2 }, 1);
        assert_eq!(half.iter().filter(|s| parse(s).is_none()).count(), 5);
    }
}
