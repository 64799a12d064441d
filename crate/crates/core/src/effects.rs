//! Effect interfaces shared by the engines, so one program can run on any
//! of them.

use crate::monad::{ListMonad, MaybeMonad};
use crate::nondet::NondetContext;
use crate::optimized::OptReflected;
use crate::reflect::Reflected;
use crate::universal::Payload;

/// Nondeterministic choice.
pub trait Nondet {
    fn choose<T: Payload>(&self, xs: Vec<T>) -> T;

    fn fail<T: Payload>(&self) -> T {
        self.choose(Vec::new())
    }

    /// Continue only on paths where `cond` holds.
    fn guard(&self, cond: bool) {
        if !cond {
            self.fail::<()>();
        }
    }
}

impl Nondet for NondetContext {
    fn choose<T: Payload>(&self, xs: Vec<T>) -> T {
        NondetContext::choose(self, &xs)
    }
}

impl Nondet for Reflected<ListMonad> {
    fn choose<T: Payload>(&self, xs: Vec<T>) -> T {
        self.reflect(xs)
    }
}

impl Nondet for OptReflected<ListMonad> {
    fn choose<T: Payload>(&self, xs: Vec<T>) -> T {
        self.reflect(xs)
    }
}

/// Failure that aborts the whole computation.
pub trait Failure {
    fn fail<T: Payload>(&self) -> T;

    fn require<T: Payload>(&self, value: Option<T>) -> T {
        match value {
            Some(v) => v,
            None => self.fail(),
        }
    }
}

impl Failure for Reflected<MaybeMonad> {
    fn fail<T: Payload>(&self) -> T {
        self.reflect(None)
    }
}

impl Failure for OptReflected<MaybeMonad> {
    fn fail<T: Payload>(&self) -> T {
        self.reflect(None)
    }
}
