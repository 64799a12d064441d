use std::any::Any;
use std::cell::Cell;
use std::panic::{self, AssertUnwindSafe};

use thiserror::Error;

/// Misuse of a control operator, or a replay that did not follow its
/// recorded trace.
///
/// Effectful operations (`shift`, `choose`, `reflect`) return plain values,
/// so these errors travel by unwinding. Wrap a computation in
/// [`catch_control`] (or use one of the `try_*` entry points) to receive them
/// as a `Result`; outside such a scope they surface as an ordinary panic with
/// the error's message.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ControlError {
    #[error("type mismatch: value embedded as `{found}` projected as `{expected}`")]
    TypeMismatch {
        expected: &'static str,
        found: &'static str,
    },
    #[error("shift or reflect used outside of any enclosing reset on its context")]
    MissingReset,
    #[error("choose used outside of any active with_nondeterminism on its context")]
    UsedOutsideScope,
    #[error("continuation invoked after its enclosing reify returned")]
    EscapedContinuation,
    #[error("replay diverged from its recorded trace: {unconsumed} frame(s) left unconsumed")]
    ReplayDivergence { unconsumed: usize },
    #[error("replayed choose saw {found} choice(s) where {recorded} were recorded")]
    ChoiceMismatch { recorded: usize, found: usize },
    #[error("cps bind broke its contract: {0}")]
    CpsContract(&'static str),
    #[error("internal invariant violated: {0}")]
    InternalInvariant(&'static str),
}

thread_local! {
    static CATCH_DEPTH: Cell<usize> = const { Cell::new(0) };
}

/// Abort the current computation with `err`.
#[track_caller]
pub(crate) fn raise(err: ControlError) -> ! {
    if CATCH_DEPTH.with(Cell::get) > 0 {
        panic::resume_unwind(Box::new(err))
    } else {
        panic!("{err}")
    }
}

struct DepthGuard;

impl DepthGuard {
    fn enter() -> Self {
        CATCH_DEPTH.with(|d| d.set(d.get() + 1));
        DepthGuard
    }
}

impl Drop for DepthGuard {
    fn drop(&mut self) {
        CATCH_DEPTH.with(|d| d.set(d.get() - 1));
    }
}

/// Run `f`, turning a [`ControlError`] raised anywhere inside it into `Err`.
///
/// Any other panic keeps unwinding.
pub fn catch_control<T>(f: impl FnOnce() -> T) -> Result<T, ControlError> {
    let guard = DepthGuard::enter();
    let result = panic::catch_unwind(AssertUnwindSafe(f));
    drop(guard);
    match result {
        Ok(v) => Ok(v),
        Err(payload) => match payload.downcast::<ControlError>() {
            Ok(err) => Err(*err),
            Err(other) => panic::resume_unwind(other),
        },
    }
}

/// Best-effort message for a panic payload, used by callers that report
/// user errors.
pub fn panic_message(payload: &(dyn Any + Send)) -> String {
    if let Some(s) = payload.downcast_ref::<&str>() {
        (*s).to_string()
    } else if let Some(s) = payload.downcast_ref::<String>() {
        s.clone()
    } else if let Some(e) = payload.downcast_ref::<ControlError>() {
        e.to_string()
    } else {
        "non-string panic payload".to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn caught_errors_come_back_structured() {
        let r: Result<(), _> = catch_control(|| raise(ControlError::MissingReset));
        assert_eq!(r, Err(ControlError::MissingReset));
    }

    #[test]
    fn nested_catch_restores_depth() {
        let outer = catch_control(|| {
            let inner: Result<u8, _> = catch_control(|| raise(ControlError::UsedOutsideScope));
            assert!(inner.is_err());
            CATCH_DEPTH.with(Cell::get)
        });
        assert_eq!(outer, Ok(1));
        assert_eq!(CATCH_DEPTH.with(Cell::get), 0);
    }

    #[test]
    fn uncaught_errors_panic_with_message() {
        let payload = panic::catch_unwind(|| raise(ControlError::EscapedContinuation)).unwrap_err();
        assert!(panic_message(&*payload).contains("after its enclosing reify"));
    }

    #[test]
    fn other_panics_pass_through() {
        let payload = panic::catch_unwind(|| {
            let _ = catch_control(|| panic!("user error"));
        })
        .unwrap_err();
        assert_eq!(panic_message(&*payload), "user error");
    }
}
