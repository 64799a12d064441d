//! Unwinding payloads used as non-local exits by the replay engines.
//!
//! Signals never carry user values: the value travels through the owning
//! context's state and the payload only names who must catch it. This keeps
//! the payload `Send` regardless of the answer type.

use std::any::Any;
use std::panic;
use std::sync::atomic::{AtomicU64, Ordering};

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

/// Fresh identity for a context or a driver activation.
pub(crate) fn fresh_id() -> u64 {
    NEXT_ID.fetch_add(1, Ordering::Relaxed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum SignalKind {
    /// A shift body finished; its result waits in the context's slot.
    Done,
    /// `choose` was handed an empty list.
    Empty,
    /// An optimized reflect needs the driver loop to take over.
    Step,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Signal {
    pub(crate) owner: u64,
    pub(crate) kind: SignalKind,
}

impl Signal {
    pub(crate) fn raise(owner: u64, kind: SignalKind) -> ! {
        panic::resume_unwind(Box::new(Signal { owner, kind }))
    }

    /// True when `payload` is exactly this signal.
    pub(crate) fn matches(payload: &(dyn Any + Send), owner: u64, kind: SignalKind) -> bool {
        payload
            .downcast_ref::<Signal>()
            .is_some_and(|s| s.owner == owner && s.kind == kind)
    }
}
