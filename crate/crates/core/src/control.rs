//! Thermometer continuations: `shift` and `reset` for a fixed answer type,
//! built from unwinding and mutable state.
//!
//! A reset body is kept around so it can be replayed. Every `shift` either
//! obeys the next recorded [`Frame`] (return a value it is told to return, or
//! enter its body) or, when there is nothing left to obey, enters its body
//! with a continuation `k`. Calling `k(v)` replays the whole body against the
//! frames recorded so far plus `Return(v)`, which steers execution back to
//! the same `shift` and makes it return `v` there. The shift body's result is
//! handed to the nearest enclosing reset by unwinding.

use std::cell::RefCell;
use std::fmt;
use std::mem;
use std::panic::{self, AssertUnwindSafe};
use std::rc::Rc;

use crate::error::{catch_control, raise, ControlError};
use crate::signal::{fresh_id, Signal, SignalKind};
use crate::trace::Trace;
use crate::universal::{Payload, Universal};

/// One replay instruction for the next `shift` reached.
#[derive(Clone)]
pub enum Frame {
    /// Make the shift return this value.
    Return(Universal),
    /// Run the shift's body.
    Enter,
}

impl Frame {
    pub fn ret<T: Payload>(value: T) -> Self {
        Frame::Return(Universal::embed(value))
    }
}

impl fmt::Debug for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Frame::Return(u) => write!(f, "Return({})", u.tag().name()),
            Frame::Enter => f.write_str("Enter"),
        }
    }
}

/// A captured delimited continuation.
///
/// It stays usable after its reset has returned: invoking it installs a
/// fresh delimiter and replays the body.
pub type Cont<A, Ans> = Rc<dyn Fn(A) -> Ans>;

type Body<Ans> = Rc<dyn Fn(&Control<Ans>) -> Ans>;

struct ResetState<Ans: 'static> {
    cur_expr: Option<Body<Ans>>,
    past: Trace<Frame>,
    // replay plan: popping from the end yields the next future frame
    future: Vec<Trace<Frame>>,
}

impl<Ans> Default for ResetState<Ans> {
    fn default() -> Self {
        ResetState {
            cur_expr: None,
            past: Trace::default(),
            future: Vec::new(),
        }
    }
}

struct Inner<Ans: 'static> {
    id: u64,
    state: RefCell<ResetState<Ans>>,
    nest: RefCell<Vec<ResetState<Ans>>>,
    done: RefCell<Option<Ans>>,
}

/// Summary of a context's mutable state.
#[derive(Debug, Clone)]
pub struct ControlSnapshot {
    pub past: Vec<Frame>,
    pub future_len: usize,
    pub depth: usize,
    pub has_expr: bool,
}

impl ControlSnapshot {
    /// True between top-level resets.
    pub fn is_idle(&self) -> bool {
        self.past.is_empty() && self.future_len == 0 && self.depth == 0 && !self.has_expr
    }
}

/// Delimited control for answer type `Ans`.
///
/// Cloning yields another handle to the same context. Contexts for different
/// answer types (or different instances of the same one) are independent.
/// A context and its continuations must stay on one thread.
pub struct Control<Ans: 'static> {
    inner: Rc<Inner<Ans>>,
}

impl<Ans> Clone for Control<Ans> {
    fn clone(&self) -> Self {
        Control {
            inner: self.inner.clone(),
        }
    }
}

impl<Ans> Default for Control<Ans> {
    fn default() -> Self {
        Self::new()
    }
}

impl<Ans: 'static> Control<Ans> {
    pub fn new() -> Self {
        Control {
            inner: Rc::new(Inner {
                id: fresh_id(),
                state: RefCell::new(ResetState::default()),
                nest: RefCell::new(Vec::new()),
                done: RefCell::new(None),
            }),
        }
    }

    /// Number of resets (including continuation invocations) running.
    pub fn depth(&self) -> usize {
        self.inner.nest.borrow().len()
    }

    pub fn snapshot(&self) -> ControlSnapshot {
        let st = self.inner.state.borrow();
        ControlSnapshot {
            past: st.past.to_vec(),
            future_len: st.future.len(),
            depth: self.depth(),
            has_expr: st.cur_expr.is_some(),
        }
    }

    /// Delimit `f`. The body may be replayed any number of times, so apart
    /// from `shift`/`reset` on this context it must be pure.
    pub fn reset(&self, f: impl Fn(&Control<Ans>) -> Ans + 'static) -> Ans {
        self.run_trace(Rc::new(f), Trace::default())
    }

    pub fn try_reset(
        &self,
        f: impl Fn(&Control<Ans>) -> Ans + 'static,
    ) -> Result<Ans, ControlError> {
        catch_control(|| self.reset(f))
    }

    /// Run `f` under a new delimiter, obeying `future` frame by frame.
    pub fn run_with_future(
        &self,
        f: impl Fn(&Control<Ans>) -> Ans + 'static,
        future: Vec<Frame>,
    ) -> Ans {
        self.run_trace(Rc::new(f), Trace::from_items(future))
    }

    fn run_trace(&self, f: Body<Ans>, target: Trace<Frame>) -> Ans {
        let inner = &*self.inner;
        let fresh = ResetState {
            cur_expr: Some(f.clone()),
            past: Trace::default(),
            future: target.replay_plan(),
        };
        let saved = mem::replace(&mut *inner.state.borrow_mut(), fresh);
        inner.nest.borrow_mut().push(saved);

        let outcome = panic::catch_unwind(AssertUnwindSafe(|| f(self)));

        let unconsumed = inner.state.borrow().future.len();
        let Some(prev) = inner.nest.borrow_mut().pop() else {
            raise(ControlError::InternalInvariant(
                "reset nesting stack underflow",
            ));
        };
        // drop the finished state outside of the borrow
        let finished = mem::replace(&mut *inner.state.borrow_mut(), prev);
        drop(finished);

        let value = match outcome {
            Ok(v) => v,
            Err(p) if Signal::matches(&*p, inner.id, SignalKind::Done) => {
                match inner.done.borrow_mut().take() {
                    Some(v) => v,
                    None => raise(ControlError::InternalInvariant(
                        "done signal without a result",
                    )),
                }
            }
            Err(p) => panic::resume_unwind(p),
        };
        if unconsumed > 0 {
            raise(ControlError::ReplayDivergence { unconsumed });
        }
        value
    }

    /// Capture the continuation up to the nearest reset on this context and
    /// pass it to `body`; the reset then returns whatever `body` returns.
    #[track_caller]
    pub fn shift<A: Payload>(&self, body: impl FnOnce(Cont<A, Ans>) -> Ans) -> A {
        let inner = &*self.inner;
        if inner.nest.borrow().is_empty() {
            raise(ControlError::MissingReset);
        }
        let mut st = inner.state.borrow_mut();
        let popped = st.future.pop();
        if st.future.is_empty() {
            // a replay may nest thousands deep; do not hold on to spent plans
            st.future = Vec::new();
        }
        if let Some(node) = popped.as_ref() {
            if let Some(Frame::Return(v)) = node.last() {
                let v = v.clone();
                st.past = node.clone();
                drop(st);
                return v.project_or_raise();
            }
        }

        // Enter frame or unknown future: run the body
        let before = st.past.clone();
        st.past = popped.unwrap_or_else(|| before.push(Frame::Enter));
        let Some(expr) = st.cur_expr.clone() else {
            drop(st);
            raise(ControlError::InternalInvariant(
                "active reset without a body",
            ));
        };
        drop(st);

        let ctx = self.clone();
        let k: Cont<A, Ans> = Rc::new(move |v: A| {
            ctx.run_trace(
                expr.clone(),
                before.push(Frame::Return(Universal::embed(v))),
            )
        });
        let result = body(k);
        *inner.done.borrow_mut() = Some(result);
        Signal::raise(inner.id, SignalKind::Done)
    }
}
