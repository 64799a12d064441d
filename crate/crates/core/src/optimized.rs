//! Reflection with a CPS bind, driven by a loop instead of nested replays.
//!
//! Two changes over [`crate::Reflected`]:
//!
//! - The bind is written in continuation-passing style, so applying the
//!   captured continuation only has to *request* a replay: the request
//!   unwinds to a driver loop that runs the body from the top of the stack.
//!   Aggregating results (list append and the like) happens in resumptions
//!   the driver calls afterwards.
//! - The first time a bind uses its continuation it returns the value
//!   directly to the `reflect` call instead of replaying.
//!
//! Together these turn generic list reflection into the path-by-path
//! exploration of [`crate::NondetContext`]. Continuations must not outlive
//! the `reify` that created them, which rules out monads such as state.

use std::cell::{Cell, RefCell};
use std::mem;
use std::panic::{self, AssertUnwindSafe};
use std::rc::{Rc, Weak};

use crate::error::{catch_control, raise, ControlError};
use crate::monad::{ListMonad, MaybeMonad, Monad};
use crate::signal::{fresh_id, Signal, SignalKind};
use crate::trace::Trace;
use crate::universal::{Payload, Universal};

/// A one-shot continuation taking `T` and producing `C`.
pub type Resume<T, C> = Box<dyn FnOnce(T) -> C>;

/// A use of the continuation after the first one.
pub type LaterUse<A, B, C> = Rc<dyn Fn(A, Resume<B, C>) -> C>;

/// A monad whose bind is written in continuation-passing style.
///
/// `cps_bind(m, first, later, done)` must call `first` on the first value
/// extracted from `m` (if any) and `later` on every subsequent one, each with
/// a resumption expecting that value's monadic result. Once every result is
/// in, it hands the combined one to `done`. Each call must be a tail call:
/// whatever `first`, `later` or `done` return is returned unchanged.
pub trait CpsMonad: Monad {
    fn cps_bind<A: Clone + 'static, B: Clone + 'static, C: 'static>(
        m: Self::M<A>,
        first: impl FnOnce(A, Resume<Self::M<B>, C>) -> C,
        later: LaterUse<A, Self::M<B>, C>,
        done: Resume<Self::M<B>, C>,
    ) -> C;
}

impl CpsMonad for ListMonad {
    fn cps_bind<A: Clone + 'static, B: Clone + 'static, C: 'static>(
        m: Vec<A>,
        first: impl FnOnce(A, Resume<Vec<B>, C>) -> C,
        later: LaterUse<A, Vec<B>, C>,
        done: Resume<Vec<B>, C>,
    ) -> C {
        let mut rest = m.into_iter();
        match rest.next() {
            None => done(Vec::new()),
            Some(x) => first(
                x,
                Box::new(move |mut a: Vec<B>| {
                    later_uses(
                        rest,
                        later,
                        Box::new(move |b| {
                            a.extend(b);
                            done(a)
                        }),
                    )
                }),
            ),
        }
    }
}

fn later_uses<A: 'static, B: 'static, C: 'static>(
    mut rest: std::vec::IntoIter<A>,
    later: LaterUse<A, Vec<B>, C>,
    done: Resume<Vec<B>, C>,
) -> C {
    match rest.next() {
        None => done(Vec::new()),
        Some(x) => {
            let again = later.clone();
            later(
                x,
                Box::new(move |mut a: Vec<B>| {
                    later_uses(
                        rest,
                        again,
                        Box::new(move |b| {
                            a.extend(b);
                            done(a)
                        }),
                    )
                }),
            )
        }
    }
}

impl CpsMonad for MaybeMonad {
    fn cps_bind<A: Clone + 'static, B: Clone + 'static, C: 'static>(
        m: Option<A>,
        first: impl FnOnce(A, Resume<Option<B>, C>) -> C,
        _later: LaterUse<A, Option<B>, C>,
        done: Resume<Option<B>, C>,
    ) -> C {
        match m {
            None => done(None),
            Some(x) => first(x, done),
        }
    }
}

/// Counters for one [`OptReflected`] instance.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OptStats {
    /// Executions of reify bodies, replays included.
    pub body_runs: u64,
    /// Replays requested by later uses of a continuation.
    pub invokes: u64,
    /// First uses answered by returning directly.
    pub direct_returns: u64,
}

type Ans<M> = <M as Monad>::M<Universal>;

enum Step<T> {
    Direct,
    Invoke(Trace<Universal>),
    Deliver(T),
}

type Resumption<M> = Resume<Ans<M>, Step<Ans<M>>>;

#[derive(Clone)]
struct Activation {
    id: u64,
    live: Rc<Cell<bool>>,
}

struct OptState<M: CpsMonad> {
    activation: Option<Activation>,
    past: Trace<Universal>,
    future: Vec<Trace<Universal>>,
    conts: Vec<Resumption<M>>,
}

impl<M: CpsMonad> Default for OptState<M> {
    fn default() -> Self {
        OptState {
            activation: None,
            past: Trace::default(),
            future: Vec::new(),
            conts: Vec::new(),
        }
    }
}

struct OptInner<M: CpsMonad> {
    state: RefCell<OptState<M>>,
    nest: RefCell<Vec<OptState<M>>>,
    pending: RefCell<Option<Step<Ans<M>>>>,
    stats: Cell<OptStats>,
}

impl<M: CpsMonad> OptInner<M> {
    fn count(&self, f: impl FnOnce(&mut OptStats)) {
        let mut s = self.stats.get();
        f(&mut s);
        self.stats.set(s);
    }
}

/// Optimized reflection for a [`CpsMonad`].
pub struct OptReflected<M: CpsMonad> {
    inner: Rc<OptInner<M>>,
}

impl<M: CpsMonad> Clone for OptReflected<M> {
    fn clone(&self) -> Self {
        OptReflected {
            inner: self.inner.clone(),
        }
    }
}

impl<M: CpsMonad> Default for OptReflected<M> {
    fn default() -> Self {
        Self::new()
    }
}

impl<M: CpsMonad> OptReflected<M> {
    pub fn new() -> Self {
        OptReflected {
            inner: Rc::new(OptInner {
                state: RefCell::new(OptState::default()),
                nest: RefCell::new(Vec::new()),
                pending: RefCell::new(None),
                stats: Cell::new(OptStats::default()),
            }),
        }
    }

    pub fn stats(&self) -> OptStats {
        self.inner.stats.get()
    }

    pub fn reset_stats(&self) {
        self.inner.stats.set(OptStats::default());
    }

    /// Number of `reify` calls running on this instance.
    pub fn depth(&self) -> usize {
        self.inner.nest.borrow().len()
    }

    /// True when no reify is running and nothing is left over from one.
    pub fn is_idle(&self) -> bool {
        let st = self.inner.state.borrow();
        self.depth() == 0
            && st.activation.is_none()
            && st.past.is_empty()
            && st.future.is_empty()
            && st.conts.is_empty()
            && self.inner.pending.borrow().is_none()
    }

    /// Perform the effect of `m`. Must run inside [`Self::reify`].
    #[track_caller]
    pub fn reflect<A: Payload>(&self, m: M::M<A>) -> A {
        let inner = &*self.inner;
        let mut st = inner.state.borrow_mut();
        let Some(act) = st.activation.clone() else {
            drop(st);
            raise(ControlError::MissingReset);
        };
        if let Some(node) = st.future.pop() {
            if st.future.is_empty() {
                st.future = Vec::new();
            }
            let Some(v) = node.last().cloned() else {
                drop(st);
                raise(ControlError::InternalInvariant("empty replay node"));
            };
            st.past = node;
            drop(st);
            return v.project_or_raise();
        }
        let prefix = st.past.clone();
        drop(st);

        let direct: RefCell<Option<A>> = RefCell::new(None);
        let first = |a: A, resume: Resumption<M>| {
            let mut st = inner.state.borrow_mut();
            st.past = st.past.push(Universal::embed(a.clone()));
            st.conts.push(resume);
            drop(st);
            inner.count(|s| s.direct_returns += 1);
            *direct.borrow_mut() = Some(a);
            Step::Direct
        };

        let owner: Weak<OptInner<M>> = Rc::downgrade(&self.inner);
        let later_act = act.clone();
        let later: LaterUse<A, Ans<M>, Step<Ans<M>>> = Rc::new(move |a: A, resume| {
            let escaped = || raise(ControlError::EscapedContinuation);
            let Some(inner) = owner.upgrade() else {
                escaped()
            };
            if !later_act.live.get() {
                escaped();
            }
            let mut st = inner.state.borrow_mut();
            if st.activation.as_ref().map(|x| x.id) != Some(later_act.id) {
                drop(st);
                escaped();
            }
            st.conts.push(resume);
            Step::Invoke(prefix.push(Universal::embed(a)))
        });

        let step = M::cps_bind(m, first, later, Box::new(Step::Deliver));
        match (step, direct.into_inner()) {
            (Step::Direct, Some(a)) => a,
            (Step::Direct, None) => raise(ControlError::CpsContract(
                "direct return without a first use",
            )),
            (_, Some(_)) => raise(ControlError::CpsContract("first use was not a tail call")),
            (step, None) => {
                *inner.pending.borrow_mut() = Some(step);
                Signal::raise(act.id, SignalKind::Step)
            }
        }
    }

    /// The monadic value denoting `t`'s effects. `t` may be run several
    /// times and must be pure apart from `reflect` on this instance.
    pub fn reify<A: Payload>(&self, t: impl Fn(&Self) -> A) -> M::M<A> {
        let raw = self.drive(&|r: &Self| Universal::embed(t(r)));
        M::bind(raw, |u: Universal| M::pure(u.project_or_raise::<A>()))
    }

    pub fn try_reify<A: Payload>(&self, t: impl Fn(&Self) -> A) -> Result<M::M<A>, ControlError> {
        catch_control(|| self.reify(t))
    }

    fn drive(&self, body: &dyn Fn(&Self) -> Universal) -> Ans<M> {
        let act = Activation {
            id: fresh_id(),
            live: Rc::new(Cell::new(true)),
        };
        let fresh = OptState {
            activation: Some(act.clone()),
            ..OptState::default()
        };
        let saved = mem::replace(&mut *self.inner.state.borrow_mut(), fresh);
        self.inner.nest.borrow_mut().push(saved);
        let _restore = Restore {
            inner: &self.inner,
            live: act.live.clone(),
        };

        let mut step = self.run_body(body, &act, Trace::default());
        loop {
            step = match step {
                Step::Invoke(target) => {
                    self.inner.count(|s| s.invokes += 1);
                    self.run_body(body, &act, target)
                }
                Step::Deliver(v) => {
                    let next = self.inner.state.borrow_mut().conts.pop();
                    match next {
                        Some(resume) => resume(v),
                        None => return v,
                    }
                }
                Step::Direct => raise(ControlError::CpsContract(
                    "direct return outside of its reflect",
                )),
            };
        }
    }

    fn run_body(
        &self,
        body: &dyn Fn(&Self) -> Universal,
        act: &Activation,
        target: Trace<Universal>,
    ) -> Step<Ans<M>> {
        {
            let mut st = self.inner.state.borrow_mut();
            st.past = Trace::default();
            st.future = target.replay_plan();
        }
        self.inner.count(|s| s.body_runs += 1);
        match panic::catch_unwind(AssertUnwindSafe(|| body(self))) {
            Ok(u) => {
                let unconsumed = self.inner.state.borrow().future.len();
                if unconsumed > 0 {
                    raise(ControlError::ReplayDivergence { unconsumed });
                }
                Step::Deliver(M::pure(u))
            }
            Err(p) if Signal::matches(&*p, act.id, SignalKind::Step) => {
                match self.inner.pending.borrow_mut().take() {
                    Some(step) => step,
                    None => raise(ControlError::InternalInvariant(
                        "step signal without a step",
                    )),
                }
            }
            Err(p) => panic::resume_unwind(p),
        }
    }
}

struct Restore<'a, M: CpsMonad> {
    inner: &'a OptInner<M>,
    live: Rc<Cell<bool>>,
}

impl<M: CpsMonad> Drop for Restore<'_, M> {
    fn drop(&mut self) {
        self.live.set(false);
        self.inner.pending.borrow_mut().take();
        if let Some(saved) = self.inner.nest.borrow_mut().pop() {
            let finished = mem::replace(&mut *self.inner.state.borrow_mut(), saved);
            drop(finished);
        }
    }
}

impl OptReflected<ListMonad> {
    pub fn choose<A: Payload>(&self, xs: Vec<A>) -> A {
        self.reflect(xs)
    }

    pub fn fail<A: Payload>(&self) -> A {
        self.reflect(Vec::new())
    }
}

impl OptReflected<MaybeMonad> {
    pub fn fail<A: Payload>(&self) -> A {
        self.reflect(None)
    }

    pub fn require<A: Payload>(&self, value: Option<A>) -> A {
        self.reflect(value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_list_bind(xs: Vec<i64>) -> Vec<i64> {
        let use_it = |x: i64, d: Resume<Vec<i64>, Vec<i64>>| d(vec![10 * x]);
        ListMonad::cps_bind(xs, use_it, Rc::new(use_it), Box::new(|v| v))
    }

    #[test]
    fn cps_list_bind_unfolds() {
        assert_eq!(run_list_bind(vec![]), Vec::<i64>::new());
        assert_eq!(run_list_bind(vec![2, 3]), vec![20, 30]);
    }

    #[test]
    fn single_element_never_uses_later() {
        let later: LaterUse<i64, Vec<i64>, i64> = Rc::new(|_, _| panic!("later use"));
        let r = ListMonad::cps_bind(vec![1i64], |x, _| x + 100, later, Box::new(|_| 0));
        assert_eq!(r, 101);
    }

    #[test]
    fn list_results_match_generic_order() {
        let r = OptReflected::<ListMonad>::new();
        assert_eq!(
            r.reify(|r| r.reflect(vec![2, 3, 4]) * r.reflect(vec![5, 6])),
            vec![10, 12, 15, 18, 20, 24]
        );
        assert!(r.is_idle());
    }

    #[test]
    fn maybe_short_circuits() {
        let r = OptReflected::<MaybeMonad>::new();
        assert_eq!(r.reify(|r| 1 + r.reflect(None::<i64>)), None);
        assert_eq!(r.reify(|r| 1 + r.reflect(Some(2i64))), Some(3));
        assert_eq!(r.stats().body_runs, 2);
        assert_eq!(r.stats().invokes, 0);
    }

    #[test]
    fn reflect_outside_reify() {
        let r = OptReflected::<ListMonad>::new();
        let e = catch_control(|| r.reflect(vec![1]));
        assert_eq!(e, Err(ControlError::MissingReset));
    }

    // Behaves like maybe, but leaks a way to call `later` after the fact.
    struct Leaky;

    thread_local! {
        static LEAKED: RefCell<Option<Box<dyn Fn()>>> = const { RefCell::new(None) };
    }

    impl Monad for Leaky {
        type M<A: Clone + 'static> = Option<A>;

        fn pure<A: Clone + 'static>(a: A) -> Option<A> {
            Some(a)
        }

        fn bind<A: Clone + 'static, B: Clone + 'static>(
            m: Option<A>,
            f: impl Fn(A) -> Option<B> + 'static,
        ) -> Option<B> {
            m.and_then(f)
        }
    }

    impl CpsMonad for Leaky {
        fn cps_bind<A: Clone + 'static, B: Clone + 'static, C: 'static>(
            m: Option<A>,
            first: impl FnOnce(A, Resume<Option<B>, C>) -> C,
            later: LaterUse<A, Option<B>, C>,
            done: Resume<Option<B>, C>,
        ) -> C {
            match m {
                None => done(None),
                Some(x) => {
                    let leaked = x.clone();
                    LEAKED.with(|l| {
                        *l.borrow_mut() = Some(Box::new(move || {
                            later(leaked.clone(), Box::new(|_| unreachable!()));
                        }))
                    });
                    first(x, done)
                }
            }
        }
    }

    #[test]
    fn escaped_later_use_is_rejected() {
        let r = OptReflected::<Leaky>::new();
        assert_eq!(r.reify(|r| r.reflect(Some(4i64)) + 1), Some(5));
        let call = LEAKED.with(|l| l.borrow_mut().take()).unwrap();
        assert_eq!(catch_control(call), Err(ControlError::EscapedContinuation));
        assert!(r.is_idle());
    }
}
