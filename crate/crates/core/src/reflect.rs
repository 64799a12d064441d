//! Monadic reflection on top of [`Control`].
//!
//! `reflect` turns a monadic value into a direct-style effect; `reify` turns
//! a direct-style computation back into a monadic value. The answer type of
//! the underlying reset is `M<Universal>`, so a single context serves
//! reflections at every value type.

use std::ops::Add;
use std::rc::Rc;

use crate::control::Control;
use crate::error::{catch_control, ControlError};
use crate::monad::{ListMonad, MaybeMonad, Monad, StateMonad};
use crate::universal::{Payload, Universal};

/// Reflection for monad `M`, with its own control context.
pub struct Reflected<M: Monad> {
    ctx: Control<M::M<Universal>>,
}

impl<M: Monad> Clone for Reflected<M> {
    fn clone(&self) -> Self {
        Reflected {
            ctx: self.ctx.clone(),
        }
    }
}

impl<M: Monad> Default for Reflected<M> {
    fn default() -> Self {
        Self::new()
    }
}

impl<M: Monad> Reflected<M> {
    pub fn new() -> Self {
        Reflected {
            ctx: Control::new(),
        }
    }

    /// The context used for this instance's resets.
    pub fn control(&self) -> &Control<M::M<Universal>> {
        &self.ctx
    }

    /// Perform the effect of `m` and continue with its value(s).
    #[track_caller]
    pub fn reflect<A: Payload>(&self, m: M::M<A>) -> A {
        self.ctx.shift(move |k| M::bind(m, move |a| k(a)))
    }

    /// The monadic value denoting `t`'s effects.
    ///
    /// `t` is replayed, so it must be pure apart from `reflect` on this
    /// instance. Nothing runs until the monadic value is demanded, which for
    /// eager monads is immediately.
    pub fn reify<A: Payload>(&self, t: impl Fn(&Self) -> A + 'static) -> M::M<A> {
        let me = self.clone();
        let t = Rc::new(t);
        let raw = M::bind(M::pure(()), move |()| {
            let (me, t) = (me.clone(), t.clone());
            me.ctx
                .clone()
                .reset(move |_| M::pure(Universal::embed(t(&me))))
        });
        M::bind(raw, |u: Universal| M::pure(u.project_or_raise::<A>()))
    }

    /// [`Self::reify`], reporting misuse as an error. For lazy monads the
    /// error can only surface once the result is run.
    pub fn try_reify<A: Payload>(
        &self,
        t: impl Fn(&Self) -> A + 'static,
    ) -> Result<M::M<A>, ControlError> {
        catch_control(|| self.reify(t))
    }
}

impl Reflected<ListMonad> {
    pub fn choose<A: Payload>(&self, xs: Vec<A>) -> A {
        self.reflect(xs)
    }

    pub fn fail<A: Payload>(&self) -> A {
        self.reflect(Vec::new())
    }
}

impl Reflected<MaybeMonad> {
    pub fn fail<A: Payload>(&self) -> A {
        self.reflect(None)
    }

    pub fn require<A: Payload>(&self, value: Option<A>) -> A {
        self.reflect(value)
    }
}

impl<S: Payload> Reflected<StateMonad<S>> {
    pub fn get(&self) -> S {
        self.reflect(StateMonad::get())
    }

    pub fn put(&self, s: S) {
        self.reflect(StateMonad::put(s))
    }
}

impl<S: Payload + Add<Output = S> + From<u8>> Reflected<StateMonad<S>> {
    /// Increment the state.
    pub fn tick(&self) {
        let s = self.get();
        self.put(s + S::from(1));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::cell::Cell;

    #[test]
    fn list_reflection() {
        let r = Reflected::<ListMonad>::new();
        assert_eq!(
            r.reify(|r| r.reflect(vec![2, 3, 4]) * r.reflect(vec![5, 6])),
            vec![10, 12, 15, 18, 20, 24]
        );
        assert_eq!(r.reify(|_| 5), vec![5]);
        assert!(r.control().snapshot().is_idle());
    }

    #[test]
    fn maybe_reflection() {
        let r = Reflected::<MaybeMonad>::new();
        assert_eq!(r.reify(|r| 1 + r.reflect(None::<i32>)), None);
        assert_eq!(r.reify(|r| 1 + r.require(Some(2))), Some(3));
    }

    #[test]
    fn state_reflection() {
        let r = Reflected::<StateMonad<i64>>::new();
        let m = r.reify(|r| {
            r.put(5);
            r.tick();
            2 * r.get()
        });
        assert_eq!(m(0).0, 12);
        let m = r.reify(|r| 3 * r.get());
        assert_eq!(m(2), (6, 2));
    }

    #[test]
    fn state_reify_is_lazy() {
        thread_local!(static RUNS: Cell<u32> = const { Cell::new(0) });
        let r = Reflected::<StateMonad<i64>>::new();
        let m = r.reify(|r| {
            RUNS.with(|c| c.set(c.get() + 1));
            r.get() + 1
        });
        assert_eq!(RUNS.with(Cell::get), 0);
        assert_eq!(m(4), (5, 4));
        assert!(RUNS.with(Cell::get) > 0);
    }
}
