//! Monads as plain values plus `pure`/`bind`.

use std::marker::PhantomData;
use std::rc::Rc;

/// A monad over `Clone + 'static` values.
///
/// Implementors are type-level markers; the monadic values are `Self::M<A>`.
pub trait Monad: 'static {
    type M<A: Clone + 'static>: Clone + 'static;

    fn pure<A: Clone + 'static>(a: A) -> Self::M<A>;

    fn bind<A: Clone + 'static, B: Clone + 'static>(
        m: Self::M<A>,
        f: impl Fn(A) -> Self::M<B> + 'static,
    ) -> Self::M<B>;
}

/// Nondeterminism: every result, in order.
#[derive(Debug, Clone, Copy, Default)]
pub struct ListMonad;

impl Monad for ListMonad {
    type M<A: Clone + 'static> = Vec<A>;

    fn pure<A: Clone + 'static>(a: A) -> Vec<A> {
        vec![a]
    }

    fn bind<A: Clone + 'static, B: Clone + 'static>(
        m: Vec<A>,
        f: impl Fn(A) -> Vec<B> + 'static,
    ) -> Vec<B> {
        m.into_iter().flat_map(f).collect()
    }
}

/// Failure.
#[derive(Debug, Clone, Copy, Default)]
pub struct MaybeMonad;

impl Monad for MaybeMonad {
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

/// A stateful computation: initial state to result and final state.
pub type State<S, A> = Rc<dyn Fn(S) -> (A, S)>;

/// Mutable state of type `S`, threaded by hand.
pub struct StateMonad<S>(PhantomData<fn() -> S>);

impl<S: Clone + 'static> Monad for StateMonad<S> {
    type M<A: Clone + 'static> = State<S, A>;

    fn pure<A: Clone + 'static>(a: A) -> State<S, A> {
        Rc::new(move |s| (a.clone(), s))
    }

    fn bind<A: Clone + 'static, B: Clone + 'static>(
        m: State<S, A>,
        f: impl Fn(A) -> State<S, B> + 'static,
    ) -> State<S, B> {
        Rc::new(move |s| {
            let (a, s) = m(s);
            f(a)(s)
        })
    }
}

impl<S: Clone + 'static> StateMonad<S> {
    pub fn get() -> State<S, S> {
        Rc::new(|s: S| (s.clone(), s))
    }

    pub fn put(s: S) -> State<S, ()> {
        Rc::new(move |_| ((), s.clone()))
    }
}
