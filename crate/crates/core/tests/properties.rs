use std::cell::RefCell;
use std::panic::{self, AssertUnwindSafe};
use std::rc::Rc;

use proptest::prelude::*;
use thermo::{
    catch_control, Cont, Control, Frame, ListMonad, MaybeMonad, Monad, Nondet, NondetContext,
    OptReflected, Reflected, State, StateMonad, Universal,
};

const LAW_CASES: u32 = 300;

// Kleisli arrows drawn from small parameter spaces.

fn list_arrow((mul, len): (i64, usize)) -> impl Fn(i64) -> Vec<i64> + Clone {
    move |x| (0..len as i64).map(|k| x * mul + k).collect()
}

fn maybe_arrow((div, add): (i64, i64)) -> impl Fn(i64) -> Option<i64> + Clone {
    move |x| (x % div != 0).then_some(x + add)
}

fn state_arrow((mul, inc): (i64, i64)) -> impl Fn(i64) -> State<i64, i64> + Clone {
    move |x| Rc::new(move |s| (x + s * mul, s + inc))
}

fn state_value((a, b): (i64, i64)) -> State<i64, i64> {
    Rc::new(move |s| (s * a, s + b))
}

fn same_state(m: &State<i64, i64>, n: &State<i64, i64>) -> bool {
    (-3..=3).all(|s| m(s) == n(s))
}

fn small() -> impl Strategy<Value = i64> {
    -20i64..20
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(LAW_CASES))]

    #[test]
    fn list_left_identity(a in small(), f in (small(), 0usize..4)) {
        let f = list_arrow(f);
        prop_assert_eq!(ListMonad::bind(ListMonad::pure(a), f.clone()), f(a));
    }

    #[test]
    fn list_right_identity(m in prop::collection::vec(small(), 0..6)) {
        prop_assert_eq!(ListMonad::bind(m.clone(), ListMonad::pure), m);
    }

    #[test]
    fn list_associativity(
        m in prop::collection::vec(small(), 0..5),
        f in (small(), 0usize..4),
        g in (small(), 0usize..4),
    ) {
        let (f, g) = (list_arrow(f), list_arrow(g));
        let lhs = ListMonad::bind(ListMonad::bind(m.clone(), f.clone()), g.clone());
        let rhs = ListMonad::bind(m, move |x| ListMonad::bind(f(x), g.clone()));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn maybe_left_identity(a in small(), f in (1i64..5, small())) {
        let f = maybe_arrow(f);
        prop_assert_eq!(MaybeMonad::bind(MaybeMonad::pure(a), f.clone()), f(a));
    }

    #[test]
    fn maybe_right_identity(m in prop::option::of(small())) {
        prop_assert_eq!(MaybeMonad::bind(m, MaybeMonad::pure), m);
    }

    #[test]
    fn maybe_associativity(
        m in prop::option::of(small()),
        f in (1i64..5, small()),
        g in (1i64..5, small()),
    ) {
        let (f, g) = (maybe_arrow(f), maybe_arrow(g));
        let lhs = MaybeMonad::bind(MaybeMonad::bind(m, f.clone()), g.clone());
        let rhs = MaybeMonad::bind(m, move |x| MaybeMonad::bind(f(x), g.clone()));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn state_left_identity(a in small(), f in (small(), small())) {
        type S = StateMonad<i64>;
        let f = state_arrow(f);
        prop_assert!(same_state(&S::bind(S::pure(a), f.clone()), &f(a)));
    }

    #[test]
    fn state_right_identity(m in (small(), small())) {
        type S = StateMonad<i64>;
        let m = state_value(m);
        prop_assert!(same_state(&S::bind(m.clone(), S::pure), &m));
    }

    #[test]
    fn state_associativity(m in (small(), small()), f in (small(), small()), g in (small(), small())) {
        type S = StateMonad<i64>;
        let (m, f, g) = (state_value(m), state_arrow(f), state_arrow(g));
        let lhs = S::bind(S::bind(m.clone(), f.clone()), g.clone());
        let rhs = S::bind(m, move |x| S::bind(f(x), g.clone()));
        prop_assert!(same_state(&lhs, &rhs));
    }
}

// ---- nondeterminism against brute force ----

fn cartesian(lists: &[Vec<i64>]) -> Vec<Vec<i64>> {
    lists.iter().fold(vec![vec![]], |acc, xs| {
        acc.into_iter()
            .flat_map(|prefix| {
                xs.iter().map(move |&x| {
                    let mut p = prefix.clone();
                    p.push(x);
                    p
                })
            })
            .collect()
    })
}

// number of paths when an empty list ends a path early
fn leaves(lists: &[Vec<i64>]) -> usize {
    let mut total = 0;
    let mut width = 1;
    for xs in lists {
        if xs.is_empty() {
            return total + width;
        }
        width *= xs.len();
    }
    total += width;
    total
}

proptest! {
    #[test]
    fn paths_in_lexicographic_order(
        lists in prop::collection::vec(prop::collection::vec(0i64..100, 0..4), 0..5)
    ) {
        let nd = NondetContext::new();
        let runs = std::cell::Cell::new(0);
        let got = nd.with_nondeterminism(|nd| {
            runs.set(runs.get() + 1);
            lists.iter().map(|xs| nd.choose(xs)).collect::<Vec<_>>()
        });
        prop_assert_eq!(got, cartesian(&lists));
        prop_assert_eq!(runs.get(), leaves(&lists));
        prop_assert!(nd.snapshot().past.is_empty() && nd.snapshot().future.is_empty());
    }

    #[test]
    fn single_shift_equation(a in small(), b in small(), c in small()) {
        // reset (a + shift (k => k b * c))  ==  let k x = a + x in k b * c
        let ctl = Control::<i64>::new();
        let lhs = ctl.reset(move |ctl| a + ctl.shift(|k: Cont<i64, i64>| k(b) * c));
        let k = |x| a + x;
        prop_assert_eq!(lhs, k(b) * c);
    }

    #[test]
    fn double_application(a in small(), b in small(), c in small()) {
        let ctl = Control::<i64>::new();
        let lhs = ctl.reset(move |ctl| a * ctl.shift(|k: Cont<i64, i64>| k(b) + k(c)));
        prop_assert_eq!(lhs, a * b + a * c);
    }
}

#[test]
fn type_tags_survive_replays() {
    let tags = Rc::new(RefCell::new(Vec::new()));
    let log = tags.clone();
    let r = Reflected::<ListMonad>::new();
    let out = r.reify(move |r| {
        log.borrow_mut().push(Universal::embed(0i64).tag());
        r.reflect(vec![1i64, 2, 3]) + r.reflect(vec![10i64, 20])
    });
    assert_eq!(out, vec![11, 21, 12, 22, 13, 23]);
    let tags = tags.borrow();
    assert!(tags.len() > 1);
    assert!(tags.iter().all(|t| *t == tags[0]));
}

// ---- state restoration under random programs, including failures ----

#[derive(Debug, Clone)]
enum Op {
    Choose(Vec<i64>),
    PanicOn(i64),
    Fail,
}

fn op() -> impl Strategy<Value = Op> {
    prop_oneof![
        4 => prop::collection::vec(0i64..5, 0..4).prop_map(Op::Choose),
        1 => (0i64..8).prop_map(Op::PanicOn),
        1 => Just(Op::Fail),
    ]
}

fn interpret<N: Nondet>(n: &N, ops: &[Op]) -> i64 {
    let mut acc = 0;
    for op in ops {
        match op {
            Op::Choose(xs) => acc += n.choose(xs.clone()),
            Op::PanicOn(v) if acc == *v => panic!("user error at {v}"),
            Op::PanicOn(_) => {}
            Op::Fail if acc % 3 == 0 => n.fail::<()>(),
            Op::Fail => {}
        }
    }
    acc
}

fn interpret_shift(c: &Control<i64>, ops: &[Op]) -> i64 {
    let mut acc = 0;
    for op in ops {
        match op {
            Op::Choose(xs) => {
                let xs = xs.clone();
                acc += c.shift(move |k: Cont<i64, i64>| xs.iter().map(|&x| k(x)).sum())
            }
            Op::PanicOn(v) if acc == *v => panic!("user error at {v}"),
            Op::PanicOn(_) => {}
            Op::Fail if acc % 3 == 0 => {
                // feed back a value of the wrong type
                acc += c.run_with_future(|c| c.shift::<i64>(|k| k(0)), vec![Frame::ret(true)])
            }
            Op::Fail => {}
        }
    }
    acc
}

fn quietly<T>(f: impl FnOnce() -> T) -> Option<T> {
    panic::catch_unwind(AssertUnwindSafe(|| catch_control(f).ok()))
        .ok()
        .flatten()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn contexts_are_restored(ops in prop::collection::vec(op(), 0..6), nest in any::<bool>()) {
        let nd = NondetContext::new();
        let ctl = Control::<i64>::new();
        let gen = Reflected::<ListMonad>::new();
        let opt = OptReflected::<ListMonad>::new();
        let st = Reflected::<StateMonad<i64>>::new();
        let ops = Rc::new(ops);

        let direct = quietly(|| {
            nd.with_nondeterminism(|n| {
                let base = interpret(n, &ops);
                if nest {
                    base + n.with_nondeterminism(|n| interpret(n, &ops)).len() as i64
                } else {
                    base
                }
            })
        });
        let o = ops.clone();
        let generic = quietly(|| gen.reify(move |g| interpret(g, &o)));
        let optimized = quietly(|| opt.reify(|o| interpret(o, &ops)));
        let o = ops.clone();
        quietly(|| ctl.reset(move |c| interpret_shift(c, &o)));
        let o = ops.clone();
        quietly(|| {
            st.reify(move |s| {
                let v = interpret_shift_state(s, &o);
                s.put(v);
                v
            })(1)
        });

        if !nest {
            // engines that finished agree
            if let (Some(d), Some(g)) = (&direct, &generic) {
                prop_assert_eq!(d, g);
            }
            if let (Some(d), Some(o)) = (&direct, &optimized) {
                prop_assert_eq!(d, o);
            }
        }
        prop_assert_eq!(nd.depth(), 0);
        prop_assert!(nd.snapshot().past.is_empty() && nd.snapshot().future.is_empty());
        prop_assert!(ctl.snapshot().is_idle());
        prop_assert!(gen.control().snapshot().is_idle());
        prop_assert!(opt.is_idle());
        prop_assert!(st.control().snapshot().is_idle());
    }
}

fn interpret_shift_state(s: &Reflected<StateMonad<i64>>, ops: &[Op]) -> i64 {
    let mut acc = 0;
    for op in ops {
        match op {
            Op::Choose(xs) => {
                let cur = s.get();
                acc += xs.iter().sum::<i64>() + cur;
                s.put(cur + 1);
            }
            Op::PanicOn(v) if acc == *v => panic!("user error at {v}"),
            _ => {}
        }
    }
    acc
}
