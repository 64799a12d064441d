//! Printed REPL results, reproduced exactly.

use std::time::{Duration, Instant};

use thermo::{Cont, Control, ListMonad, NondetContext, Reflected, StateMonad};

#[test]
fn nondeterminism_outputs() {
    let nd = NondetContext::new();
    assert_eq!(
        nd.with_nondeterminism2(|nd| 3 * nd.choose2(5, 6)),
        vec![15, 18]
    );
    assert_eq!(
        nd.with_nondeterminism(|nd| 2 * nd.choose(&[1, 2, 3])),
        vec![2, 4, 6]
    );
    assert_eq!(
        nd.with_nondeterminism(|nd| 2 + nd.choose(&[1, 2, 3]) * nd.choose(&[1, 10, 100])),
        vec![3, 12, 102, 4, 22, 202, 5, 32, 302]
    );
    assert_eq!(
        nd.with_nondeterminism(|nd| 2 * nd.choose::<i32>(&[])),
        Vec::<i32>::new()
    );
    assert_eq!(
        nd.with_nondeterminism(|nd| {
            if nd.choose(&[true, false]) {
                nd.choose(&[1, 2])
            } else {
                nd.choose(&[3, 4])
            }
        }),
        vec![1, 2, 3, 4]
    );
}

#[test]
fn nested_with_nondeterminism() {
    let nd = NondetContext::new();
    let r = nd.with_nondeterminism(|nd| {
        if nd.choose(&[true, false]) {
            nd.with_nondeterminism(|nd| nd.choose(&[1, 2]))
        } else {
            vec![]
        }
    });
    assert_eq!(r, vec![vec![1, 2], vec![]]);
}

#[test]
fn shift_reset_outputs() {
    let c = Control::<i64>::new();
    assert_eq!(c.reset(|c| 2 * c.shift(|k| 1 + k(5))), 11);
    assert_eq!(
        c.reset(|c| 1 + c.shift(|k: Cont<i64, i64>| k(1) * k(2) * k(3))),
        24
    );
    assert_eq!(
        1 + c.reset(|c| 2 + c.shift(|k| 3 * c.shift(|l| l(k(10))))),
        37
    );
    assert_eq!(
        c.reset(|c| c.shift(|k| 1 + k(2)) * c.shift(|k| 1 + k(3))),
        8
    );

    let l = Control::<Vec<i64>>::new();
    assert_eq!(
        l.reset(|l| {
            let mut xs = vec![1, 2];
            xs.extend(l.shift::<Vec<i64>>(|_| vec![3, 4]));
            xs
        }),
        vec![3, 4]
    );
    assert_eq!(
        l.reset(|l| vec![3 * l.shift(|k: Cont<i64, Vec<i64>>| vec![k(2)[0], k(3)[0], k(4)[0]])]),
        vec![6, 9, 12]
    );
}

#[test]
fn reflection_outputs() {
    let n = Reflected::<ListMonad>::new();
    assert_eq!(
        n.reify(|n| n.reflect(vec![2, 3, 4]) * n.reflect(vec![5, 6])),
        vec![10, 12, 15, 18, 20, 24]
    );
    assert_eq!(
        n.reify(|n| {
            let x = n.choose(vec![2, 3, 4]) * n.choose(vec![5, 7]);
            if x >= 20 {
                x
            } else {
                n.fail()
            }
        }),
        vec![21, 20, 28]
    );

    let s = Reflected::<StateMonad<i64>>::new();
    let m = s.reify(|s| {
        s.put(5);
        s.tick();
        2 * s.get()
    });
    assert_eq!(m(0).0, 12);
    assert_eq!(s.reify(|s| 3 * s.get())(2), (6, 2));
}

#[test]
fn whole_suite_is_fast() {
    let start = Instant::now();
    nondeterminism_outputs();
    nested_with_nondeterminism();
    shift_reset_outputs();
    reflection_outputs();
    assert!(start.elapsed() < Duration::from_secs(1));
}
