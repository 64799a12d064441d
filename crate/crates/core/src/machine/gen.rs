use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Atom, Term};

const NAMES: [&str; 3] = ["x", "y", "z"];

/// Number of nodes, counting a `choose` and its arguments as one.
pub fn term_size(t: &Term) -> usize {
    match t {
        Term::Var(_) | Term::Num(_) | Term::Choose(..) => 1,
        Term::Succ(t) => 1 + term_size(t),
        Term::Let(_, t, u) => 1 + term_size(t) + term_size(u),
    }
}

/// True when every variable is bound by an enclosing `let`.
pub fn is_closed(t: &Term) -> bool {
    fn go(t: &Term, scope: &mut Vec<String>) -> bool {
        let bound = |a: &Atom, scope: &[String]| match a {
            Atom::Var(x) => scope.contains(x),
            Atom::Num(_) => true,
        };
        match t {
            Term::Var(x) => scope.contains(x),
            Term::Num(_) => true,
            Term::Succ(t) => go(t, scope),
            Term::Let(x, t, u) => {
                if !go(t, scope) {
                    return false;
                }
                scope.push(x.clone());
                let ok = go(u, scope);
                scope.pop();
                ok
            }
            Term::Choose(a, b) => bound(a, scope) && bound(b, scope),
        }
    }
    go(t, &mut Vec::new())
}

/// Deterministic closed term of size at most `max_size` (at least 1).
pub fn gen_term(seed: u64, max_size: usize) -> Term {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let size = rng.random_range(1..=max_size.max(1));
    gen(&mut rng, size, &mut Vec::new())
}

fn gen(rng: &mut ChaCha8Rng, size: usize, scope: &mut Vec<&'static str>) -> Term {
    if size == 1 {
        return leaf(rng, scope);
    }
    if size == 2 || rng.random_bool(0.3) {
        return Term::succ(gen(rng, size - 1, scope));
    }
    let bound_size = rng.random_range(1..size - 1);
    let x = *NAMES.choose(rng).expect("names");
    let t = gen(rng, bound_size, scope);
    scope.push(x);
    let u = gen(rng, size - 1 - bound_size, scope);
    scope.pop();
    Term::let_in(x, t, u)
}

fn leaf(rng: &mut ChaCha8Rng, scope: &[&'static str]) -> Term {
    if scope.is_empty() {
        return Term::Num(rng.random_range(0..10));
    }
    match rng.random_range(0..4) {
        0 => Term::Num(rng.random_range(0..10)),
        1 => Term::var(scope.choose(rng).expect("scope")),
        _ => Term::choose(
            scope.choose(rng).expect("scope"),
            scope.choose(rng).expect("scope"),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_one_is_a_numeral() {
        assert!(matches!(gen_term(0, 1), Term::Num(_)));
    }

    #[test]
    fn deterministic_closed_and_bounded() {
        for seed in 0..1000 {
            let t = gen_term(seed, 12);
            assert_eq!(t, gen_term(seed, 12));
            assert!(is_closed(&t), "{t}");
            assert!(term_size(&t) <= 12);
        }
    }
}
