//! Two abstract machines for a tiny language with binary choice.
//!
//! The continuation machine keeps a soup of suspended threads and so needs
//! to copy continuations. The history machine replaces the soup with a past
//! and a future of choices and restarts the whole program after each result,
//! which is what [`crate::NondetContext`] does. Both produce results with the
//! last one at the head; [`differential_check`] compares them.

mod cont;
mod gen;
mod hist;
mod syntax;

use std::fmt;
use std::rc::Rc;

use thiserror::Error;

pub use cont::{run_cont, step_cont, ContConfig};
pub use gen::{gen_term, is_closed, term_size};
pub use hist::{nexthist, run_hist, run_hist_counted, step_hist, Choice, HistConfig};
pub use syntax::{format_results, parse_results, parse_term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MachineError {
    #[error("stuck term: {0}")]
    StuckTerm(String),
    #[error("numeral overflow")]
    Overflow,
    #[error("parse error at token {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// Argument of `choose`: a variable, or the numeral substituted for it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Atom {
    Var(String),
    Num(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Num(u64),
    Succ(Box<Term>),
    Let(String, Box<Term>, Box<Term>),
    Choose(Atom, Atom),
}

impl Term {
    pub fn var(x: &str) -> Term {
        Term::Var(x.to_string())
    }

    pub fn succ(t: Term) -> Term {
        Term::Succ(Box::new(t))
    }

    pub fn let_in(x: &str, t: Term, u: Term) -> Term {
        Term::Let(x.to_string(), Box::new(t), Box::new(u))
    }

    pub fn choose(x: &str, y: &str) -> Term {
        Term::Choose(Atom::Var(x.to_string()), Atom::Var(y.to_string()))
    }

    /// `self[x <- n]`.
    pub fn subst(&self, x: &str, n: u64) -> Term {
        let atom = |a: &Atom| match a {
            Atom::Var(y) if y == x => Atom::Num(n),
            other => other.clone(),
        };
        match self {
            Term::Var(y) if y == x => Term::Num(n),
            Term::Var(_) | Term::Num(_) => self.clone(),
            Term::Succ(t) => Term::succ(t.subst(x, n)),
            Term::Let(y, t, u) => {
                let body = if y == x { (**u).clone() } else { u.subst(x, n) };
                Term::Let(y.clone(), Box::new(t.subst(x, n)), Box::new(body))
            }
            Term::Choose(a, b) => Term::Choose(atom(a), atom(b)),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Var(x) => f.write_str(x),
            Atom::Num(n) => write!(f, "{n}"),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) => write!(f, "(var {x})"),
            Term::Num(n) => write!(f, "(num {n})"),
            Term::Succ(t) => write!(f, "(succ {t})"),
            Term::Let(x, t, u) => write!(f, "(let {x} {t} {u})"),
            Term::Choose(a, b) => write!(f, "(choose {a} {b})"),
        }
    }
}

/// Machine continuation. Shared, since the continuation machine copies
/// continuations into its soup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Kont {
    Halt,
    Succ(Rc<Kont>),
    /// `let x = [] in body`, then continue with the inner continuation.
    Let(String, Rc<Kont>, Term),
}

/// Outcome of a single machine step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step<C> {
    Next(C),
    Final(Vec<u64>),
}

/// Rules shared by both machines: successor and let.
pub(crate) enum Pure {
    Moved(Term, Rc<Kont>),
    Value(u64),
    Choice(u64, u64),
}

pub(crate) fn pure_step(term: &Term, cont: &Rc<Kont>) -> Result<Pure, MachineError> {
    Ok(match term {
        Term::Succ(t) => Pure::Moved((**t).clone(), Rc::new(Kont::Succ(cont.clone()))),
        Term::Let(x, t, u) => Pure::Moved(
            (**t).clone(),
            Rc::new(Kont::Let(x.clone(), cont.clone(), (**u).clone())),
        ),
        Term::Num(n) => match &**cont {
            Kont::Succ(k) => Pure::Moved(
                Term::Num(n.checked_add(1).ok_or(MachineError::Overflow)?),
                k.clone(),
            ),
            Kont::Let(x, k, u) => Pure::Moved(u.subst(x, *n), k.clone()),
            Kont::Halt => Pure::Value(*n),
        },
        Term::Choose(Atom::Num(a), Atom::Num(b)) => Pure::Choice(*a, *b),
        Term::Var(x) => return Err(MachineError::StuckTerm(format!("free variable {x}"))),
        Term::Choose(a, b) => {
            return Err(MachineError::StuckTerm(format!(
                "choose over free variable in ({a} {b})"
            )))
        }
    })
}

/// True when both machines compute the same results, in the same order.
pub fn differential_check(t: &Term) -> bool {
    matches!((run_cont(t), run_hist(t)), (Ok(a), Ok(b)) if a == b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn substitution_respects_shadowing() {
        let t = Term::let_in("x", Term::var("x"), Term::var("x"));
        assert_eq!(
            t.subst("x", 3),
            Term::let_in("x", Term::Num(3), Term::var("x"))
        );
        let c = Term::choose("x", "y").subst("y", 4);
        assert_eq!(c, Term::Choose(Atom::Var("x".into()), Atom::Num(4)));
    }

    #[test]
    fn display_is_prefix_form() {
        let t = Term::let_in("x", Term::Num(1), Term::succ(Term::choose("x", "x")));
        assert_eq!(t.to_string(), "(let x (num 1) (succ (choose x x)))");
    }
}
