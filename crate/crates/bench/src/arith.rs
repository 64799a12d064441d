//! Values of every prefix of an arithmetic expression that is itself a
//! complete expression, found by a nondeterministic parser.
//!
//! Grammar: `E -> E '+' T | T`, `T -> T '*' F | F`, `F -> '(' E ')' | digits`.
//! Arithmetic wraps on overflow. At each point where the parser may stop or
//! go on, stopping is tried first, so shorter prefixes come out first.

use std::cell::Cell;
use std::rc::Rc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thermo::{Monad, NondetContext, Reflected};

use crate::Impl;

/// Parser state: the whole text and a position in it.
#[derive(Clone)]
pub struct Input {
    text: Rc<[u8]>,
    pos: usize,
}

impl Input {
    pub fn new(text: &str) -> Self {
        Input {
            text: text.as_bytes().into(),
            pos: 0,
        }
    }

    pub fn pos(&self) -> usize {
        self.pos
    }
}

/// A parser: every way to read a value off the front of the input.
pub type Parser<A> = Rc<dyn Fn(Input) -> Vec<(A, Input)>>;

/// State threaded through nondeterminism.
#[derive(Debug, Clone, Copy, Default)]
pub struct ParserMonad;

impl Monad for ParserMonad {
    type M<A: Clone + 'static> = Parser<A>;

    fn pure<A: Clone + 'static>(a: A) -> Parser<A> {
        Rc::new(move |inp| vec![(a.clone(), inp)])
    }

    fn bind<A: Clone + 'static, B: Clone + 'static>(
        m: Parser<A>,
        f: impl Fn(A) -> Parser<B> + 'static,
    ) -> Parser<B> {
        Rc::new(move |inp| {
            m(inp)
                .into_iter()
                .flat_map(|(a, rest)| f(a)(rest))
                .collect()
        })
    }
}

/// Next byte, or nothing at the end of input.
pub fn item() -> Parser<Option<u8>> {
    Rc::new(|inp: Input| {
        let c = inp.text.get(inp.pos).copied();
        let pos = inp.pos + usize::from(c.is_some());
        vec![(c, Input { pos, ..inp })]
    })
}

/// Both answers: `false` first, then `true`.
pub fn either() -> Parser<bool> {
    Rc::new(|inp: Input| vec![(false, inp.clone()), (true, inp)])
}

pub fn failure<A: Clone + 'static>() -> Parser<A> {
    Rc::new(|_| Vec::new())
}

/// What the direct-style grammar needs.
trait ParseOps {
    fn item(&self) -> Option<u8>;
    /// Stop (`false`) or go on (`true`); both are explored.
    fn either(&self) -> bool;
    fn fail(&self) -> !;

    fn expect(&self, c: u8) {
        if self.item() != Some(c) {
            self.fail();
        }
    }

    fn digit(&self) -> i64 {
        match self.item() {
            Some(c) if c.is_ascii_digit() => i64::from(c - b'0'),
            _ => self.fail(),
        }
    }
}

fn expr<P: ParseOps>(p: &P) -> i64 {
    let mut acc = term(p);
    while p.either() {
        p.expect(b'+');
        acc = acc.wrapping_add(term(p));
    }
    acc
}

fn term<P: ParseOps>(p: &P) -> i64 {
    let mut acc = factor(p);
    while p.either() {
        p.expect(b'*');
        acc = acc.wrapping_mul(factor(p));
    }
    acc
}

fn factor<P: ParseOps>(p: &P) -> i64 {
    if p.either() {
        p.expect(b'(');
        let v = expr(p);
        p.expect(b')');
        v
    } else {
        number(p)
    }
}

fn number<P: ParseOps>(p: &P) -> i64 {
    let mut acc = p.digit();
    while p.either() {
        acc = acc.wrapping_mul(10).wrapping_add(p.digit());
    }
    acc
}

struct ThermoOps<'a>(&'a Reflected<ParserMonad>);

impl ParseOps for ThermoOps<'_> {
    fn item(&self) -> Option<u8> {
        self.0.reflect(item())
    }

    fn either(&self) -> bool {
        self.0.reflect(either())
    }

    fn fail(&self) -> ! {
        self.0.reflect::<()>(failure());
        unreachable!("a failed parse never resumes")
    }
}

// Position is ordinary local state: every replay starts from scratch.
struct ReplayOps<'a> {
    nd: &'a NondetContext,
    text: &'a [u8],
    pos: Cell<usize>,
}

impl ParseOps for ReplayOps<'_> {
    fn item(&self) -> Option<u8> {
        let c = self.text.get(self.pos.get()).copied();
        self.pos.set(self.pos.get() + usize::from(c.is_some()));
        c
    }

    fn either(&self) -> bool {
        self.nd.choose(&[false, true])
    }

    fn fail(&self) -> ! {
        self.nd.fail::<()>();
        unreachable!("a failed path never resumes")
    }
}

// Hand-inlined parser monad: lists of (value, position).

type Parses = Vec<(i64, usize)>;

fn expr_i(t: &[u8], pos: usize) -> Parses {
    fn rest(t: &[u8], acc: i64, pos: usize) -> Parses {
        let mut out = vec![(acc, pos)];
        if t.get(pos) == Some(&b'+') {
            for (b, p) in term_i(t, pos + 1) {
                out.extend(rest(t, acc.wrapping_add(b), p));
            }
        }
        out
    }
    term_i(t, pos)
        .into_iter()
        .flat_map(|(a, p)| rest(t, a, p))
        .collect()
}

fn term_i(t: &[u8], pos: usize) -> Parses {
    fn rest(t: &[u8], acc: i64, pos: usize) -> Parses {
        let mut out = vec![(acc, pos)];
        if t.get(pos) == Some(&b'*') {
            for (b, p) in factor_i(t, pos + 1) {
                out.extend(rest(t, acc.wrapping_mul(b), p));
            }
        }
        out
    }
    factor_i(t, pos)
        .into_iter()
        .flat_map(|(a, p)| rest(t, a, p))
        .collect()
}

fn factor_i(t: &[u8], pos: usize) -> Parses {
    let mut out = number_i(t, pos);
    if t.get(pos) == Some(&b'(') {
        for (v, p) in expr_i(t, pos + 1) {
            if t.get(p) == Some(&b')') {
                out.push((v, p + 1));
            }
        }
    }
    out
}

fn number_i(t: &[u8], pos: usize) -> Parses {
    fn rest(t: &[u8], acc: i64, pos: usize) -> Parses {
        let mut out = vec![(acc, pos)];
        if let Some(c) = t.get(pos).filter(|c| c.is_ascii_digit()) {
            out.extend(rest(
                t,
                acc.wrapping_mul(10).wrapping_add(i64::from(c - b'0')),
                pos + 1,
            ));
        }
        out
    }
    match t.get(pos) {
        Some(c) if c.is_ascii_digit() => rest(t, i64::from(c - b'0'), pos + 1),
        _ => Vec::new(),
    }
}

/// Values of every complete-expression prefix, in the parser's order.
pub fn run(input: &str, imp: Impl) -> Vec<i64> {
    match imp {
        Impl::Indirect => expr_i(input.as_bytes(), 0)
            .into_iter()
            .map(|(v, _)| v)
            .collect(),
        Impl::Replay => {
            let nd = NondetContext::new();
            nd.with_nondeterminism(|nd| {
                let ops = ReplayOps {
                    nd,
                    text: input.as_bytes(),
                    pos: Cell::new(0),
                };
                expr(&ops)
            })
        }
        Impl::Thermo => {
            let r = Reflected::<ParserMonad>::new();
            let parser = r.reify(|r| expr(&ThermoOps(r)));
            parser(Input::new(input))
                .into_iter()
                .map(|(v, _)| v)
                .collect()
        }
        Impl::ThermoOpt => panic!("arith-parse has no optimized implementation"),
    }
}

/// Same values, found by trying each prefix, shortest first, with an
/// ordinary deterministic parser.
pub fn oracle(input: &str) -> Vec<i64> {
    let t = input.as_bytes();
    (1..=t.len())
        .filter_map(|n| parse_complete(&t[..n]))
        .collect()
}

fn parse_complete(t: &[u8]) -> Option<i64> {
    struct P<'a> {
        t: &'a [u8],
        pos: usize,
    }
    impl P<'_> {
        fn peek(&self) -> Option<u8> {
            self.t.get(self.pos).copied()
        }
        fn expr(&mut self) -> Option<i64> {
            let mut acc = self.term()?;
            while self.peek() == Some(b'+') {
                self.pos += 1;
                acc = acc.wrapping_add(self.term()?);
            }
            Some(acc)
        }
        fn term(&mut self) -> Option<i64> {
            let mut acc = self.factor()?;
            while self.peek() == Some(b'*') {
                self.pos += 1;
                acc = acc.wrapping_mul(self.factor()?);
            }
            Some(acc)
        }
        fn factor(&mut self) -> Option<i64> {
            match self.peek()? {
                b'(' => {
                    self.pos += 1;
                    let v = self.expr()?;
                    (self.peek() == Some(b')')).then(|| {
                        self.pos += 1;
                        v
                    })
                }
                c if c.is_ascii_digit() => {
                    let mut acc = 0i64;
                    while let Some(c) = self.peek().filter(u8::is_ascii_digit) {
                        acc = acc.wrapping_mul(10).wrapping_add(i64::from(c - b'0'));
                        self.pos += 1;
                    }
                    Some(acc)
                }
                _ => None,
            }
        }
    }
    let mut p = P { t, pos: 0 };
    let v = p.expr()?;
    (p.pos == t.len()).then_some(v)
}

/// Random expression with `leaves` numbers (at least one).
pub fn gen_expr(leaves: usize, seed: u64) -> String {
    fn go(rng: &mut ChaCha8Rng, leaves: usize, out: &mut String) {
        if leaves <= 1 {
            let n: u32 = if rng.random_bool(0.3) {
                rng.random_range(10..100)
            } else {
                rng.random_range(0..10)
            };
            out.push_str(&n.to_string());
            return;
        }
        let left = rng.random_range(1..leaves);
        let paren = rng.random_bool(0.25);
        if paren {
            out.push('(');
        }
        go(rng, left, out);
        out.push(if rng.random_bool(0.5) { '+' } else { '*' });
        go(rng, leaves - left, out);
        if paren {
            out.push(')');
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = String::new();
    go(&mut rng, leaves.max(1), &mut out);
    out
}
