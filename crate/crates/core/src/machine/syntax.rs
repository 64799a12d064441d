//! Prefix syntax: `(num 3)`, `(succ T)`, `(let x T U)`, `(var x)`,
//! `(choose x y)`. Result lists print as `[2,1]`.

use super::{Atom, MachineError, Term};

fn tokenize(src: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in src.char_indices() {
        let delim = ch == '(' || ch == ')' || ch.is_whitespace();
        if delim {
            if let Some(s) = start.take() {
                out.push(&src[s..i]);
            }
            if !ch.is_whitespace() {
                out.push(&src[i..i + 1]);
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(&src[s..]);
    }
    out
}

struct Parser<'a> {
    toks: Vec<&'a str>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, MachineError> {
        Err(MachineError::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn next(&mut self) -> Result<&'a str, MachineError> {
        match self.toks.get(self.pos) {
            Some(t) => {
                self.pos += 1;
                Ok(t)
            }
            None => self.err("unexpected end of input"),
        }
    }

    fn expect(&mut self, tok: &str) -> Result<(), MachineError> {
        let got = self.next()?;
        if got == tok {
            Ok(())
        } else {
            self.err(format!("expected `{tok}`, found `{got}`"))
        }
    }

    fn name(&mut self) -> Result<String, MachineError> {
        let t = self.next()?;
        let valid = t
            .chars()
            .next()
            .is_some_and(|c| c.is_alphabetic() || c == '_')
            && t.chars()
                .all(|c| c.is_alphanumeric() || c == '_' || c == '\'');
        if valid {
            Ok(t.to_string())
        } else {
            self.err(format!("bad variable name `{t}`"))
        }
    }

    fn num(&mut self) -> Result<u64, MachineError> {
        let t = self.next()?;
        match t.parse() {
            Ok(n) => Ok(n),
            Err(_) => self.err(format!("bad numeral `{t}`")),
        }
    }

    fn atom(&mut self) -> Result<Atom, MachineError> {
        match self.toks.get(self.pos) {
            Some(t) if t.starts_with(|c: char| c.is_ascii_digit()) => Ok(Atom::Num(self.num()?)),
            _ => Ok(Atom::Var(self.name()?)),
        }
    }

    fn term(&mut self) -> Result<Term, MachineError> {
        self.expect("(")?;
        let t = match self.next()? {
            "num" => Term::Num(self.num()?),
            "var" => Term::Var(self.name()?),
            "succ" => Term::succ(self.term()?),
            "let" => {
                let x = self.name()?;
                let t = self.term()?;
                let u = self.term()?;
                Term::Let(x, Box::new(t), Box::new(u))
            }
            "choose" => Term::Choose(self.atom()?, self.atom()?),
            other => return self.err(format!("unknown form `{other}`")),
        };
        self.expect(")")?;
        Ok(t)
    }
}

pub fn parse_term(src: &str) -> Result<Term, MachineError> {
    let mut p = Parser {
        toks: tokenize(src),
        pos: 0,
    };
    let t = p.term()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(t)
}

pub fn format_results(r: &[u64]) -> String {
    let items: Vec<String> = r.iter().map(u64::to_string).collect();
    format!("[{}]", items.join(","))
}

pub fn parse_results(src: &str) -> Result<Vec<u64>, MachineError> {
    let bad = |msg: &str| MachineError::Parse {
        pos: 0,
        msg: msg.to_string(),
    };
    let inner = src
        .trim()
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| bad("results must be bracketed"))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|n| n.trim().parse().map_err(|_| bad("bad numeral in results")))
        .collect()
}
