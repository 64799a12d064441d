use std::collections::VecDeque;
use std::rc::Rc;

use super::{pure_step, Kont, MachineError, Pure, Step, Term};

/// Which branch of a `choose` was taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Choice {
    First,
    Second,
}

/// The history to replay after `past`: drop trailing `Second`s and flip the
/// last `First`. `None` once every branch has been explored. The past is in
/// execution order, deepest choice last.
pub fn nexthist(past: &[Choice]) -> Option<Vec<Choice>> {
    let keep = past.iter().rposition(|&c| c == Choice::First)?;
    let mut next = past[..keep].to_vec();
    next.push(Choice::Second);
    Some(next)
}

/// `(term, continuation, past, future, results)` plus the program being
/// replayed. Results are kept head first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HistConfig {
    pub term: Term,
    pub cont: Rc<Kont>,
    pub past: Vec<Choice>,
    pub future: VecDeque<Choice>,
    pub result: VecDeque<u64>,
    pub initial: Rc<Term>,
}

impl HistConfig {
    pub fn initial(t: &Term) -> Self {
        HistConfig {
            term: t.clone(),
            cont: Rc::new(Kont::Halt),
            past: Vec::new(),
            future: VecDeque::new(),
            result: VecDeque::new(),
            initial: Rc::new(t.clone()),
        }
    }
}

pub fn step_hist(c: HistConfig) -> Result<Step<HistConfig>, MachineError> {
    step(c).map(|(s, _)| s)
}

// also reports whether the step restarted the program
fn step(c: HistConfig) -> Result<(Step<HistConfig>, bool), MachineError> {
    let HistConfig {
        term,
        cont,
        mut past,
        mut future,
        mut result,
        initial,
    } = c;
    let pure = pure_step(&term, &cont)?;
    let mut next = HistConfig {
        term,
        cont,
        past: Vec::new(),
        future: VecDeque::new(),
        result: VecDeque::new(),
        initial,
    };
    match pure {
        Pure::Moved(t, k) => {
            next.term = t;
            next.cont = k;
        }
        Pure::Choice(a, b) => match future.pop_front() {
            // an unknown future starts with the first branch
            None => future.push_back(Choice::First),
            Some(i) => {
                next.term = Term::Num(if i == Choice::First { a } else { b });
                past.push(i);
            }
        },
        Pure::Value(n) => {
            if !future.is_empty() {
                return Err(MachineError::StuckTerm(
                    "halted with choices left in the future".into(),
                ));
            }
            result.push_front(n);
            match nexthist(&past) {
                None => return Ok((Step::Final(result.into()), false)),
                Some(f) => {
                    next.term = (*next.initial).clone();
                    next.cont = Rc::new(Kont::Halt);
                    next.past = Vec::new();
                    next.future = f.into();
                    next.result = result;
                    return Ok((Step::Next(next), true));
                }
            }
        }
    }
    next.past = past;
    next.future = future;
    next.result = result;
    Ok((Step::Next(next), false))
}

pub fn run_hist(t: &Term) -> Result<Vec<u64>, MachineError> {
    run_hist_counted(t).map(|(r, _)| r)
}

/// Results together with the number of runs from the initial term.
pub fn run_hist_counted(t: &Term) -> Result<(Vec<u64>, usize), MachineError> {
    let mut c = HistConfig::initial(t);
    let mut runs = 1;
    loop {
        match step(c)? {
            (Step::Next(n), restarted) => {
                runs += usize::from(restarted);
                c = n;
            }
            (Step::Final(r), _) => return Ok((r, runs)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Choice::{First, Second};

    #[test]
    fn nexthist_cases() {
        assert_eq!(nexthist(&[First]), Some(vec![Second]));
        assert_eq!(nexthist(&[First, Second]), Some(vec![Second]));
        assert_eq!(nexthist(&[First, First]), Some(vec![First, Second]));
        assert_eq!(nexthist(&[Second, Second]), None);
        assert_eq!(nexthist(&[]), None);
    }

    #[test]
    fn examples() {
        let t = Term::let_in(
            "x",
            Term::Num(1),
            Term::let_in("y", Term::Num(2), Term::choose("x", "y")),
        );
        assert_eq!(run_hist_counted(&t), Ok((vec![2, 1], 2)));
        assert_eq!(
            run_hist_counted(&Term::succ(Term::Num(4))),
            Ok((vec![5], 1))
        );
    }
}
