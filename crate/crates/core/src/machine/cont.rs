use std::collections::VecDeque;
use std::rc::Rc;

use super::{pure_step, Kont, MachineError, Pure, Step, Term};

/// `(term, continuation, soup, results)`. The soup's head is its last
/// element; results are kept head first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContConfig {
    pub term: Term,
    pub cont: Rc<Kont>,
    pub soup: Vec<(Term, Rc<Kont>)>,
    pub result: VecDeque<u64>,
}

impl ContConfig {
    pub fn initial(t: &Term) -> Self {
        ContConfig {
            term: t.clone(),
            cont: Rc::new(Kont::Halt),
            soup: Vec::new(),
            result: VecDeque::new(),
        }
    }
}

pub fn step_cont(c: ContConfig) -> Result<Step<ContConfig>, MachineError> {
    let ContConfig {
        term,
        cont,
        mut soup,
        mut result,
    } = c;
    let next = |term, cont, soup, result| {
        Step::Next(ContConfig {
            term,
            cont,
            soup,
            result,
        })
    };
    Ok(match pure_step(&term, &cont)? {
        Pure::Moved(t, k) => next(t, k, soup, result),
        Pure::Choice(a, b) => {
            soup.push((Term::Num(b), cont.clone()));
            next(Term::Num(a), cont, soup, result)
        }
        Pure::Value(n) => {
            result.push_front(n);
            match soup.pop() {
                Some((t, k)) => next(t, k, soup, result),
                None => Step::Final(result.into()),
            }
        }
    })
}

pub fn run_cont(t: &Term) -> Result<Vec<u64>, MachineError> {
    let mut c = ContConfig::initial(t);
    loop {
        match step_cont(c)? {
            Step::Next(n) => c = n,
            Step::Final(r) => return Ok(r),
        }
    }
}
