//! All placements of n non-attacking queens, one column per row.

use thermo::{ListMonad, Monad, Nondet, NondetContext, OptReflected, Reflected};

use crate::Impl;

pub type Placement = Vec<usize>;

fn safe(placed: &[usize], col: usize) -> bool {
    let row = placed.len();
    placed
        .iter()
        .enumerate()
        .all(|(r, &c)| c != col && row - r != col.abs_diff(c))
}

/// Direct style: pick a safe column for each row in turn.
pub fn place<N: Nondet>(nd: &N, n: usize) -> Placement {
    let mut placed = Vec::with_capacity(n);
    for _ in 0..n {
        let cols: Vec<usize> = (0..n).filter(|&c| safe(&placed, c)).collect();
        placed.push(nd.choose(cols));
    }
    placed
}

/// The same search written against the list monad by hand.
fn place_monadic(n: usize, placed: Placement) -> Vec<Placement> {
    if placed.len() == n {
        return ListMonad::pure(placed);
    }
    let cols: Vec<usize> = (0..n).filter(|&c| safe(&placed, c)).collect();
    ListMonad::bind(cols, move |c| {
        let mut next = placed.clone();
        next.push(c);
        place_monadic(n, next)
    })
}

pub fn solve(n: usize, imp: Impl) -> Vec<Placement> {
    match imp {
        Impl::Indirect => place_monadic(n, Vec::new()),
        Impl::Replay => NondetContext::new().with_nondeterminism(|nd| place(nd, n)),
        Impl::Thermo => Reflected::<ListMonad>::new().reify(move |r| place(r, n)),
        Impl::ThermoOpt => OptReflected::<ListMonad>::new().reify(|r| place(r, n)),
    }
}

/// Number of solutions by checking every permutation of columns.
pub fn brute_force_count(n: usize) -> usize {
    fn go(n: usize, used: &mut Vec<bool>, cols: &mut Vec<usize>) -> usize {
        if cols.len() == n {
            let ok = (0..n).all(|i| (i + 1..n).all(|j| j - i != cols[i].abs_diff(cols[j])));
            return usize::from(ok);
        }
        let mut total = 0;
        for c in 0..n {
            if !used[c] {
                used[c] = true;
                cols.push(c);
                total += go(n, used, cols);
                cols.pop();
                used[c] = false;
            }
        }
        total
    }
    go(n, &mut vec![false; n], &mut Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_counts() {
        let counts: Vec<usize> = (1..=8).map(brute_force_count).collect();
        assert_eq!(counts, vec![1, 0, 0, 2, 10, 4, 40, 92]);
    }

    #[test]
    fn small_boards() {
        for imp in Impl::ALL {
            assert_eq!(solve(1, imp), vec![vec![0]]);
            assert!(solve(2, imp).is_empty());
            assert!(solve(3, imp).is_empty());
            assert_eq!(solve(4, imp), vec![vec![1, 3, 0, 2], vec![2, 0, 3, 1]]);
        }
    }
}
