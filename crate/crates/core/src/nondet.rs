//! Replay-based nondeterminism.
//!
//! `choose` picks one element of a list; `with_nondeterminism` re-runs its
//! body once per path through the tree of choices and collects every result.
//! Nothing is captured: each run follows a recorded path index (the future)
//! and records the choices it actually makes (the past), from which the next
//! path is computed.

use std::cell::RefCell;
use std::collections::VecDeque;
use std::mem;
use std::panic::{self, AssertUnwindSafe};

use crate::error::{raise, ControlError};
use crate::signal::{fresh_id, Signal, SignalKind};

/// Position within a choice list, together with the list's length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChoiceIdx {
    pos: usize,
    len: usize,
}

impl ChoiceIdx {
    /// `None` unless `pos < len`.
    pub fn new(pos: usize, len: usize) -> Option<Self> {
        (pos < len).then_some(ChoiceIdx { pos, len })
    }

    /// First index of a list of `len` elements.
    pub fn start(len: usize) -> Option<Self> {
        Self::new(0, len)
    }

    pub fn pos(&self) -> usize {
        self.pos
    }

    // never empty: a choice index only exists for a non-empty list
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_last(&self) -> bool {
        self.pos + 1 == self.len
    }
}

/// The next index in the same list, if any.
pub fn next_idx(i: ChoiceIdx) -> Option<ChoiceIdx> {
    ChoiceIdx::new(i.pos + 1, i.len)
}

/// Identifies one path through a computation tree.
///
/// Choices are stored in execution order: the first element is the root
/// choice and the last one is the most recent, deepest choice.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PathIndex(Vec<ChoiceIdx>);

impl PathIndex {
    pub fn new(choices: Vec<ChoiceIdx>) -> Self {
        PathIndex(choices)
    }

    /// Build from `(pos, len)` pairs in execution order. Panics on an
    /// invalid pair.
    pub fn from_pairs(pairs: &[(usize, usize)]) -> Self {
        PathIndex(
            pairs
                .iter()
                .map(|&(k, n)| ChoiceIdx::new(k, n).expect("choice index out of range"))
                .collect(),
        )
    }

    pub fn choices(&self) -> &[ChoiceIdx] {
        &self.0
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.0.iter().map(|i| (i.pos, i.len)).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }
}

/// Index of the path explored after `p`: advance the deepest choice that
/// still has siblings and drop everything below it. Empty once the tree is
/// exhausted.
pub fn next_path(p: &PathIndex) -> PathIndex {
    let mut choices = p.0.clone();
    while let Some(last) = choices.pop() {
        if let Some(advanced) = next_idx(last) {
            choices.push(advanced);
            return PathIndex(choices);
        }
    }
    PathIndex::default()
}

#[derive(Debug, Default, Clone, PartialEq, Eq)]
struct PathState {
    past: Vec<ChoiceIdx>,
    future: VecDeque<ChoiceIdx>,
}

/// Snapshot of a [`NondetContext`], for checking that runs leave no trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NondetSnapshot {
    pub past: PathIndex,
    pub future: PathIndex,
    pub depth: usize,
}

/// State shared by `choose` and `with_nondeterminism`.
///
/// A context is single threaded. Independent contexts never interact, so
/// separate computations (and tests) can run side by side.
pub struct NondetContext {
    id: u64,
    state: RefCell<PathState>,
    nest: RefCell<Vec<PathState>>,
}

impl Default for NondetContext {
    fn default() -> Self {
        Self::new()
    }
}

impl NondetContext {
    pub fn new() -> Self {
        NondetContext {
            id: fresh_id(),
            state: RefCell::new(PathState::default()),
            nest: RefCell::new(Vec::new()),
        }
    }

    /// Number of `with_nondeterminism` calls currently running.
    pub fn depth(&self) -> usize {
        self.nest.borrow().len()
    }

    pub fn snapshot(&self) -> NondetSnapshot {
        let st = self.state.borrow();
        NondetSnapshot {
            past: PathIndex(st.past.clone()),
            future: PathIndex(st.future.iter().copied().collect()),
            depth: self.depth(),
        }
    }

    /// Return one element of `xs`. Which one depends on the path being
    /// explored; an empty list abandons the path.
    #[track_caller]
    pub fn choose<T: Clone>(&self, xs: &[T]) -> T {
        if self.depth() == 0 {
            raise(ControlError::UsedOutsideScope);
        }
        if xs.is_empty() {
            Signal::raise(self.id, SignalKind::Empty);
        }
        let mut st = self.state.borrow_mut();
        let idx = match st.future.pop_front() {
            Some(idx) if idx.len != xs.len() => {
                drop(st);
                raise(ControlError::ChoiceMismatch {
                    recorded: idx.len,
                    found: xs.len(),
                })
            }
            Some(idx) => idx,
            None => ChoiceIdx {
                pos: 0,
                len: xs.len(),
            },
        };
        st.past.push(idx);
        xs[idx.pos].clone()
    }

    /// Abandon the current path.
    #[track_caller]
    pub fn fail<T: Clone>(&self) -> T {
        self.choose::<T>(&[])
    }

    /// Binary choice: `a` on one path, `b` on the next.
    pub fn choose2<T: Clone>(&self, a: T, b: T) -> T {
        self.choose(&[a, b])
    }

    /// Results of every path through `body`, first path first.
    ///
    /// `body` is re-run once per leaf of its computation tree, so it must not
    /// have effects other than `choose` and nested `with_nondeterminism` on
    /// this context. Calls may nest. The context's state is restored when
    /// this returns or unwinds.
    pub fn with_nondeterminism<T>(&self, body: impl Fn(&Self) -> T) -> Vec<T> {
        let saved = mem::take(&mut *self.state.borrow_mut());
        self.nest.borrow_mut().push(saved);
        let _restore = Restore { ctx: self };

        let mut results = Vec::new();
        loop {
            match panic::catch_unwind(AssertUnwindSafe(|| body(self))) {
                Ok(v) => results.push(v),
                Err(p) if Signal::matches(&*p, self.id, SignalKind::Empty) => {}
                Err(p) => panic::resume_unwind(p),
            }
            let mut st = self.state.borrow_mut();
            if !st.future.is_empty() {
                let unconsumed = st.future.len();
                drop(st);
                raise(ControlError::ReplayDivergence { unconsumed });
            }
            let next = next_path(&PathIndex(mem::take(&mut st.past)));
            if next.is_empty() {
                break;
            }
            st.future = next.0.into();
        }
        results
    }

    /// Two-run variant for bodies that call [`Self::choose2`] at most once.
    pub fn with_nondeterminism2<T>(&self, body: impl Fn(&Self) -> T) -> Vec<T> {
        self.with_nondeterminism(body)
    }
}

struct Restore<'a> {
    ctx: &'a NondetContext,
}

impl Drop for Restore<'_> {
    fn drop(&mut self) {
        // `with_nondeterminism` pushed exactly one entry before creating us
        if let Some(saved) = self.ctx.nest.borrow_mut().pop() {
            *self.ctx.state.borrow_mut() = saved;
        }
    }
}
