//! Persistent, prefix-sharing record of what happened during a replay.
//!
//! A thermometer continuation is "the trace so far, plus one more value".
//! Storing traces as parent-linked nodes makes taking that snapshot O(1) and
//! lets a replay reuse the nodes of the future it consumes as its own past.

use std::rc::Rc;

struct Node<T> {
    item: T,
    parent: Trace<T>,
    len: usize,
}

/// Immutable sequence of items in execution order; the newest item is the
/// cheap end.
pub(crate) struct Trace<T> {
    head: Option<Rc<Node<T>>>,
}

impl<T> Clone for Trace<T> {
    fn clone(&self) -> Self {
        Trace {
            head: self.head.clone(),
        }
    }
}

impl<T> Default for Trace<T> {
    fn default() -> Self {
        Trace { head: None }
    }
}

impl<T> Trace<T> {
    pub(crate) fn len(&self) -> usize {
        self.head.as_ref().map_or(0, |n| n.len)
    }

    pub(crate) fn is_empty(&self) -> bool {
        self.head.is_none()
    }

    pub(crate) fn push(&self, item: T) -> Trace<T> {
        let len = self.len() + 1;
        Trace {
            head: Some(Rc::new(Node {
                item,
                parent: self.clone(),
                len,
            })),
        }
    }

    pub(crate) fn last(&self) -> Option<&T> {
        self.head.as_ref().map(|n| &n.item)
    }

    /// Plan for replaying this trace: every prefix, newest first, so that
    /// popping from the end yields them in execution order.
    pub(crate) fn replay_plan(&self) -> Vec<Trace<T>> {
        let mut plan = Vec::with_capacity(self.len());
        let mut cur = self.clone();
        while let Some(node) = cur.head.clone() {
            plan.push(Trace {
                head: Some(node.clone()),
            });
            cur = node.parent.clone();
        }
        plan
    }
}

impl<T: Clone> Trace<T> {
    pub(crate) fn to_vec(&self) -> Vec<T> {
        let mut out: Vec<T> = self
            .replay_plan()
            .iter()
            .filter_map(|t| t.last().cloned())
            .collect();
        out.reverse();
        out
    }

    pub(crate) fn from_items(items: impl IntoIterator<Item = T>) -> Trace<T> {
        items
            .into_iter()
            .fold(Trace::default(), |acc, item| acc.push(item))
    }
}

impl<T> Drop for Trace<T> {
    // iterative, so long traces do not overflow the stack when released
    fn drop(&mut self) {
        let mut next = self.head.take();
        while let Some(rc) = next {
            match Rc::try_unwrap(rc) {
                Ok(mut node) => next = node.parent.head.take(),
                Err(_) => break,
            }
        }
    }
}
