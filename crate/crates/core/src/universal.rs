//! A checked universal type.
//!
//! Recorded frames hold values of many different types in one list. Each
//! value is boxed together with the [`TypeId`] of its static type; projecting
//! it back checks the tag. Because the tag is a property of the type rather
//! than something minted per call, a value recorded during one replay can be
//! projected during the next.

use std::any::{self, Any, TypeId};
use std::fmt;
use std::sync::Arc;

use crate::error::{raise, ControlError};

/// Bound for anything that can be stored in a [`Universal`].
pub trait Payload: Any + Clone + Send + Sync {}

impl<T: Any + Clone + Send + Sync> Payload for T {}

/// Stable identity of a static type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TypeTag {
    id: TypeId,
    name: &'static str,
}

impl TypeTag {
    pub fn of<T: Any>() -> Self {
        TypeTag {
            id: TypeId::of::<T>(),
            name: any::type_name::<T>(),
        }
    }

    pub fn name(&self) -> &'static str {
        self.name
    }
}

/// A dynamically typed value with a checked projection.
#[derive(Clone)]
pub struct Universal {
    payload: Arc<dyn Any + Send + Sync>,
    tag: TypeTag,
}

impl Universal {
    pub fn embed<T: Payload>(value: T) -> Self {
        Universal {
            payload: Arc::new(value),
            tag: TypeTag::of::<T>(),
        }
    }

    pub fn tag(&self) -> TypeTag {
        self.tag
    }

    pub fn is<T: Any>(&self) -> bool {
        self.tag.id == TypeId::of::<T>()
    }

    pub fn project<T: Payload>(&self) -> Result<T, ControlError> {
        self.payload
            .downcast_ref::<T>()
            .cloned()
            .ok_or(ControlError::TypeMismatch {
                expected: any::type_name::<T>(),
                found: self.tag.name,
            })
    }

    /// Projection inside a replay, where a mismatch means the replayed
    /// computation was not pure.
    pub(crate) fn project_or_raise<T: Payload>(&self) -> T {
        self.project().unwrap_or_else(|e| raise(e))
    }
}

impl fmt::Debug for Universal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Universal<{}>", self.tag.name)
    }
}
