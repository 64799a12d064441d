//! Delimited control and monadic reflection from nothing but unwinding and
//! mutable state.
//!
//! - [`NondetContext`]: backtracking `choose` by replaying a computation once
//!   per path.
//! - [`Control`]: `shift`/`reset` via thermometer continuations.
//! - [`Reflected`]: `reflect`/`reify` for any [`Monad`], built on `Control`.
//! - [`OptReflected`]: the same for monads with a CPS bind, replaying from a
//!   driver loop and skipping replays where a value can be returned directly.
//! - [`machine`]: two abstract machines for a tiny `choose` language, one
//!   with real continuations and one that replays, for differential testing.

mod control;
mod effects;
mod error;
pub mod machine;
mod monad;
mod nondet;
mod optimized;
mod reflect;
mod signal;
mod trace;
mod universal;

pub use control::{Cont, Control, ControlSnapshot, Frame};
pub use effects::{Failure, Nondet};
pub use error::{catch_control, panic_message, ControlError};
pub use monad::{ListMonad, MaybeMonad, Monad, State, StateMonad};
pub use nondet::{next_idx, next_path, ChoiceIdx, NondetContext, NondetSnapshot, PathIndex};
pub use optimized::{CpsMonad, LaterUse, OptReflected, OptStats, Resume};
pub use reflect::Reflected;
pub use universal::{Payload, TypeTag, Universal};
