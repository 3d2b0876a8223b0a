//! Finite posets, monotone maps, strong monads and their algebras.

mod algebra;
mod bits;
mod map;
mod monad;
mod poset;

pub use algebra::{least_fixpoint, least_fixpoint_with, Algebra, Structure};
pub use bits::Bits;
pub use map::MonotoneMap;
pub use monad::{Monad, MonoidPreset, OrderedMonoid};
pub use poset::{OrderError, Poset, Shape, Side, DEFAULT_BUDGET};
