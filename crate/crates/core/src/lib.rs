//! Finite order theory: posets, downset lattices, semilattice structure,
//! embedding search, and constructive extraction procedures for chains of
//! ideals and antichains in meet-semilattices.

pub mod budget;
pub mod constructions;
pub mod error;
pub mod families;
pub mod poset;
pub mod segments;
pub mod semilattice;
pub mod theoremlab;

pub use error::{Error, Result};
pub use poset::{CoverList, Poset, RelationKind};
