//! Finite cylindric algebras and their atom structures, rainbow and Monk-style
//! constructions, atomic network games, and guarded first-order semantics.

pub mod algebra;
pub mod atomset;
pub mod error;
pub mod games;
pub mod graphs;
pub mod logic;
pub mod monk;
pub mod rainbow;
pub mod set_algebra;

pub use atomset::AtomSet;
pub use error::{Error, Result};
