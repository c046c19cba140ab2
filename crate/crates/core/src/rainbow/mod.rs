//! Rainbow colours and coloured graphs, the forbidden-triangle rules, and the rainbow
//! cylindric atom structures built from them.
//!
//! Yellow shades are an opaque index set whose admissibility is decided by a caller-supplied
//! predicate; by default there are no yellows. The exact yellow conditions of the full
//! construction are deliberately not encoded here.

mod atoms;
mod colour;
mod cone;
mod graph;

pub(crate) use atoms::kernels;
pub use atoms::{
    enumerate_atoms, enumerate_atoms_capped, rainbow_atom_structure, rainbow_atom_structure_capped, RainbowAtom, RainbowStructure, DEFAULT_ATOM_CAP,
};
pub use colour::{Colour, RainbowSig, YellowRule};
pub use cone::{apex_edge_options, cone, white_base};
pub use graph::ColouredGraph;
