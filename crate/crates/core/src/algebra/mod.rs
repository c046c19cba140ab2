//! Atom structures, their complex algebras, and structural checks on them.

pub mod axioms;
pub mod bao;
pub mod derived;
pub mod iso;
pub mod structure;
pub mod subalgebra;

pub use axioms::{check_ca_axioms, check_ca_axioms_with, Axiom, AxiomReport, AxiomResult, AxiomWitness, CheckMode};
pub use bao::{atom_structure_of, complex_algebra, FiniteBao};
pub use derived::{neat_reduct, relativize, DerivedAlgebra, Provenance};
pub use iso::{are_isomorphic, iso_atom_structures};
pub(crate) use structure::pair_index;
pub use structure::{AtomStructure, AtomStructureJson};
pub use subalgebra::{
    generated_subalgebra, is_complete_subalgebra, is_dense_subalgebra, is_rectangle, rectangularly_dense, Subalgebra, SubalgebraCheck,
};
