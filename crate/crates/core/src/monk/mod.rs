//! Relation-algebra atom structures given by forbidden triples, the graph-indexed and
//! three-hue examples, atom splitting, and the passage to cylindric atom structures through
//! basic matrices or directly through labelled point configurations.

mod alpha;
mod matrices;
mod ra;

pub use alpha::{alpha_of_graph, node_colour_triple_allowed, rybh_algebra, split_atom, Hue, NodeColour};
pub use matrices::{
    basic_matrices, basic_matrices_capped, monk_ca_atom_structure, monk_ca_atom_structure_capped, Configuration, ConfigurationStructure,
    MatrixStructure, DEFAULT_MATRIX_CAP,
};
pub use ra::{check_ra_atom_structure, peircean_orbit, RaAtomStructure, RaCondition, RaJson, RaReport};
