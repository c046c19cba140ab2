//! Formulas, generalized and clique guarded semantics, guards, and the loosely guarded
//! translation of algebraic equations.

mod clique;
mod formula;
mod guard;
mod model;
pub mod random;
mod sexpr;
mod translate;

pub use clique::{
    clique_guarded_eval, clique_set, is_m_flat_model, is_m_square_model, AlgebraModel, FlatFailure, FlatReport, SquareFailure, SquareReport,
    UNIT_SYMBOL,
};
pub use formula::Formula;
pub use guard::{expand_with_guard, guard_translate};
pub use model::{eval, eval_generalized, FiniteModel, Relation};
pub use translate::{
    diagonal_symbol, eval_term, holds, loose_guard_violation, loosely_guarded_translate, sentence_holds, translate_term, translation_model,
    QfFormula, Term, ZERO_SYMBOL,
};
