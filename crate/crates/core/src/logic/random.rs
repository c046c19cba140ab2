//! Seeded generators for formulas, models and admissible sets.

use super::formula::Formula;
use super::model::FiniteModel;
use crate::error::Result;
use rand::Rng;
use std::collections::BTreeSet;

/// A formula of depth at most `depth` over `signature`, with variables below `dim`.
pub fn random_formula<R: Rng>(rng: &mut R, signature: &[(String, usize)], dim: usize, depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        return random_atomic(rng, signature, dim);
    }
    let sub = |rng: &mut R| random_formula(rng, signature, dim, depth - 1);
    match rng.gen_range(0..7) {
        0 => Formula::negate(sub(rng)),
        1 => Formula::and(sub(rng), sub(rng)),
        2 => Formula::or(sub(rng), sub(rng)),
        3 => Formula::implies(sub(rng), sub(rng)),
        4 => Formula::iff(sub(rng), sub(rng)),
        5 => Formula::exists(rng.gen_range(0..dim), sub(rng)),
        _ => Formula::forall(rng.gen_range(0..dim), sub(rng)),
    }
}

fn random_atomic<R: Rng>(rng: &mut R, signature: &[(String, usize)], dim: usize) -> Formula {
    let pick = rng.gen_range(0..signature.len() + 3);
    match pick.checked_sub(3) {
        Some(k) => {
            let (rel, arity) = &signature[k];
            Formula::atom(rel.clone(), (0..*arity).map(|_| rng.gen_range(0..dim)).collect())
        }
        None if pick == 0 => Formula::Eq(rng.gen_range(0..dim), rng.gen_range(0..dim)),
        None if pick == 1 => Formula::True,
        None => Formula::False,
    }
}

/// Each relation holds of each tuple independently with probability `density`.
pub fn random_model<R: Rng>(rng: &mut R, universe: usize, signature: &[(String, usize)], density: f64) -> Result<FiniteModel> {
    let mut model = FiniteModel::new(universe)?;
    for (rel, arity) in signature {
        let tuples: Vec<Vec<usize>> = all_tuples(universe, *arity).into_iter().filter(|_| rng.gen_bool(density)).collect();
        model = model.with_relation(rel.clone(), *arity, tuples)?;
    }
    Ok(model)
}

/// A non-empty random subset of `^dim universe`.
pub fn random_admissible<R: Rng>(rng: &mut R, universe: usize, dim: usize, density: f64) -> BTreeSet<Vec<usize>> {
    let all = all_tuples(universe, dim);
    let mut out: BTreeSet<Vec<usize>> = all.iter().filter(|_| rng.gen_bool(density)).cloned().collect();
    if out.is_empty() {
        out.insert(all[rng.gen_range(0..all.len())].clone());
    }
    out
}

/// `^arity universe` in lexicographic order.
pub fn all_tuples(universe: usize, arity: usize) -> Vec<Vec<usize>> {
    (0..arity).fold(vec![vec![]], |acc, _| {
        acc.into_iter()
            .flat_map(|t| {
                (0..universe).map(move |x| {
                    let mut u = t.clone();
                    u.push(x);
                    u
                })
            })
            .collect()
    })
}
