use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use crate::field::{rank, SparseMatrix};
use crate::schouten::{GradedElement, SchoutenAlgebra};

use super::CohomologyError;

/// Matrix of `∂̄ + ad_Λ (+ ad_Ω)` from `K^deg` to `K^{deg+1}` in the
/// degree bases of [`SchoutenAlgebra::degree_basis`].
pub fn total_differential(
    alg: &SchoutenAlgebra,
    lambda: &GradedElement,
    omega: Option<&GradedElement>,
    deg: usize,
) -> SparseMatrix {
    let src = alg.degree_basis(deg);
    let tgt = alg.degree_basis(deg + 1);
    let columns: Vec<Vec<(usize, usize, _)>> = src
        .monomials()
        .par_iter()
        .enumerate()
        .map(|(col, &m)| {
            let mut acc = HashMap::new();
            alg.total_monomial_into(m, lambda, omega, &mut acc);
            acc.into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(t, c)| {
                    let row = tgt.index_of(t).expect("total differential raises degree by one");
                    (row, col, c)
                })
                .collect()
        })
        .collect();
    SparseMatrix::from_triplets(tgt.len(), src.len(), columns.into_iter().flatten()).expect("indices in range")
}

/// Ranks of the total differential on `K^0 … K^max`.
pub(super) fn total_ranks(
    alg: &SchoutenAlgebra,
    lambda: &GradedElement,
    omega: Option<&GradedElement>,
    max: usize,
) -> Vec<usize> {
    (0..=max)
        .into_par_iter()
        .map(|deg| {
            if deg >= alg.dim_l() {
                0
            } else {
                rank(&total_differential(alg, lambda, omega, deg))
            }
        })
        .collect()
}

pub(super) fn dims_from_ranks(alg: &SchoutenAlgebra, ranks: &[usize]) -> BTreeMap<usize, usize> {
    ranks
        .iter()
        .enumerate()
        .map(|(deg, &out)| {
            let inc = if deg == 0 { 0 } else { ranks[deg - 1] };
            (deg, alg.degree_basis(deg).len() - out - inc)
        })
        .collect()
}

/// `dim H^n_Λ` for `n ≤ max` (default `dim L`), by brute-force rank
/// computation on the total complex.
pub fn total_cohomology(
    alg: &SchoutenAlgebra,
    lambda: &GradedElement,
    max: Option<usize>,
) -> Result<BTreeMap<usize, usize>, CohomologyError> {
    alg.validate_poisson(lambda)?;
    let max = super::effective_max_degree(alg, max);
    Ok(dims_from_ranks(alg, &total_ranks(alg, lambda, None, max)))
}
