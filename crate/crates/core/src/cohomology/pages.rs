use rayon::prelude::*;

use crate::field::{kernel_basis, rank, EchelonBasis, SparseMatrix, SparseVec};
use crate::schouten::{OperatorKind, PoissonComplex, SchoutenAlgebra};

use super::BidegreeTable;

/// Bidegrees `(p, q)` with `p, q ≤ n` and `p + q ≤ max`.
fn bidegrees(n: usize, max: usize) -> Vec<(usize, usize)> {
    (0..=n.min(max))
        .flat_map(|p| (0..=n.min(max - p)).map(move |q| (p, q)))
        .collect()
}

fn dbar_rank(alg: &SchoutenAlgebra, p: usize, q: usize) -> usize {
    if q >= alg.n() {
        return 0;
    }
    let block = alg
        .operator_block(OperatorKind::Dbar, p, q, None)
        .expect("∂̄ blocks never fail");
    rank(&block.matrix)
}

/// `dim H^q(g^{p,0}) = dim ker ∂̄_{p,q} − rank ∂̄_{p,q−1}` for `p + q ≤ max`.
pub fn dolbeault_dims(alg: &SchoutenAlgebra, max: usize) -> BidegreeTable {
    let n = alg.n();
    let cells = bidegrees(n, max);
    let ranks: BidegreeTable = cells.par_iter().map(|&(p, q)| ((p, q), dbar_rank(alg, p, q))).collect();
    cells
        .iter()
        .map(|&(p, q)| {
            let dim = alg.block_basis(p, q).len();
            let out = ranks[&(p, q)];
            let inc = if q == 0 { 0 } else { ranks[&(p, q - 1)] };
            ((p, q), dim - out - inc)
        })
        .collect()
}

/// `E₁` with the ranks of the induced `d₁ = [ad_Λ]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FirstPage {
    pub e1: BidegreeTable,
    pub d1_ranks: BidegreeTable,
    /// True iff every `d₁` vanishes.
    pub degenerate: bool,
}

/// Column space of `m` as an echelon basis in the target coordinates.
fn column_space(m: &SparseMatrix) -> EchelonBasis {
    let mut basis = EchelonBasis::new(m.rows());
    for col in m.columns() {
        basis.insert(&col);
    }
    basis
}

/// Rank of `d₁: E₁^{p,q} → E₁^{p+1,q}`: lift a basis of `ker ∂̄_{p,q}`,
/// apply `ad_Λ` and count what survives modulo `im ∂̄_{p+1,q−1}`.
fn d1_rank(cx: &PoissonComplex, p: usize, q: usize) -> usize {
    let alg = cx.algebra();
    let n = alg.n();
    if p + 1 > n || cx.lambda().is_zero() {
        return 0;
    }
    let cycles = if q < n {
        kernel_basis(&cx.block(OperatorKind::Dbar, p, q).matrix)
    } else {
        let dim = alg.block_basis(p, q).len();
        (0..dim).map(SparseVec::unit).collect()
    };
    let ad = cx.block(OperatorKind::AdLambda, p, q);
    let mut span = if q == 0 {
        EchelonBasis::new(ad.matrix.rows())
    } else {
        column_space(&cx.block(OperatorKind::Dbar, p + 1, q - 1).matrix)
    };
    let exact = span.rank();
    for z in &cycles {
        span.insert(&ad.matrix.apply(z));
    }
    span.rank() - exact
}

/// `E₁^{p,q} = H^q(g^{p,0})` and `d₁` for `p + q ≤ max`.
pub fn first_page(cx: &PoissonComplex, max: usize) -> FirstPage {
    let alg = cx.algebra();
    let e1 = dolbeault_dims(alg, max);
    let d1_ranks: BidegreeTable = bidegrees(alg.n(), max)
        .par_iter()
        .map(|&(p, q)| ((p, q), d1_rank(cx, p, q)))
        .collect();
    let degenerate = d1_ranks.values().all(|&r| r == 0);
    FirstPage {
        e1,
        d1_ranks,
        degenerate,
    }
}

/// `dim E₂^{p,q} = dim E₁^{p,q} − rank d₁^{p,q} − rank d₁^{p−1,q}`.
pub fn second_page(first: &FirstPage) -> BidegreeTable {
    first
        .e1
        .iter()
        .map(|(&(p, q), &e)| {
            let out = first.d1_ranks.get(&(p, q)).copied().unwrap_or(0);
            let inc = if p == 0 {
                0
            } else {
                first.d1_ranks.get(&(p - 1, q)).copied().unwrap_or(0)
            };
            ((p, q), e - out - inc)
        })
        .collect()
}
