use crate::field::{solve, GaussianRational, SparseVec};
use crate::lie_algebra::{d_rho_matrix, t_indices};
use crate::schouten::{GradedElement, OperatorKind, SchoutenAlgebra};

use super::CohomologyError;

/// Outcome of `ι_T dρ̄ = −ι_X dρ` for `Λ = V∧T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Obstruction {
    /// `ι_T dρ̄ = 0`, so `ad_Λ` vanishes identically.
    TrivialAction,
    /// Coordinates of `X` over the `t^(1,0)` generators.
    Solvable(Vec<GaussianRational>),
    Unsolvable,
}

impl Obstruction {
    pub fn name(&self) -> &'static str {
        match self {
            Obstruction::TrivialAction => "trivial_action",
            Obstruction::Solvable(_) => "solvable",
            Obstruction::Unsolvable => "unsolvable",
        }
    }
}

/// The `T` with `Λ = V∧T`, if `Λ` has that shape.
pub fn split_v_wedge_t(alg: &SchoutenAlgebra, v: usize, lambda: &GradedElement) -> Option<SparseVec> {
    let vv = alg.vector_element(v);
    let mut t = Vec::new();
    for j in 0..alg.n() {
        if j == v {
            continue;
        }
        let basis = vv.wedge(&alg.vector_element(j));
        let (m, sign) = basis.terms().next().expect("V ∧ X_j ≠ 0");
        let c = lambda.coefficient(m);
        if !c.is_zero() {
            t.push((j, c.checked_div(sign).expect("sign is ±1")));
        }
    }
    let t = SparseVec::from_entries(t);
    (vv.wedge(&alg.vector_from_coords(&t)) == *lambda).then_some(t)
}

/// Decides whether `ad_Λ ρ̄` is `∂̄`-exact for `Λ = V∧T`, `V` spanning the
/// center and `T ∈ t_{k−1}^(1,0)`.
pub fn obstruction(alg: &SchoutenAlgebra, v_index: usize, t: &SparseVec) -> Result<Obstruction, CohomologyError> {
    let report = alg.structure();
    let d = d_rho_matrix(alg.spec(), report, v_index)?;
    let level = report.step.saturating_sub(1);
    let in_layer = report.layer(level).is_some_and(|l| l.contains(t));
    if !in_layer {
        return Err(CohomologyError::TNotInLayer {
            t: alg.format(&alg.vector_from_coords(t)),
            level,
        });
    }

    // ι_T dρ̄ = −Dᴴ t in t^*(0,1) coordinates, so the system reads D x = Dᴴ t
    let idx = t_indices(alg.spec(), v_index);
    let rhs: Vec<GaussianRational> = (0..idx.len())
        .map(|b| {
            let mut s = GaussianRational::zero();
            for (j, &tj) in idx.iter().enumerate() {
                if let Some(c) = t.get(tj) {
                    s.add_mul(&d.get(j, b).conj(), c);
                }
            }
            s
        })
        .collect();
    let outcome = if rhs.iter().all(GaussianRational::is_zero) {
        Obstruction::TrivialAction
    } else {
        match solve(&d, &rhs).expect("square system") {
            Some(x) => Obstruction::Solvable(x),
            None => Obstruction::Unsolvable,
        }
    };
    cross_check(alg, v_index, t, &idx, &outcome)?;
    Ok(outcome)
}

/// Re-derives the outcome from `∂̄X = [V∧T, ρ̄]` with the Schouten engine.
fn cross_check(
    alg: &SchoutenAlgebra,
    v: usize,
    t: &SparseVec,
    idx: &[usize],
    outcome: &Obstruction,
) -> Result<(), CohomologyError> {
    let lambda = alg.vector_element(v).wedge(&alg.vector_from_coords(t));
    let target = alg.schouten(&lambda, &alg.form_element(v));
    let fail = |what: &str| Err(CohomologyError::Consistency(format!("obstruction cross-check: {what}")));
    match outcome {
        Obstruction::TrivialAction if !target.is_zero() => fail("ad_Λ ρ̄ ≠ 0 for a trivial action"),
        Obstruction::Solvable(x) => {
            let xv = SparseVec::from_entries(idx.iter().zip(x).map(|(&i, c)| (i, c.clone())));
            if alg.dbar(&alg.vector_from_coords(&xv)) != target {
                return fail("∂̄X ≠ ad_Λ ρ̄");
            }
            Ok(())
        }
        Obstruction::Unsolvable => {
            let block = alg.operator_block(OperatorKind::Dbar, 1, 0, None)?;
            let coords = alg.block_basis(1, 1).coordinates(&target);
            let b = coords.to_dense(block.matrix.rows());
            if solve(&block.matrix, &b).expect("dimensions match").is_some() {
                return fail("ad_Λ ρ̄ is ∂̄-exact on g^(1,0)");
            }
            Ok(())
        }
        _ => Ok(()),
    }
}
