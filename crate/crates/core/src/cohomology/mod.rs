//! Dolbeault and holomorphic Poisson cohomology of the invariant complex,
//! the first two spectral-sequence pages, the `V∧T` obstruction and the
//! deformed differential.

mod deform;
mod obstruction;
mod pages;
mod total;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::field::{GaussianRational, SparseVec};
use crate::lie_algebra::AlgebraError;
use crate::schouten::{GradedElement, PoissonComplex, SchoutenAlgebra, SchoutenError};

pub use deform::{deformed_complex, DeformedReport};
pub use obstruction::{obstruction, split_v_wedge_t, Obstruction};
pub use pages::{dolbeault_dims, first_page, second_page, FirstPage};
pub use total::{total_cohomology, total_differential};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomologyError {
    #[error(transparent)]
    Schouten(#[from] SchoutenError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("Ω̄ must have bidegree (0,2), found {0:?}")]
    NotBidegree02(Vec<(usize, usize)>),
    #[error("Ω̄ is not integrable: {0}")]
    NotIntegrable(String),
    #[error("T = {t} is not in the layer t_{level}")]
    TNotInLayer { t: String, level: usize },
    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

/// Bidegree-indexed table with `"p,q"` keys.
pub type BidegreeTable = BTreeMap<(usize, usize), usize>;

/// Default cap on the total degree for reports.
pub const DEFAULT_MAX_DEGREE: usize = 6;

/// One row of the Hodge comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeComparison {
    pub degree: usize,
    pub hn_lambda: usize,
    pub dolbeault_sum: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HodgeVerdict {
    pub hodge: bool,
    /// Whether equality is forced by the obstruction outcome.
    pub required: bool,
    pub comparison: Vec<DegreeComparison>,
}

/// Compares `dim H^n_Λ` with `Σ_{p+q=n} dim H^{p,q}` for every computed
/// degree. An excess is always fatal; a strict drop is fatal when
/// `required`.
pub fn hodge_verdict(
    hn: &BTreeMap<usize, usize>,
    hpq: &BidegreeTable,
    required: bool,
) -> Result<HodgeVerdict, CohomologyError> {
    let mut comparison = Vec::new();
    for (&degree, &h) in hn {
        let sum: usize = hpq.iter().filter(|((p, q), _)| p + q == degree).map(|(_, d)| d).sum();
        if h > sum {
            return Err(CohomologyError::Consistency(format!(
                "dim H^{degree}_Λ = {h} exceeds the Dolbeault sum {sum}"
            )));
        }
        if required && h != sum {
            return Err(CohomologyError::Consistency(format!(
                "obstruction is solvable but dim H^{degree}_Λ = {h} < {sum}"
            )));
        }
        comparison.push(DegreeComparison {
            degree,
            hn_lambda: h,
            dolbeault_sum: sum,
        });
    }
    Ok(HodgeVerdict {
        hodge: comparison.iter().all(|c| c.hn_lambda == c.dolbeault_sum),
        required,
        comparison,
    })
}

/// Exact coordinate of the obstruction solution on one `t^(1,0)` generator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Coordinate {
    pub label: String,
    pub value: GaussianRational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ObstructionSummary {
    pub t: String,
    /// `trivial_action`, `solvable` or `unsolvable`.
    pub outcome: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CohomologyReport {
    pub algebra: String,
    pub poisson: String,
    pub max_degree: usize,
    #[serde(serialize_with = "ser_bidegree")]
    pub hpq: BidegreeTable,
    pub hn_lambda: BTreeMap<usize, usize>,
    #[serde(serialize_with = "ser_bidegree")]
    pub e1_d1_ranks: BidegreeTable,
    #[serde(serialize_with = "ser_bidegree")]
    pub e2: BidegreeTable,
    pub degeneracy: bool,
    pub hodge: bool,
    pub hodge_required: bool,
    pub hodge_comparison: Vec<DegreeComparison>,
    pub obstruction: Option<ObstructionSummary>,
    pub obstruction_solution: Option<Vec<Coordinate>>,
}

fn ser_bidegree<S: serde::Serializer>(table: &BidegreeTable, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut map = s.serialize_map(Some(table.len()))?;
    for ((p, q), v) in table {
        map.serialize_entry(&format!("{p},{q}"), v)?;
    }
    map.end()
}

impl CohomologyReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Effective maximum degree: `requested` capped at `dim L`.
pub fn effective_max_degree(alg: &SchoutenAlgebra, requested: Option<usize>) -> usize {
    requested.unwrap_or(alg.dim_l()).min(alg.dim_l())
}

/// Runs every computation for `Λ` and cross-checks the theorem-backed
/// equivalences.
pub fn analyze(
    alg: Arc<SchoutenAlgebra>,
    lambda: GradedElement,
    max_degree: Option<usize>,
) -> Result<CohomologyReport, CohomologyError> {
    let max = effective_max_degree(&alg, max_degree);
    let cx = PoissonComplex::new(alg.clone(), lambda)?;
    let hn = total_cohomology(&alg, cx.lambda(), Some(max))?;
    let first = first_page(&cx, max);
    let e2 = second_page(&first);

    let mut summary = None;
    let mut solution = None;
    let mut required = false;
    if let Some((v, t)) = applicable_obstruction(&alg, cx.lambda()) {
        let outcome = obstruction(&alg, v, &t)?;
        let solvable = !matches!(outcome, Obstruction::Unsolvable);
        if solvable != first.degenerate {
            return Err(CohomologyError::Consistency(format!(
                "obstruction is {} but the first page is {}",
                outcome.name(),
                if first.degenerate {
                    "degenerate"
                } else {
                    "not degenerate"
                }
            )));
        }
        required = solvable;
        if let Obstruction::Solvable(x) = &outcome {
            let t_idx = crate::lie_algebra::t_indices(alg.spec(), v);
            solution = Some(
                t_idx
                    .iter()
                    .zip(x)
                    .map(|(&i, value)| Coordinate {
                        label: alg.spec().label(i).to_string(),
                        value: value.clone(),
                    })
                    .collect(),
            );
        }
        summary = Some(ObstructionSummary {
            t: alg.format(&alg.vector_from_coords(&t)),
            outcome: outcome.name().to_string(),
        });
    }
    let verdict = hodge_verdict(&hn, &first.e1, required)?;
    Ok(CohomologyReport {
        algebra: alg.spec().name().to_string(),
        poisson: alg.format(cx.lambda()),
        max_degree: max,
        hpq: first.e1.clone(),
        hn_lambda: hn,
        e1_d1_ranks: first.d1_ranks.clone(),
        e2,
        degeneracy: first.degenerate,
        hodge: verdict.hodge,
        hodge_required: verdict.required,
        hodge_comparison: verdict.comparison,
        obstruction: summary,
        obstruction_solution: solution,
    })
}

/// `(V, T)` when `Λ = V∧T` with `V` spanning a one-dimensional center and
/// `T` in the layer `t_{k−1}`: the setting in which the obstruction decides
/// degeneracy.
fn applicable_obstruction(alg: &SchoutenAlgebra, lambda: &GradedElement) -> Option<(usize, SparseVec)> {
    let v = alg.structure().center_vector().ok()?;
    let t = split_v_wedge_t(alg, v, lambda)?;
    let level = alg.structure().step.checked_sub(1)?;
    let layer = alg.structure().layer(level)?;
    layer.contains(&t).then_some((v, t))
}
