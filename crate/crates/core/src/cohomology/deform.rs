use std::collections::BTreeMap;

use serde::Serialize;

use crate::field::kernel_basis;
use crate::schouten::{GradedElement, SchoutenAlgebra};

use super::total::{dims_from_ranks, total_differential, total_ranks};
use super::CohomologyError;

/// Cohomology of `δ̄ = ∂̄ + ad_Λ + ad_Ω̄`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeformedReport {
    pub algebra: String,
    pub poisson: String,
    pub omega: String,
    pub max_degree: usize,
    pub dims: BTreeMap<usize, usize>,
    /// `δ̄` of every vector generator, keyed by label.
    pub generator_images: Vec<(String, String)>,
    pub kernel_k1_dim: usize,
    pub kernel_k1: Vec<String>,
}

/// Assembles `δ̄` on `K^0 … K^max`, checks `δ̄² = 0` and reports the
/// cohomology together with a basis of `ker δ̄` on `K^1`.
pub fn deformed_complex(
    alg: &SchoutenAlgebra,
    lambda: &GradedElement,
    omega: &GradedElement,
    max: Option<usize>,
) -> Result<DeformedReport, CohomologyError> {
    alg.validate_poisson(lambda)?;
    if !omega.is_homogeneous(0, 2) {
        return Err(CohomologyError::NotBidegree02(omega.bidegrees().into_iter().collect()));
    }
    let closed = alg.dbar(omega).add(&alg.schouten(lambda, omega));
    if !closed.is_zero() {
        return Err(CohomologyError::NotIntegrable(format!(
            "∂̄_Λ Ω̄ = {}",
            alg.format(&closed)
        )));
    }
    let square = alg.schouten(omega, omega);
    if !square.is_zero() {
        return Err(CohomologyError::NotIntegrable(format!(
            "[Ω̄, Ω̄] = {}",
            alg.format(&square)
        )));
    }

    let max = super::effective_max_degree(alg, max);
    for deg in 0..max.min(alg.dim_l().saturating_sub(1)) {
        let first = total_differential(alg, lambda, Some(omega), deg);
        let second = total_differential(alg, lambda, Some(omega), deg + 1);
        let product = second.mul(&first).expect("composable");
        if !product.is_zero() {
            return Err(CohomologyError::Consistency(format!("δ̄² ≠ 0 on K^{deg}")));
        }
    }
    let dims = dims_from_ranks(alg, &total_ranks(alg, lambda, Some(omega), max));

    let k1 = alg.degree_basis(1);
    let kernel: Vec<String> = if alg.dim_l() >= 1 {
        kernel_basis(&total_differential(alg, lambda, Some(omega), 1))
            .iter()
            .map(|v| alg.format(&k1.element(v)))
            .collect()
    } else {
        Vec::new()
    };
    let generator_images = (0..alg.n())
        .map(|i| {
            let m = alg.vector(i);
            let image = alg.total_monomial(m, lambda, Some(omega));
            (alg.spec().label(i).to_string(), alg.format(&image))
        })
        .collect();
    Ok(DeformedReport {
        algebra: alg.spec().name().to_string(),
        poisson: alg.format(lambda),
        omega: alg.format(omega),
        max_degree: max,
        dims,
        generator_images,
        kernel_k1_dim: kernel.len(),
        kernel_k1: kernel,
    })
}

impl DeformedReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
