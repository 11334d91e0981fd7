use std::collections::{BTreeMap, BTreeSet};

use crate::field::GaussianRational;

use super::Monomial;

/// A finite linear combination of canonical monomials; no zero
/// coefficients are stored.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct GradedElement {
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl GradedElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(m: Monomial, coeff: GaussianRational) -> Self {
        let mut out = Self::zero();
        out.add_term(m, &coeff);
        out
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, GaussianRational)>>(terms: I) -> Self {
        let mut out = Self::zero();
        for (m, c) in terms {
            out.add_term(m, &c);
        }
        out
    }

    pub fn add_term(&mut self, m: Monomial, coeff: &GaussianRational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_default();
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    /// `self += coeff · other`.
    pub fn add_scaled(&mut self, coeff: &GaussianRational, other: &GradedElement) {
        for (m, c) in &other.terms {
            self.add_term(*m, &(coeff * c));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &GaussianRational)> + '_ {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn coefficient(&self, m: Monomial) -> GaussianRational {
        self.terms.get(&m).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn bidegrees(&self) -> BTreeSet<(usize, usize)> {
        self.terms.keys().map(|m| m.bidegree()).collect()
    }

    /// True when every term has bidegree `(p, q)` (vacuously for zero).
    pub fn is_homogeneous(&self, p: usize, q: usize) -> bool {
        self.terms.keys().all(|m| m.bidegree() == (p, q))
    }

    /// The single total degree of the element, if it is homogeneous in it.
    pub fn degree(&self) -> Option<usize> {
        let mut degs = self.terms.keys().map(|m| m.degree());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// The component of bidegree `(p, q)`.
    pub fn component(&self, p: usize, q: usize) -> GradedElement {
        GradedElement {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.bidegree() == (p, q))
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    pub fn scaled(&self, coeff: &GaussianRational) -> GradedElement {
        let mut out = GradedElement::zero();
        out.add_scaled(coeff, self);
        out
    }

    pub fn add(&self, other: &GradedElement) -> GradedElement {
        let mut out = self.clone();
        out.add_scaled(&GaussianRational::one(), other);
        out
    }

    pub fn sub(&self, other: &GradedElement) -> GradedElement {
        let mut out = self.clone();
        out.add_scaled(&GaussianRational::from_int(-1), other);
        out
    }

    /// Exterior product; every generator has degree one.
    pub fn wedge(&self, other: &GradedElement) -> GradedElement {
        let mut out = GradedElement::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if let Some((neg, m)) = a.wedge(*b) {
                    let c = ca * cb;
                    out.add_term(m, &if neg { -c } else { c });
                }
            }
        }
        out
    }
}
