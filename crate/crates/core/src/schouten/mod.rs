//! The exterior algebra of `L = g^(1,0) ⊕ g^*(0,1)` with its bidegree
//! pieces `B^{p,q}`, the differential `∂̄`, the Schouten bracket and `ad_Λ`.
//!
//! Generator conventions (all generators have degree one):
//!
//! ```text
//! ∂̄ ω̄^m       = 0
//! ∂̄ X_j        = Σ_{k,m} A^m_{kj} ω̄^k ∧ X_m
//! [X_i, X_j]   = 0,   [ω̄^a, ω̄^b] = 0
//! [X_i, ω̄^m]   = ι_{X_i} dω̄^m = −Σ_b conj(A^m_{ib}) ω̄^b
//! ```
//!
//! `∂̄` extends as a degree +1 derivation and the bracket by
//! `[a, b∧c] = [a,b]∧c + (−1)^{(|a|−1)|b|} b∧[a,c]` together with
//! `[b, a] = −(−1)^{(|a|−1)(|b|−1)} [a, b]`.

mod element;
mod monomial;

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::{Arc, Mutex, RwLock};

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::field::{GaussianRational, SparseMatrix, SparseVec};
use crate::lie_algebra::{validate, AlgebraError, AlgebraSpec, StructureReport};

pub use element::GradedElement;
pub use monomial::{block_monomials, subsets, Monomial, MAX_GENERATORS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchoutenError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("n = {0} exceeds the supported {max} generators of g^(1,0)", max = MAX_GENERATORS / 2)]
    TooLarge(usize),
    #[error("Poisson bivector must have bidegree (2,0), found {0:?}")]
    NotBidegree20(Vec<(usize, usize)>),
    #[error("bivector is not holomorphic: ∂̄Λ = {0}")]
    NotHolomorphic(String),
    #[error("bivector is not Poisson: [Λ, Λ] = {0}")]
    NotPoisson(String),
}

/// Which graded operator a block belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OperatorKind {
    Dbar,
    AdLambda,
}

/// An operator restricted to one bidegree block, in canonical bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorMatrix {
    pub source: (usize, usize),
    pub target: (usize, usize),
    pub matrix: SparseMatrix,
}

/// Canonical basis of one block with a reverse index.
#[derive(Debug)]
pub struct BlockBasis {
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl BlockBasis {
    fn new(monomials: Vec<Monomial>) -> Self {
        let index = monomials.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        BlockBasis { monomials, index }
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn index_of(&self, m: Monomial) -> Option<usize> {
        self.index.get(&m).copied()
    }

    /// Coordinates of `x` in this basis. Terms outside the block are an
    /// invariant violation.
    pub fn coordinates(&self, x: &GradedElement) -> SparseVec {
        SparseVec::from_entries(x.terms().map(|(m, c)| {
            let i = self
                .index_of(m)
                .unwrap_or_else(|| panic!("monomial {m:?} outside block"));
            (i, c.clone())
        }))
    }

    pub fn element(&self, coords: &SparseVec) -> GradedElement {
        GradedElement::from_terms(coords.iter().map(|(i, c)| (self.monomials[i], c.clone())))
    }
}

type Terms = Vec<(Monomial, GaussianRational)>;

/// The Schouten calculus of one algebra: generator images of `∂̄` and of the
/// bracket, plus cached block bases.
#[derive(Debug)]
pub struct SchoutenAlgebra {
    spec: AlgebraSpec,
    report: StructureReport,
    n: usize,
    /// position → algebra index; center generators come last
    order: Vec<usize>,
    position: Vec<usize>,
    dbar_images: Vec<Terms>,
    brackets: Vec<Terms>,
    bases: Mutex<HashMap<(usize, usize), Arc<BlockBasis>>>,
}

fn add_into(acc: &mut HashMap<Monomial, GaussianRational>, m: Monomial, c: GaussianRational) {
    let entry = acc.entry(m).or_default();
    *entry += &c;
}

fn collect(acc: HashMap<Monomial, GaussianRational>) -> GradedElement {
    GradedElement::from_terms(acc.into_iter().filter(|(_, c)| !c.is_zero()))
}

impl SchoutenAlgebra {
    pub fn from_spec(spec: &AlgebraSpec) -> Result<Self, SchoutenError> {
        let report = validate(spec)?;
        Self::new(spec, &report)
    }

    pub fn new(spec: &AlgebraSpec, report: &StructureReport) -> Result<Self, SchoutenError> {
        let n = spec.n();
        if 2 * n > MAX_GENERATORS {
            return Err(SchoutenError::TooLarge(n));
        }
        let center = report.center_indices().unwrap_or_default();
        let mut order: Vec<usize> = (0..n).filter(|i| !center.contains(i)).collect();
        order.extend(center.iter().copied());
        let mut position = vec![0; n];
        for (p, &i) in order.iter().enumerate() {
            position[i] = p;
        }
        let mut alg = SchoutenAlgebra {
            spec: spec.clone(),
            report: report.clone(),
            n,
            order,
            position,
            dbar_images: vec![Vec::new(); 2 * n],
            brackets: vec![Vec::new(); 4 * n * n],
            bases: Mutex::new(HashMap::new()),
        };
        alg.build_generator_tables();
        Ok(alg)
    }

    fn build_generator_tables(&mut self) {
        let n = self.n;
        for j in 0..n {
            // ∂̄X_j = Σ A^m_{kj} ω̄^k ∧ X_m
            let mut img = GradedElement::zero();
            for k in 0..n {
                for m in 0..n {
                    let a = self.spec.a(k, j, m);
                    if !a.is_zero() {
                        let term = self.form_element(k).wedge(&self.vector_element(m));
                        img.add_scaled(&a, &term);
                    }
                }
            }
            self.dbar_images[self.position[j]] = img.terms().map(|(m, c)| (m, c.clone())).collect();
        }
        for i in 0..n {
            for m in 0..n {
                // [X_i, ω̄^m] = −Σ_b conj(A^m_{ib}) ω̄^b
                let mut img = GradedElement::zero();
                for b in 0..n {
                    let a = self.spec.a(i, b, m);
                    if !a.is_zero() {
                        img.add_scaled(&-a.conj(), &self.form_element(b));
                    }
                }
                let (pv, pf) = (self.position[i], n + self.position[m]);
                let terms: Terms = img.terms().map(|(m, c)| (m, c.clone())).collect();
                let neg: Terms = terms.iter().map(|(m, c)| (*m, -c)).collect();
                self.brackets[pv * 2 * n + pf] = terms;
                self.brackets[pf * 2 * n + pv] = neg;
            }
        }
    }

    pub fn spec(&self) -> &AlgebraSpec {
        &self.spec
    }

    pub fn structure(&self) -> &StructureReport {
        &self.report
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `dim L = 2n`.
    pub fn dim_l(&self) -> usize {
        2 * self.n
    }

    /// Vector generator position of the algebra basis vector `i`.
    pub fn vector_position(&self, i: usize) -> usize {
        self.position[i]
    }

    /// Algebra index of the generator at `position` (vector or form).
    pub fn algebra_index(&self, position: usize) -> usize {
        self.order[position % self.n]
    }

    pub fn vector(&self, i: usize) -> Monomial {
        Monomial::generator(self.position[i], self.n)
    }

    pub fn form(&self, i: usize) -> Monomial {
        Monomial::generator(self.n + self.position[i], self.n)
    }

    /// `X_i` as an element.
    pub fn vector_element(&self, i: usize) -> GradedElement {
        GradedElement::monomial(self.vector(i), GaussianRational::one())
    }

    /// `ω̄^i` as an element.
    pub fn form_element(&self, i: usize) -> GradedElement {
        GradedElement::monomial(self.form(i), GaussianRational::one())
    }

    /// Vector (algebra coordinates) → degree-one element.
    pub fn vector_from_coords(&self, v: &SparseVec) -> GradedElement {
        GradedElement::from_terms(v.iter().map(|(i, c)| (self.vector(i), c.clone())))
    }

    /// Inverse of [`Self::vector_from_coords`]; `None` unless `x` lies in
    /// `B^{1,0}`.
    pub fn vector_coords(&self, x: &GradedElement) -> Option<SparseVec> {
        if !x.is_homogeneous(1, 0) {
            return None;
        }
        Some(SparseVec::from_entries(x.terms().map(|(m, c)| {
            let pos = m.positions().next().expect("degree one");
            (self.algebra_index(pos), c.clone())
        })))
    }

    pub fn generator_label(&self, position: usize) -> String {
        let i = self.algebra_index(position);
        if position < self.n {
            self.spec.label(i).to_string()
        } else {
            self.spec.form_label(i)
        }
    }

    /// Looks up a generator by its vector or form label; `L*` is accepted
    /// as the form dual to the vector `L`.
    pub fn generator_by_label(&self, label: &str) -> Option<Monomial> {
        if let Some(i) = self.spec.index_of(label) {
            return Some(self.vector(i));
        }
        if let Some(base) = label.strip_suffix('*') {
            return self.spec.index_of(base).map(|i| self.form(i));
        }
        (0..self.n)
            .find(|&i| self.spec.form_label(i) == label)
            .map(|i| self.form(i))
    }

    pub fn block_basis(&self, p: usize, q: usize) -> Arc<BlockBasis> {
        let mut bases = self.bases.lock().expect("basis cache poisoned");
        bases
            .entry((p, q))
            .or_insert_with(|| Arc::new(BlockBasis::new(block_monomials(self.n, p, q))))
            .clone()
    }

    /// All monomials of total degree `deg`, blocks ordered by ascending `p`.
    pub fn degree_basis(&self, deg: usize) -> BlockBasis {
        let mut all = Vec::new();
        for p in 0..=deg.min(self.n) {
            let q = deg - p;
            if q <= self.n {
                all.extend(block_monomials(self.n, p, q));
            }
        }
        BlockBasis::new(all)
    }

    fn dbar_monomial_into(&self, m: Monomial, coeff: &GaussianRational, acc: &mut HashMap<Monomial, GaussianRational>) {
        for pos in m.positions() {
            if pos >= self.n {
                break;
            }
            let image = &self.dbar_images[pos];
            if image.is_empty() {
                continue;
            }
            let rest = m.without(pos);
            let sign_before = m.rank_of(pos) % 2 == 1;
            for (d, c) in image {
                // the image is even, so it moves to the front freely
                if let Some((neg, out)) = d.wedge(rest) {
                    let v = coeff * c;
                    add_into(acc, out, if neg != sign_before { -v } else { v });
                }
            }
        }
    }

    /// `∂̄x`.
    pub fn dbar(&self, x: &GradedElement) -> GradedElement {
        let mut acc = HashMap::new();
        for (m, c) in x.terms() {
            self.dbar_monomial_into(m, c, &mut acc);
        }
        collect(acc)
    }

    fn bracket_monomials_into(
        &self,
        a: Monomial,
        b: Monomial,
        coeff: &GaussianRational,
        acc: &mut HashMap<Monomial, GaussianRational>,
    ) {
        let width = 2 * self.n;
        // [a, b] = Σ (−1)^{i+j} [a_i, b_j] ∧ a_{≠i} ∧ b_{≠j}, ranks 1-based
        for (ri, pi) in a.positions().enumerate() {
            for (rj, pj) in b.positions().enumerate() {
                let gen = &self.brackets[pi * width + pj];
                if gen.is_empty() {
                    continue;
                }
                let Some((neg_rest, rest)) = a.without(pi).wedge(b.without(pj)) else {
                    continue;
                };
                let neg_ij = (ri + rj) % 2 == 1;
                for (g, c) in gen {
                    if let Some((neg_g, out)) = g.wedge(rest) {
                        let v = coeff * c;
                        let neg = neg_rest ^ neg_ij ^ neg_g;
                        add_into(acc, out, if neg { -v } else { v });
                    }
                }
            }
        }
    }

    /// The Schouten bracket `[a, b]`.
    pub fn schouten(&self, a: &GradedElement, b: &GradedElement) -> GradedElement {
        let mut acc = HashMap::new();
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                self.bracket_monomials_into(ma, mb, &(ca * cb), &mut acc);
            }
        }
        collect(acc)
    }

    pub fn wedge(&self, a: &GradedElement, b: &GradedElement) -> GradedElement {
        a.wedge(b)
    }

    /// `(∂̄ + ad_Λ + ad_Ω) m` summed into `acc`; used for total-complex
    /// assembly.
    pub(crate) fn total_monomial_into(
        &self,
        m: Monomial,
        lambda: &GradedElement,
        omega: Option<&GradedElement>,
        acc: &mut HashMap<Monomial, GaussianRational>,
    ) {
        let one = GaussianRational::one();
        self.dbar_monomial_into(m, &one, acc);
        for (l, c) in lambda.terms() {
            self.bracket_monomials_into(l, m, c, acc);
        }
        if let Some(omega) = omega {
            for (o, c) in omega.terms() {
                self.bracket_monomials_into(o, m, c, acc);
            }
        }
    }

    /// Applies `(∂̄ + ad_Λ + ad_Ω)` to a monomial.
    pub fn total_monomial(&self, m: Monomial, lambda: &GradedElement, omega: Option<&GradedElement>) -> GradedElement {
        let mut acc = HashMap::new();
        self.total_monomial_into(m, lambda, omega, &mut acc);
        collect(acc)
    }

    /// Checks that `Λ` is a holomorphic Poisson bivector: bidegree (2,0),
    /// `∂̄Λ = 0` and `[Λ, Λ] = 0`.
    pub fn validate_poisson(&self, lambda: &GradedElement) -> Result<(), SchoutenError> {
        if !lambda.is_homogeneous(2, 0) {
            return Err(SchoutenError::NotBidegree20(lambda.bidegrees().into_iter().collect()));
        }
        let d = self.dbar(lambda);
        if !d.is_zero() {
            return Err(SchoutenError::NotHolomorphic(self.format(&d)));
        }
        let sq = self.schouten(lambda, lambda);
        if !sq.is_zero() {
            return Err(SchoutenError::NotPoisson(self.format(&sq)));
        }
        Ok(())
    }

    /// Matrix of a monomial map from block `source` to block `target`.
    pub fn assemble_block<F>(&self, source: (usize, usize), target: (usize, usize), image: F) -> OperatorMatrix
    where
        F: Fn(Monomial) -> GradedElement,
    {
        let src = self.block_basis(source.0, source.1);
        let tgt = self.block_basis(target.0, target.1);
        let mut trip = Vec::new();
        for (col, &m) in src.monomials().iter().enumerate() {
            for (t, c) in image(m).terms() {
                let row = tgt
                    .index_of(t)
                    .unwrap_or_else(|| panic!("image of {m:?} leaves block {target:?}"));
                trip.push((row, col, c.clone()));
            }
        }
        OperatorMatrix {
            source,
            target,
            matrix: SparseMatrix::from_triplets(tgt.len(), src.len(), trip).expect("block indices in range"),
        }
    }

    /// The block of `∂̄: B^{p,q} → B^{p,q+1}` or `ad_Λ: B^{p,q} → B^{p+1,q}`.
    pub fn operator_block(
        &self,
        kind: OperatorKind,
        p: usize,
        q: usize,
        lambda: Option<&GradedElement>,
    ) -> Result<OperatorMatrix, SchoutenError> {
        match kind {
            OperatorKind::Dbar => Ok(self.assemble_block((p, q), (p, q + 1), |m| {
                let mut acc = HashMap::new();
                self.dbar_monomial_into(m, &GaussianRational::one(), &mut acc);
                collect(acc)
            })),
            OperatorKind::AdLambda => {
                let zero = GradedElement::zero();
                let lambda = lambda.unwrap_or(&zero);
                self.validate_poisson(lambda)?;
                Ok(self.ad_block(lambda, p, q))
            }
        }
    }

    fn ad_block(&self, lambda: &GradedElement, p: usize, q: usize) -> OperatorMatrix {
        self.assemble_block((p, q), (p + 1, q), |m| {
            let mut acc = HashMap::new();
            for (l, c) in lambda.terms() {
                self.bracket_monomials_into(l, m, c, &mut acc);
            }
            collect(acc)
        })
    }

    /// Human-readable form using generator labels, parseable back by
    /// [`crate::expr::parse_element`].
    pub fn format(&self, x: &GradedElement) -> String {
        if x.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in x.terms().enumerate() {
            let negative = c.re().is_negative() || (c.re().is_zero() && c.im().is_negative());
            let c = if negative { -c } else { c.clone() };
            match (i, negative) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            let labels: Vec<String> = m.positions().map(|p| self.generator_label(p)).collect();
            let mono = if labels.is_empty() {
                "1".to_string()
            } else {
                labels.join("^")
            };
            if c.is_one() {
                out.push_str(&mono);
            } else {
                let _ = write!(out, "({c}){mono}");
            }
        }
        out
    }
}

/// A validated Poisson bivector together with memoized operator blocks.
#[derive(Debug)]
pub struct PoissonComplex {
    algebra: Arc<SchoutenAlgebra>,
    lambda: GradedElement,
    blocks: RwLock<HashMap<(OperatorKind, usize, usize), Arc<OperatorMatrix>>>,
}

impl PoissonComplex {
    pub fn new(algebra: Arc<SchoutenAlgebra>, lambda: GradedElement) -> Result<Self, SchoutenError> {
        algebra.validate_poisson(&lambda)?;
        Ok(PoissonComplex {
            algebra,
            lambda,
            blocks: RwLock::new(HashMap::new()),
        })
    }

    pub fn algebra(&self) -> &Arc<SchoutenAlgebra> {
        &self.algebra
    }

    pub fn lambda(&self) -> &GradedElement {
        &self.lambda
    }

    /// The memoized block of `kind` on `B^{p,q}`.
    pub fn block(&self, kind: OperatorKind, p: usize, q: usize) -> Arc<OperatorMatrix> {
        let key = (kind, p, q);
        if let Some(b) = self.blocks.read().expect("block cache poisoned").get(&key) {
            return b.clone();
        }
        let built = Arc::new(match kind {
            OperatorKind::Dbar => self
                .algebra
                .operator_block(OperatorKind::Dbar, p, q, None)
                .expect("∂̄ blocks never fail"),
            OperatorKind::AdLambda => self.algebra.ad_block(&self.lambda, p, q),
        });
        self.blocks
            .write()
            .expect("block cache poisoned")
            .entry(key)
            .or_insert(built)
            .clone()
    }
}
