//! Nilpotent Lie algebras with an abelian complex structure, described by
//! the complex structure constants of the mixed brackets
//!
//! ```text
//! [X̄_k, X_j] = Σ_m A^m_{kj} X_m − Σ_m conj(A^m_{jk}) X̄_m
//! ```
//!
//! with `[X_i, X_j] = [X̄_i, X̄_j] = 0`. Only `A` is stored; the (0,1)
//! coefficients are derived, so every spec is real by construction.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::field::{kernel_basis, row_reduce, EchelonBasis, GaussianRational, SparseMatrix, SparseVec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("Jacobi identity fails on ({0}, {1}, {2})")]
    JacobiViolation(String, String, String),
    #[error("lower central series does not reach zero (stalls at dimension {0})")]
    NotNilpotent(usize),
    #[error("structure constant index ({k}, {j}, {m}) out of range for n = {n}")]
    IndexOutOfRange { k: usize, j: usize, m: usize, n: usize },
    #[error("duplicate structure constant for (k, j, m) = ({k}, {j}, {m})")]
    DuplicateConstant { k: usize, j: usize, m: usize },
    #[error("expected {expected} basis labels, found {found}")]
    LabelCount { expected: usize, found: usize },
    #[error("invalid basis label {0:?}")]
    InvalidLabel(String),
    #[error("center of g^(1,0) has dimension {0}, expected 1")]
    CenterDimensionNotOne(usize),
    #[error("basis vector {0} does not span the center of g^(1,0)")]
    NotCenterVector(String),
}

/// A nilpotent Lie algebra with abelian complex structure, by its
/// `[X̄_k, X_j]` structure constants. Indices are 0-based here.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraSpec {
    name: String,
    labels: Vec<String>,
    constants: BTreeMap<(usize, usize, usize), GaussianRational>,
}

impl AlgebraSpec {
    /// `constants` maps 0-based `(k, j, m)` to `A^m_{kj}`. Zero values are
    /// dropped; repeated triples are rejected.
    pub fn new<I>(name: impl Into<String>, labels: Vec<String>, constants: I) -> Result<Self, AlgebraError>
    where
        I: IntoIterator<Item = ((usize, usize, usize), GaussianRational)>,
    {
        let n = labels.len();
        for (i, l) in labels.iter().enumerate() {
            let valid = l.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                && l.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid || labels[..i].contains(l) {
                return Err(AlgebraError::InvalidLabel(l.clone()));
            }
        }
        let mut map = BTreeMap::new();
        for ((k, j, m), v) in constants {
            if k >= n || j >= n || m >= n {
                return Err(AlgebraError::IndexOutOfRange {
                    k: k + 1,
                    j: j + 1,
                    m: m + 1,
                    n,
                });
            }
            if map.insert((k, j, m), v).is_some() {
                return Err(AlgebraError::DuplicateConstant {
                    k: k + 1,
                    j: j + 1,
                    m: m + 1,
                });
            }
        }
        map.retain(|_, v: &mut GaussianRational| !v.is_zero());
        Ok(AlgebraSpec {
            name: name.into(),
            labels,
            constants: map,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Complex dimension of g^(1,0).
    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Name of the (0,1)-covector dual to `X̄_i`: `V ↦ rho_bar`,
    /// `T3 ↦ w3_bar`, anything else `L ↦ l_bar`.
    pub fn form_label(&self, i: usize) -> String {
        let l = &self.labels[i];
        if l == "V" {
            return "rho_bar".to_string();
        }
        if let Some(digits) = l.strip_prefix('T') {
            if !digits.is_empty() && digits.chars().all(|c| c.is_ascii_digit()) {
                return format!("w{digits}_bar");
            }
        }
        format!("{}_bar", l.to_ascii_lowercase())
    }

    pub fn constants(&self) -> impl Iterator<Item = (&(usize, usize, usize), &GaussianRational)> + '_ {
        self.constants.iter()
    }

    /// `A^m_{kj}`.
    pub fn a(&self, k: usize, j: usize, m: usize) -> GaussianRational {
        self.constants.get(&(k, j, m)).cloned().unwrap_or_default()
    }

    /// `B^m_{kj} = −conj(A^m_{jk})`, the X̄_m coefficient of `[X̄_k, X_j]`.
    pub fn b(&self, k: usize, j: usize, m: usize) -> GaussianRational {
        -self.a(j, k, m).conj()
    }

    /// Real dimension of the algebra.
    pub fn real_dim(&self) -> usize {
        2 * self.n()
    }

    fn complex_label(&self, idx: usize) -> String {
        let n = self.n();
        if idx < n {
            self.labels[idx].clone()
        } else {
            format!("{}_bar", self.labels[idx - n])
        }
    }

    /// Bracket of two basis vectors of g ⊗ ℂ. Index `i < n` is `X_i`,
    /// `n + i` is `X̄_i`; the result is in the same coordinates.
    pub fn bracket_basis(&self, u: usize, v: usize) -> SparseVec {
        let n = self.n();
        match (u < n, v < n) {
            (true, true) | (false, false) => SparseVec::new(),
            (false, true) => self.bar_bracket(u - n, v),
            (true, false) => {
                let mut out = self.bar_bracket(v - n, u);
                out.scale(&GaussianRational::from_int(-1));
                out
            }
        }
    }

    /// `[X̄_k, X_j]`.
    fn bar_bracket(&self, k: usize, j: usize) -> SparseVec {
        let n = self.n();
        SparseVec::from_entries((0..n).flat_map(|m| [(m, self.a(k, j, m)), (n + m, self.b(k, j, m))]))
    }

    pub fn bracket(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (u, a) in x.iter() {
            for (v, b) in y.iter() {
                let coeff = a * b;
                out.axpy(&coeff, &self.bracket_basis(u, v));
            }
        }
        out
    }
}

/// One graded piece `t_ℓ^(1,0)` of g^(1,0).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layer {
    pub level: usize,
    /// Basis vectors in the `X_1..X_n` coordinates.
    pub basis: Vec<SparseVec>,
}

impl Layer {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// The basis as coordinate indices, when every basis vector is a unit
    /// vector.
    pub fn indices(&self) -> Option<Vec<usize>> {
        unit_indices(&self.basis)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        let mut e = EchelonBasis::new(0);
        for b in &self.basis {
            e.insert(b);
        }
        e.contains(v)
    }
}

fn unit_indices(basis: &[SparseVec]) -> Option<Vec<usize>> {
    basis
        .iter()
        .map(|v| match v.entries() {
            [(i, c)] if c.is_one() => Some(*i),
            _ => None,
        })
        .collect()
}

/// Result of [`validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureReport {
    /// Nilpotency class `k`: `g^k = 0 ≠ g^(k−1)` with `g^0 = g`.
    pub step: usize,
    /// Basis of c^(1,0) in the `X_1..X_n` coordinates.
    pub center: Vec<SparseVec>,
    /// `t_1, …, t_k`, with `t_k` the top layer.
    pub layers: Vec<Layer>,
    pub jacobi_ok: bool,
    /// Complex dimensions of the lower central series `g^0 ⊃ g^1 ⊃ … ⊃ 0`.
    pub lcs_dims: Vec<usize>,
}

impl StructureReport {
    pub fn dim_center(&self) -> usize {
        self.center.len()
    }

    pub fn center_indices(&self) -> Option<Vec<usize>> {
        unit_indices(&self.center)
    }

    /// The layer `t_ℓ` (1-based level).
    pub fn layer(&self, level: usize) -> Option<&Layer> {
        self.layers.get(level.checked_sub(1)?)
    }

    /// Index of the basis vector spanning a one-dimensional c^(1,0).
    pub fn center_vector(&self) -> Result<usize, AlgebraError> {
        if self.center.len() != 1 {
            return Err(AlgebraError::CenterDimensionNotOne(self.center.len()));
        }
        match self.center_indices() {
            Some(idx) => Ok(idx[0]),
            None => Err(AlgebraError::NotCenterVector(format!("{:?}", self.center[0]))),
        }
    }
}

fn check_jacobi(spec: &AlgebraSpec) -> Result<(), AlgebraError> {
    let dim = 2 * spec.n();
    let mut table = vec![SparseVec::new(); dim * dim];
    for u in 0..dim {
        for v in 0..dim {
            table[u * dim + v] = spec.bracket_basis(u, v);
        }
    }
    let bracket_with = |x: &SparseVec, w: usize| {
        let mut out = SparseVec::new();
        for (u, c) in x.iter() {
            out.axpy(c, &table[u * dim + w]);
        }
        out
    };
    for a in 0..dim {
        for b in a + 1..dim {
            for c in b + 1..dim {
                // [[a,b],c] + [[b,c],a] + [[c,a],b]
                let mut sum = bracket_with(&table[a * dim + b], c);
                sum.axpy(&GaussianRational::one(), &bracket_with(&table[b * dim + c], a));
                sum.axpy(&GaussianRational::one(), &bracket_with(&table[c * dim + a], b));
                if !sum.is_zero() {
                    return Err(AlgebraError::JacobiViolation(
                        spec.complex_label(a),
                        spec.complex_label(b),
                        spec.complex_label(c),
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Bases of the lower central series of g ⊗ ℂ, from `g^0 = g` down to the
/// first zero term.
fn lower_central_series(spec: &AlgebraSpec) -> Result<Vec<Vec<SparseVec>>, AlgebraError> {
    let dim = 2 * spec.n();
    let mut series = vec![(0..dim).map(SparseVec::unit).collect::<Vec<_>>()];
    loop {
        let prev = series.last().unwrap();
        if prev.is_empty() {
            return Ok(series);
        }
        let mut next = EchelonBasis::new(dim);
        for x in prev {
            for w in 0..dim {
                next.insert(&spec.bracket(x, &SparseVec::unit(w)));
            }
        }
        if next.rank() == prev.len() || series.len() > dim + 1 {
            return Err(AlgebraError::NotNilpotent(next.rank()));
        }
        series.push(next.rows().to_vec());
    }
}

/// c^(1,0): the (1,0)-vectors commuting with every X̄_k.
fn center_10(spec: &AlgebraSpec) -> Vec<SparseVec> {
    let n = spec.n();
    // rows (k, component), columns j: the coefficients of [X̄_k, X_j]
    let mut trip = Vec::new();
    for k in 0..n {
        for j in 0..n {
            for (comp, v) in spec.bracket_basis(n + k, j).iter() {
                trip.push((k * 2 * n + comp, j, v.clone()));
            }
        }
    }
    let m = SparseMatrix::from_triplets(2 * n * n, n, trip).expect("indices in range");
    canonical_basis(n, &kernel_basis(&m))
}

/// Reduced row echelon basis of the span of `vectors` (natural column
/// order), so that coordinate subspaces come out as unit vectors.
fn canonical_basis(dim: usize, vectors: &[SparseVec]) -> Vec<SparseVec> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let m = SparseMatrix::from_rows(dim, vectors.to_vec()).expect("vectors fit the dimension");
    row_reduce(&m).pivots().iter().map(|(_, r)| r.clone()).collect()
}

fn project_10(n: usize, v: &SparseVec) -> SparseVec {
    SparseVec::from_entries(v.iter().filter(|(i, _)| *i < n).map(|(i, c)| (i, c.clone())))
}

fn compute_layers(n: usize, series: &[Vec<SparseVec>]) -> Vec<Layer> {
    // g_J^{ℓ,(1,0)} is the (1,0)-projection of g^ℓ
    let filtration: Vec<Vec<SparseVec>> = series
        .iter()
        .map(|g| {
            let projected: Vec<SparseVec> = g.iter().map(|v| project_10(n, v)).collect();
            canonical_basis(n, &projected)
        })
        .collect();
    let step = series.len() - 1;
    (1..=step)
        .map(|level| {
            let mut span = EchelonBasis::new(n);
            for v in &filtration[level] {
                span.insert(v);
            }
            let basis = filtration[level - 1]
                .iter()
                .filter(|v| span.insert(v).is_some())
                .cloned()
                .collect();
            Layer { level, basis }
        })
        .collect()
}

/// Checks the Jacobi identity on g ⊗ ℂ, computes the lower central series,
/// the nilpotency step, the center of g^(1,0) and the layers `t_ℓ`.
pub fn validate(spec: &AlgebraSpec) -> Result<StructureReport, AlgebraError> {
    check_jacobi(spec)?;
    let series = lower_central_series(spec)?;
    let step = series.len() - 1;
    let n = spec.n();
    Ok(StructureReport {
        step,
        center: center_10(spec),
        layers: compute_layers(n, &series),
        jacobi_ok: true,
        lcs_dims: series.iter().map(Vec::len).collect(),
    })
}

/// The layers `t_1, …, t_k` of g^(1,0).
pub fn layers(spec: &AlgebraSpec) -> Result<Vec<Layer>, AlgebraError> {
    Ok(validate(spec)?.layers)
}

/// Indices of t^(1,0), the complement of the center vector `v_index`.
pub fn t_indices(spec: &AlgebraSpec, v_index: usize) -> Vec<usize> {
    (0..spec.n()).filter(|&i| i != v_index).collect()
}

/// The matrix of `dρ` as a map t^(1,0) → t^*(0,1): entry `(b, j)` is
/// `dρ(X_j, X̄_b) = A^V_{bj}`, rows and columns over [`t_indices`].
pub fn d_rho_matrix(
    spec: &AlgebraSpec,
    report: &StructureReport,
    v_index: usize,
) -> Result<SparseMatrix, AlgebraError> {
    let v = report.center_vector()?;
    if v != v_index {
        return Err(AlgebraError::NotCenterVector(spec.label(v_index).to_string()));
    }
    let t = t_indices(spec, v);
    let mut trip = Vec::new();
    for (r, &b) in t.iter().enumerate() {
        for (c, &j) in t.iter().enumerate() {
            trip.push((r, c, spec.a(b, j, v)));
        }
    }
    Ok(SparseMatrix::from_triplets(t.len(), t.len(), trip).expect("indices in range"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rank;

    fn labels(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn heisenberg_ext_1() -> AlgebraSpec {
        AlgebraSpec::new("h", labels(&["T1", "V"]), [((0, 0, 1), GaussianRational::imag(-1, 2))]).unwrap()
    }

    fn w6() -> AlgebraSpec {
        AlgebraSpec::new(
            "w6",
            labels(&["T1", "T2", "V"]),
            [((0, 1, 2), GaussianRational::real(-1, 2))],
        )
        .unwrap()
    }

    #[test]
    fn torus_is_abelian() {
        let spec = AlgebraSpec::new("torus", labels(&["X1", "X2"]), []).unwrap();
        let r = validate(&spec).unwrap();
        assert_eq!(r.step, 1);
        assert_eq!(r.dim_center(), 2);
        assert_eq!(r.layers.len(), 1);
        assert_eq!(r.layers[0].indices(), Some(vec![0, 1]));
    }

    #[test]
    fn heisenberg_extension_structure() {
        let spec = heisenberg_ext_1();
        let r = validate(&spec).unwrap();
        assert_eq!(r.step, 2);
        assert_eq!(r.center_indices(), Some(vec![1]));
        // g^1 is spanned by the real vector V + V̄
        assert_eq!(r.lcs_dims, vec![4, 1, 0]);
        let d = d_rho_matrix(&spec, &r, 1).unwrap();
        assert_eq!(d.to_dense(), vec![vec![GaussianRational::imag(-1, 2)]]);
    }

    #[test]
    fn w6_layers_and_d_rho() {
        let spec = w6();
        let r = validate(&spec).unwrap();
        assert_eq!(r.step, 2);
        assert_eq!(r.layers[0].indices(), Some(vec![0, 1]));
        assert_eq!(r.layers[1].indices(), Some(vec![2]));
        let d = d_rho_matrix(&spec, &r, 2).unwrap();
        let z = GaussianRational::zero();
        assert_eq!(
            d.to_dense(),
            vec![vec![z.clone(), GaussianRational::real(-1, 2)], vec![z.clone(), z]]
        );
        assert_eq!(rank(&d), 1);
        assert!(matches!(
            d_rho_matrix(&spec, &r, 0),
            Err(AlgebraError::NotCenterVector(_))
        ));
    }

    #[test]
    fn self_bracket_not_nilpotent() {
        // [X̄_1, X_1] = X_1 − X̄_1 reproduces itself under bracketing
        let spec = AlgebraSpec::new("bad", labels(&["X1"]), [((0, 0, 0), GaussianRational::one())]).unwrap();
        assert_eq!(validate(&spec), Err(AlgebraError::NotNilpotent(1)));
    }

    #[test]
    fn jacobi_violation_detected() {
        let spec = AlgebraSpec::new(
            "bad",
            labels(&["X1", "X2", "X3"]),
            [
                ((0, 0, 1), GaussianRational::one()),
                ((1, 0, 2), GaussianRational::one()),
                ((1, 1, 2), GaussianRational::one()),
            ],
        )
        .unwrap();
        assert!(matches!(validate(&spec), Err(AlgebraError::JacobiViolation(..))));
    }

    #[test]
    fn three_step_layers() {
        let spec = AlgebraSpec::new(
            "three",
            labels(&["X1", "X2", "X3"]),
            [
                ((0, 0, 1), GaussianRational::one()),
                ((0, 1, 2), GaussianRational::one()),
                ((1, 0, 2), GaussianRational::real(2, 1)),
            ],
        )
        .unwrap();
        let r = validate(&spec).unwrap();
        assert_eq!(r.step, 3);
        assert_eq!(r.center_indices(), Some(vec![2]));
        let idx: Vec<_> = r.layers.iter().map(|l| l.indices().unwrap()).collect();
        assert_eq!(idx, vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn constructor_rejects_bad_input() {
        assert!(matches!(
            AlgebraSpec::new("x", labels(&["A"]), [((0, 1, 0), GaussianRational::one())]),
            Err(AlgebraError::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            AlgebraSpec::new("x", labels(&["A", "A"]), []),
            Err(AlgebraError::InvalidLabel(_))
        ));
        assert!(matches!(
            AlgebraSpec::new(
                "x",
                labels(&["A", "B"]),
                [
                    ((0, 0, 1), GaussianRational::one()),
                    ((0, 0, 1), GaussianRational::one())
                ]
            ),
            Err(AlgebraError::DuplicateConstant { .. })
        ));
    }

    #[test]
    fn form_labels() {
        let spec = AlgebraSpec::new("x", labels(&["S1", "T12", "V"]), []).unwrap();
        assert_eq!(spec.form_label(0), "s1_bar");
        assert_eq!(spec.form_label(1), "w12_bar");
        assert_eq!(spec.form_label(2), "rho_bar");
    }
}
