//! Exact row reduction over ℚ(i).
//!
//! Large systems go through [`EchelonBasis`], an incremental sparse row
//! echelon form whose column order is chosen by ascending column count (a
//! static Markowitz ordering: pivoting in sparse columns touches few rows and
//! keeps fill low). Blocks below [`DENSE_CUTOFF`] in both dimensions are
//! reduced densely. Pivot rows are always normalized to a leading `1`.

use super::{FieldError, GaussianRational, SparseMatrix, SparseVec};

/// Blocks with fewer rows and columns than this are reduced densely.
pub const DENSE_CUTOFF: usize = 64;

/// An incrementally built row echelon basis of a subspace of `dim`-space.
///
/// Every stored row has its pivot as its leading (smallest-index) entry,
/// normalized to one.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    dim: usize,
    pivot_of_col: Vec<Option<usize>>,
    rows: Vec<SparseVec>,
}

impl EchelonBasis {
    pub fn new(dim: usize) -> Self {
        EchelonBasis {
            dim,
            pivot_of_col: vec![None; dim],
            rows: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the stored rows; the result has no entry in any
    /// pivot column and is zero iff `v` lies in the span.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut v = v.clone();
        let mut pos = 0;
        while let Some(&(col, ref val)) = v.entry_at(pos) {
            match self.pivot_of_col.get(col).copied().flatten() {
                Some(r) => {
                    let factor = -val;
                    v.axpy(&factor, &self.rows[r]);
                    // the pivot row starts at `col`, so earlier entries are untouched
                    pos = v.lower_bound(col + 1);
                }
                None => pos += 1,
            }
        }
        v
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` to the basis. Returns the new pivot column, or `None` when
    /// `v` was already in the span.
    pub fn insert(&mut self, v: &SparseVec) -> Option<usize> {
        let mut reduced = self.reduce(v);
        let (col, lead) = reduced.leading()?;
        if col >= self.dim {
            self.grow(col + 1);
        }
        let inv = lead.inv().expect("leading entry is nonzero");
        reduced.scale(&inv);
        self.pivot_of_col[col] = Some(self.rows.len());
        self.rows.push(reduced);
        Some(col)
    }

    fn grow(&mut self, dim: usize) {
        self.dim = dim;
        self.pivot_of_col.resize(dim, None);
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows
            .iter()
            .map(|r| r.leading().expect("stored rows are nonzero").0)
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    /// Back-substitutes to reduced row echelon form: every pivot column is
    /// zero outside its own row.
    pub fn into_reduced(self) -> RowReduction {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&r| std::cmp::Reverse(self.rows[r].leading().unwrap().0));
        let mut rows: Vec<Option<SparseVec>> = self.rows.into_iter().map(Some).collect();
        let mut done: Vec<Option<SparseVec>> = vec![None; rows.len()];
        for &r in &order {
            let mut row = rows[r].take().unwrap();
            let pivot = row.leading().unwrap().0;
            let targets: Vec<(usize, GaussianRational)> = row
                .iter()
                .filter(|&(c, _)| c != pivot)
                .filter_map(|(c, v)| self.pivot_of_col[c].map(|pr| (pr, v.clone())))
                .collect();
            for (pr, v) in targets {
                let other = done[pr].as_ref().expect("higher pivots are reduced first");
                row.axpy(&-&v, other);
            }
            done[r] = Some(row);
        }
        let mut pivots: Vec<(usize, SparseVec)> = done
            .into_iter()
            .map(|r| {
                let r = r.unwrap();
                (r.leading().unwrap().0, r)
            })
            .collect();
        pivots.sort_by_key(|(c, _)| *c);
        RowReduction { cols: self.dim, pivots }
    }
}

/// A reduced row echelon form: `(pivot column, row)` pairs with a unit at
/// the pivot and zeros in every other pivot column.
#[derive(Clone, Debug)]
pub struct RowReduction {
    cols: usize,
    pivots: Vec<(usize, SparseVec)>,
}

impl RowReduction {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn pivots(&self) -> &[(usize, SparseVec)] {
        &self.pivots
    }

    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.cols];
        for (c, _) in &self.pivots {
            is_pivot[*c] = true;
        }
        (0..self.cols).filter(|&c| !is_pivot[c]).collect()
    }

    /// One null vector per free column.
    pub fn null_space(&self) -> Vec<SparseVec> {
        let free = self.free_columns();
        let mut slot = vec![usize::MAX; self.cols];
        for (k, &f) in free.iter().enumerate() {
            slot[f] = k;
        }
        let mut entries: Vec<Vec<(usize, GaussianRational)>> =
            free.iter().map(|&f| vec![(f, GaussianRational::one())]).collect();
        for (pc, row) in &self.pivots {
            for (c, v) in row.iter() {
                if c != *pc {
                    entries[slot[c]].push((*pc, -v));
                }
            }
        }
        entries.into_iter().map(SparseVec::from_entries).collect()
    }

    fn permuted_back(self, inverse: &[usize]) -> RowReduction {
        let mut pivots: Vec<(usize, SparseVec)> = self
            .pivots
            .into_iter()
            .map(|(c, row)| (inverse[c], row.permuted(inverse)))
            .collect();
        pivots.sort_by_key(|(c, _)| *c);
        RowReduction {
            cols: self.cols,
            pivots,
        }
    }
}

/// Column order for sparse elimination: ascending column count, ties by
/// index. Returns `(new_of_old, old_of_new)`.
fn sparsity_order(m: &SparseMatrix, pinned_last: Option<usize>) -> (Vec<usize>, Vec<usize>) {
    let width = m.cols();
    let mut counts = vec![0usize; width];
    for (_, c, _) in m.triplets() {
        counts[c] += 1;
    }
    let mut old_of_new: Vec<usize> = (0..width).collect();
    old_of_new.sort_by_key(|&c| (Some(c) == pinned_last, counts[c], c));
    let mut new_of_old = vec![0; width];
    for (new, &old) in old_of_new.iter().enumerate() {
        new_of_old[old] = new;
    }
    (new_of_old, old_of_new)
}

fn sparse_echelon(m: &SparseMatrix, pinned_last: Option<usize>) -> (EchelonBasis, Vec<usize>) {
    let (new_of_old, old_of_new) = sparsity_order(m, pinned_last);
    let mut rows: Vec<SparseVec> = m.row_vectors().iter().map(|r| r.permuted(&new_of_old)).collect();
    rows.sort_by_key(SparseVec::nnz);
    let mut basis = EchelonBasis::new(m.cols());
    for row in &rows {
        if basis.rank() == m.cols() {
            break;
        }
        basis.insert(row);
    }
    (basis, old_of_new)
}

fn dense_reduce(m: &SparseMatrix) -> RowReduction {
    let mut a = m.to_dense();
    let (rows, cols) = (m.rows(), m.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].inv().expect("pivot is nonzero");
        for x in a[r].iter_mut().skip(c) {
            *x = &*x * &inv;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = -&row[c];
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !p.is_zero() {
                    x.add_mul(&factor, p);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    RowReduction {
        cols,
        pivots: pivots
            .into_iter()
            .enumerate()
            .map(|(i, c)| (c, SparseVec::from_dense(&a[i])))
            .collect(),
    }
}

fn is_small(m: &SparseMatrix) -> bool {
    m.rows() < DENSE_CUTOFF && m.cols() < DENSE_CUTOFF
}

/// Reduced row echelon form of `m`.
pub fn row_reduce(m: &SparseMatrix) -> RowReduction {
    if is_small(m) {
        return dense_reduce(m);
    }
    let (basis, old_of_new) = sparse_echelon(m, None);
    basis.into_reduced().permuted_back(&old_of_new)
}

/// Exact rank over ℚ(i).
pub fn rank(m: &SparseMatrix) -> usize {
    if m.rows() == 0 || m.cols() == 0 {
        return 0;
    }
    if is_small(m) {
        return dense_reduce(m).rank();
    }
    sparse_echelon(m, None).0.rank()
}

/// A basis of the null space: exactly `cols − rank` independent vectors.
pub fn kernel_basis(m: &SparseMatrix) -> Vec<SparseVec> {
    row_reduce(m).null_space()
}

/// Some `x` with `m·x = b`, or `None` when the system is inconsistent.
/// Free variables are set to zero.
pub fn solve(m: &SparseMatrix, b: &[GaussianRational]) -> Result<Option<Vec<GaussianRational>>, FieldError> {
    if b.len() != m.rows() {
        return Err(FieldError::DimensionMismatch {
            expected: m.rows(),
            found: b.len(),
        });
    }
    let aug_col = m.cols();
    let rows: Vec<SparseVec> = m
        .row_vectors()
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            if !rhs.is_zero() {
                r.axpy(
                    &GaussianRational::one(),
                    &SparseVec::from_entries([(aug_col, rhs.clone())]),
                );
            }
            r
        })
        .collect();
    let augmented = SparseMatrix::from_rows(aug_col + 1, rows)?;
    let reduced = if is_small(&augmented) {
        dense_reduce(&augmented)
    } else {
        let (basis, old_of_new) = sparse_echelon(&augmented, Some(aug_col));
        basis.into_reduced().permuted_back(&old_of_new)
    };
    let mut x = vec![GaussianRational::zero(); m.cols()];
    for (pc, row) in reduced.pivots() {
        if *pc == aug_col {
            return Ok(None);
        }
        if let Some(v) = row.get(aug_col) {
            x[*pc] = v.clone();
        }
    }
    Ok(Some(x))
}
