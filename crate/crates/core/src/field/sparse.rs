use std::fmt;

use super::{FieldError, GaussianRational};

/// A sparse vector: `(index, value)` pairs sorted by index, no stored zeros.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct SparseVec {
    entries: Vec<(usize, GaussianRational)>,
}

impl SparseVec {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a vector from unsorted entries, summing repeated indices and
    /// dropping zeros.
    pub fn from_entries<I: IntoIterator<Item = (usize, GaussianRational)>>(entries: I) -> Self {
        let mut raw: Vec<(usize, GaussianRational)> = entries.into_iter().collect();
        raw.sort_by_key(|(i, _)| *i);
        let mut out: Vec<(usize, GaussianRational)> = Vec::with_capacity(raw.len());
        for (i, v) in raw {
            match out.last_mut() {
                Some((j, acc)) if *j == i => *acc += &v,
                _ => out.push((i, v)),
            }
        }
        out.retain(|(_, v)| !v.is_zero());
        SparseVec { entries: out }
    }

    pub fn from_dense(values: &[GaussianRational]) -> Self {
        SparseVec {
            entries: values
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, v)| (i, v.clone()))
                .collect(),
        }
    }

    pub fn unit(index: usize) -> Self {
        SparseVec {
            entries: vec![(index, GaussianRational::one())],
        }
    }

    pub fn to_dense(&self, len: usize) -> Vec<GaussianRational> {
        let mut out = vec![GaussianRational::zero(); len];
        for (i, v) in &self.entries {
            out[*i] = v.clone();
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &GaussianRational)> + '_ {
        self.entries.iter().map(|(i, v)| (*i, v))
    }

    pub fn entries(&self) -> &[(usize, GaussianRational)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn leading(&self) -> Option<(usize, &GaussianRational)> {
        self.entries.first().map(|(i, v)| (*i, v))
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|(i, _)| *i)
    }

    pub fn get(&self, index: usize) -> Option<&GaussianRational> {
        self.entries
            .binary_search_by_key(&index, |(i, _)| *i)
            .ok()
            .map(|pos| &self.entries[pos].1)
    }

    /// Position of the first entry with index `>= index`.
    pub(crate) fn lower_bound(&self, index: usize) -> usize {
        self.entries.partition_point(|(i, _)| *i < index)
    }

    pub(crate) fn entry_at(&self, pos: usize) -> Option<&(usize, GaussianRational)> {
        self.entries.get(pos)
    }

    pub fn scale(&mut self, factor: &GaussianRational) {
        if factor.is_zero() {
            self.entries.clear();
            return;
        }
        for (_, v) in &mut self.entries {
            *v = &*v * factor;
        }
    }

    pub fn scaled(&self, factor: &GaussianRational) -> Self {
        let mut out = self.clone();
        out.scale(factor);
        out
    }

    /// `self += alpha * other`, as a sorted merge.
    pub fn axpy(&mut self, alpha: &GaussianRational, other: &SparseVec) {
        if alpha.is_zero() || other.is_zero() {
            return;
        }
        let mut merged = Vec::with_capacity(self.entries.len() + other.entries.len());
        let mut a = std::mem::take(&mut self.entries).into_iter().peekable();
        let mut b = other.entries.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (Some((i, _)), Some((j, _))) if i == j => {
                    let (i, mut v) = a.next().unwrap();
                    let (_, w) = b.next().unwrap();
                    v.add_mul(alpha, w);
                    if !v.is_zero() {
                        merged.push((i, v));
                    }
                }
                (Some((i, _)), Some((j, _))) if i < j => merged.push(a.next().unwrap()),
                (Some(_), Some(_)) | (None, Some(_)) => {
                    let (j, w) = b.next().unwrap();
                    merged.push((*j, alpha * w));
                }
                (Some(_), None) => merged.push(a.next().unwrap()),
                (None, None) => break,
            }
        }
        self.entries = merged;
    }

    /// Relabels every index through `map`; the result is re-sorted.
    pub fn permuted(&self, map: &[usize]) -> Self {
        let mut entries: Vec<_> = self.entries.iter().map(|(i, v)| (map[*i], v.clone())).collect();
        entries.sort_by_key(|(i, _)| *i);
        SparseVec { entries }
    }

    pub fn dot_dense(&self, dense: &[GaussianRational]) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        for (i, v) in &self.entries {
            acc.add_mul(v, &dense[*i]);
        }
        acc
    }
}

impl fmt::Debug for SparseVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.entries.iter().map(|(i, v)| (i, v))).finish()
    }
}

/// A sparse matrix stored by rows; no stored zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            data: vec![SparseVec::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix {
            rows: n,
            cols: n,
            data: (0..n).map(SparseVec::unit).collect(),
        }
    }

    /// Builds a matrix from `(row, col, value)` triplets. Repeated positions
    /// are summed; an index outside the shape is an error.
    pub fn from_triplets<I>(rows: usize, cols: usize, triplets: I) -> Result<Self, FieldError>
    where
        I: IntoIterator<Item = (usize, usize, GaussianRational)>,
    {
        let mut buckets: Vec<Vec<(usize, GaussianRational)>> = vec![Vec::new(); rows];
        for (r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(FieldError::IndexOutOfRange {
                    row: r,
                    col: c,
                    rows,
                    cols,
                });
            }
            buckets[r].push((c, v));
        }
        Ok(SparseMatrix {
            rows,
            cols,
            data: buckets.into_iter().map(SparseVec::from_entries).collect(),
        })
    }

    pub fn from_rows(cols: usize, rows: Vec<SparseVec>) -> Result<Self, FieldError> {
        for (r, row) in rows.iter().enumerate() {
            if let Some(c) = row.max_index() {
                if c >= cols {
                    return Err(FieldError::IndexOutOfRange {
                        row: r,
                        col: c,
                        rows: rows.len(),
                        cols,
                    });
                }
            }
        }
        Ok(SparseMatrix {
            rows: rows.len(),
            cols,
            data: rows,
        })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[SparseVec]) -> Result<Self, FieldError> {
        Self::from_triplets(
            rows,
            columns.len(),
            columns
                .iter()
                .enumerate()
                .flat_map(|(c, col)| col.iter().map(move |(r, v)| (r, c, v.clone()))),
        )
    }

    pub fn from_dense(values: &[Vec<GaussianRational>]) -> Result<Self, FieldError> {
        let cols = values.first().map_or(0, Vec::len);
        if values.iter().any(|r| r.len() != cols) {
            return Err(FieldError::DimensionMismatch {
                expected: cols,
                found: values.iter().map(Vec::len).find(|&l| l != cols).unwrap_or(0),
            });
        }
        Ok(SparseMatrix {
            rows: values.len(),
            cols,
            data: values.iter().map(|r| SparseVec::from_dense(r)).collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &SparseVec {
        &self.data[r]
    }

    pub fn row_vectors(&self) -> &[SparseVec] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> GaussianRational {
        self.data[r].get(c).cloned().unwrap_or_default()
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(SparseVec::nnz).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(SparseVec::is_zero)
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &GaussianRational)> + '_ {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, c, v)))
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut buckets: Vec<Vec<(usize, GaussianRational)>> = vec![Vec::new(); self.cols];
        for (r, c, v) in self.triplets() {
            buckets[c].push((r, v.clone()));
        }
        SparseMatrix {
            rows: self.cols,
            cols: self.rows,
            // rows were visited in order, so each bucket is already sorted
            data: buckets.into_iter().map(|entries| SparseVec { entries }).collect(),
        }
    }

    /// The columns of the matrix as sparse vectors of length `rows`.
    pub fn columns(&self) -> Vec<SparseVec> {
        self.transpose().data
    }

    pub fn to_dense(&self) -> Vec<Vec<GaussianRational>> {
        self.data.iter().map(|r| r.to_dense(self.cols)).collect()
    }

    pub fn mul_vec(&self, x: &[GaussianRational]) -> Result<Vec<GaussianRational>, FieldError> {
        if x.len() != self.cols {
            return Err(FieldError::DimensionMismatch {
                expected: self.cols,
                found: x.len(),
            });
        }
        Ok(self.data.iter().map(|row| row.dot_dense(x)).collect())
    }

    /// Image of a sparse column vector.
    pub fn apply(&self, x: &SparseVec) -> SparseVec {
        let t = self.transpose();
        let mut out = SparseVec::new();
        for (c, v) in x.iter() {
            out.axpy(v, &t.data[c]);
        }
        out
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &SparseMatrix) -> Result<SparseMatrix, FieldError> {
        if self.cols != rhs.rows {
            return Err(FieldError::DimensionMismatch {
                expected: self.cols,
                found: rhs.rows,
            });
        }
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut out = SparseVec::new();
                for (k, v) in row.iter() {
                    out.axpy(v, &rhs.data[k]);
                }
                out
            })
            .collect();
        Ok(SparseMatrix {
            rows: self.rows,
            cols: rhs.cols,
            data,
        })
    }

    pub fn add(&self, rhs: &SparseMatrix) -> Result<SparseMatrix, FieldError> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(FieldError::DimensionMismatch {
                expected: self.rows * self.cols,
                found: rhs.rows * rhs.cols,
            });
        }
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| {
                let mut out = a.clone();
                out.axpy(&GaussianRational::one(), b);
                out
            })
            .collect();
        Ok(SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }
}

impl fmt::Debug for SparseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SparseMatrix {}x{} [", self.rows, self.cols)?;
        for (r, row) in self.data.iter().enumerate() {
            if !row.is_zero() {
                writeln!(f, "  {r}: {row:?}")?;
            }
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> GaussianRational {
        GaussianRational::real(n, d)
    }

    #[test]
    fn from_entries_merges_and_drops_zeros() {
        let v = SparseVec::from_entries(vec![(3, q(1, 2)), (1, q(1, 1)), (3, q(-1, 2))]);
        assert_eq!(v.entries(), &[(1, q(1, 1))]);
    }

    #[test]
    fn axpy_cancels() {
        let mut a = SparseVec::from_entries(vec![(0, q(1, 1)), (2, q(2, 1))]);
        let b = SparseVec::from_entries(vec![(2, q(1, 1)), (5, q(1, 3))]);
        a.axpy(&q(-2, 1), &b);
        assert_eq!(a.entries(), &[(0, q(1, 1)), (5, q(-2, 3))]);
    }

    #[test]
    fn out_of_range_triplet_rejected() {
        let err = SparseMatrix::from_triplets(2, 2, vec![(0, 2, q(1, 1))]).unwrap_err();
        assert!(matches!(err, FieldError::IndexOutOfRange { .. }));
    }

    #[test]
    fn no_stored_zeros() {
        let m = SparseMatrix::from_triplets(2, 2, vec![(0, 0, q(0, 1)), (1, 1, q(1, 1))]).unwrap();
        assert_eq!(m.nnz(), 1);
    }

    #[test]
    fn product_and_transpose() {
        let a = SparseMatrix::from_dense(&[vec![q(1, 1), q(2, 1)], vec![q(0, 1), q(1, 1)]]).unwrap();
        let b = a.transpose();
        let p = a.mul(&b).unwrap();
        assert_eq!(p.to_dense(), vec![vec![q(5, 1), q(2, 1)], vec![q(2, 1), q(1, 1)]]);
        let x = SparseVec::from_entries(vec![(1, q(1, 1))]);
        assert_eq!(a.apply(&x), SparseVec::from_entries(vec![(0, q(2, 1)), (1, q(1, 1))]));
    }
}
