//! Coordinate-format sparse matrices.
//!
//! Entries are kept as `(row, col, value)` triplets sorted by `(row, col)`,
//! with no duplicates and no explicit zeros. That ordering is also the
//! serialized form, so two equal matrices always print identically.

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Entry type of a [`SparseMatrix`].
pub trait Scalar:
    Copy + Debug + PartialEq + PartialOrd + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self>
{
    fn zero() -> Self;
    fn abs(self) -> Self;
    fn to_f64(self) -> f64;

    fn is_zero(self) -> bool {
        self == Self::zero()
    }
}

impl Scalar for i64 {
    fn zero() -> Self {
        0
    }
    fn abs(self) -> Self {
        i64::abs(self)
    }
    fn to_f64(self) -> f64 {
        self as f64
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn abs(self) -> Self {
        f64::abs(self)
    }
    fn to_f64(self) -> f64 {
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SparseMatrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, T)>,
}

impl<T: Scalar> SparseMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, entries: Vec::new() }
    }

    /// Builds a matrix from unordered triplets. Repeated coordinates are
    /// summed and zero results dropped.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, T)>,
    ) -> Result<Self> {
        let mut acc: BTreeMap<(usize, usize), T> = BTreeMap::new();
        for (r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(Error::shape(format!("index within {rows}x{cols}"), format!("({r}, {c})")));
            }
            acc.entry((r, c)).and_modify(|x| *x = *x + v).or_insert(v);
        }
        let entries = acc.into_iter().filter(|(_, v)| !v.is_zero()).map(|((r, c), v)| (r, c, v)).collect();
        Ok(SparseMatrix { rows, cols, entries })
    }

    pub fn from_dense(dense: &[Vec<T>]) -> Result<Self> {
        let rows = dense.len();
        let cols = dense.first().map_or(0, Vec::len);
        if dense.iter().any(|r| r.len() != cols) {
            return Err(Error::malformed("ragged dense matrix"));
        }
        let triplets =
            dense.iter().enumerate().flat_map(|(r, row)| row.iter().enumerate().map(move |(c, &v)| (r, c, v)));
        Self::from_triplets(rows, cols, triplets)
    }

    pub fn identity(n: usize, one: T) -> Self {
        SparseMatrix { rows: n, cols: n, entries: (0..n).map(|i| (i, i, one)).collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn triplets(&self) -> &[(usize, usize, T)] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> T {
        match self.entries.binary_search_by(|&(r, c, _)| (r, c).cmp(&(row, col))) {
            Ok(i) => self.entries[i].2,
            Err(_) => T::zero(),
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let mut out = vec![vec![T::zero(); self.cols]; self.rows];
        for &(r, c, v) in &self.entries {
            out[r][c] = v;
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut entries: Vec<_> = self.entries.iter().map(|&(r, c, v)| (c, r, v)).collect();
        entries.sort_by_key(|&(r, c, _)| (r, c));
        SparseMatrix { rows: self.cols, cols: self.rows, entries }
    }

    pub fn abs(&self) -> Self {
        self.map(Scalar::abs)
    }

    pub fn map<F: Fn(T) -> T>(&self, f: F) -> Self {
        let entries = self.entries.iter().map(|&(r, c, v)| (r, c, f(v))).filter(|&(_, _, v)| !v.is_zero()).collect();
        SparseMatrix { rows: self.rows, cols: self.cols, entries }
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::shape(format!("{} rows on the right", self.cols), format!("{}x{}", rhs.rows, rhs.cols)));
        }
        let mut rhs_rows: Vec<Vec<(usize, T)>> = vec![Vec::new(); rhs.rows];
        for &(r, c, v) in &rhs.entries {
            rhs_rows[r].push((c, v));
        }
        let mut entries = Vec::new();
        let mut row_acc: BTreeMap<usize, T> = BTreeMap::new();
        let mut i = 0;
        while i < self.entries.len() {
            let row = self.entries[i].0;
            row_acc.clear();
            while i < self.entries.len() && self.entries[i].0 == row {
                let (_, k, a) = self.entries[i];
                for &(j, b) in &rhs_rows[k] {
                    let prod = a * b;
                    row_acc.entry(j).and_modify(|x| *x = *x + prod).or_insert(prod);
                }
                i += 1;
            }
            entries.extend(row_acc.iter().filter(|(_, v)| !v.is_zero()).map(|(&j, &v)| (row, j, v)));
        }
        Ok(SparseMatrix { rows: self.rows, cols: rhs.cols, entries })
    }

    pub fn row_sums(&self) -> Vec<T> {
        let mut sums = vec![T::zero(); self.rows];
        for &(r, _, v) in &self.entries {
            sums[r] = sums[r] + v;
        }
        sums
    }

    pub fn col_sums(&self) -> Vec<T> {
        let mut sums = vec![T::zero(); self.cols];
        for &(_, c, v) in &self.entries {
            sums[c] = sums[c] + v;
        }
        sums
    }

    /// Column `c` as `(row, value)` pairs.
    pub fn column(&self, c: usize) -> Vec<(usize, T)> {
        self.entries.iter().filter(|e| e.1 == c).map(|&(r, _, v)| (r, v)).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && self.entries.iter().all(|&(r, c, v)| self.get(c, r) == v)
    }

    /// Coordinates of the nonzero entries.
    pub fn support(&self) -> Vec<(usize, usize)> {
        self.entries.iter().map(|&(r, c, _)| (r, c)).collect()
    }

    /// `|diag(d) - self|`, for a square matrix.
    pub fn abs_diff_from_diagonal(&self, diagonal: &[T]) -> Result<Self> {
        if self.rows != self.cols || diagonal.len() != self.rows {
            return Err(Error::shape(
                format!("square matrix with diagonal of length {}", self.rows),
                format!("{}x{} with diagonal of length {}", self.rows, self.cols, diagonal.len()),
            ));
        }
        let diag = diagonal.iter().enumerate().map(|(i, &d)| (i, i, d));
        let neg = self.entries.iter().map(|&(r, c, v)| (r, c, T::zero() - v));
        Ok(Self::from_triplets(self.rows, self.cols, diag.chain(neg))?.abs())
    }
}

impl SparseMatrix<f64> {
    /// Drops entries with magnitude below `tol`.
    pub fn clamp_below(&self, tol: f64) -> Self {
        let entries = self.entries.iter().copied().filter(|&(_, _, v)| v.abs() >= tol).collect();
        SparseMatrix { rows: self.rows, cols: self.cols, entries }
    }

    pub fn max_abs_diff(&self, other: &Self) -> Option<f64> {
        if self.shape() != other.shape() {
            return None;
        }
        let diff = Self::from_triplets(
            self.rows,
            self.cols,
            self.entries.iter().copied().chain(other.entries.iter().map(|&(r, c, v)| (r, c, -v))),
        )
        .ok()?;
        Some(diff.entries.iter().fold(0.0, |m, e| m.max(e.2.abs())))
    }
}

impl SparseMatrix<i64> {
    pub fn to_f64(&self) -> SparseMatrix<f64> {
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|&(r, c, v)| (r, c, v as f64)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_matmul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
        let n = a.len();
        let m = b.first().map_or(0, Vec::len);
        let k = b.len();
        let mut out = vec![vec![0; m]; n];
        for i in 0..n {
            for j in 0..m {
                for t in 0..k {
                    out[i][j] += a[i][t] * b[t][j];
                }
            }
        }
        out
    }

    #[test]
    fn duplicates_sum_and_zeros_vanish() {
        let m = SparseMatrix::from_triplets(2, 2, vec![(1, 1, 2), (0, 0, 1), (1, 1, -2)]).unwrap();
        assert_eq!(m.triplets(), &[(0, 0, 1)]);
        assert_eq!(m.get(1, 1), 0);
    }

    #[test]
    fn out_of_bounds_triplet_is_rejected() {
        assert!(SparseMatrix::from_triplets(2, 2, vec![(2, 0, 1i64)]).is_err());
    }

    #[test]
    fn matmul_matches_dense_product() {
        let a = vec![vec![1, 0, 2], vec![0, -1, 3]];
        let b = vec![vec![4, 1], vec![0, 0], vec![-2, 5]];
        let sa = SparseMatrix::from_dense(&a).unwrap();
        let sb = SparseMatrix::from_dense(&b).unwrap();
        assert_eq!(sa.matmul(&sb).unwrap().to_dense(), brute_matmul(&a, &b));
        assert!(sb.matmul(&sb).is_err());
    }

    #[test]
    fn abs_diff_from_diagonal() {
        let a = SparseMatrix::from_dense(&[vec![3, 1], vec![1, 1]]).unwrap();
        let out = a.abs_diff_from_diagonal(&[2, 1]).unwrap();
        assert_eq!(out.to_dense(), vec![vec![1, 1], vec![1, 0]]);
    }

    #[test]
    fn empty_shapes() {
        let a: SparseMatrix<i64> = SparseMatrix::zeros(3, 0);
        let b: SparseMatrix<i64> = SparseMatrix::zeros(0, 3);
        let p = a.matmul(&b).unwrap();
        assert_eq!(p.shape(), (3, 3));
        assert_eq!(p.nnz(), 0);
    }
}
