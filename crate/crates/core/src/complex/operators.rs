use serde::Serialize;

use super::SimplicialComplex;
use crate::error::{Error, Result};
use crate::sparse::{Scalar, SparseMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Orientation {
    /// Signs `(-1)^i` for the face omitting the `i`-th sorted vertex.
    Oriented,
    /// Unit entries wherever a face relation holds.
    NonOriented,
}

/// `B_p`: rows index the `(p-1)`-simplices, columns the `p`-simplices.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryMatrix {
    pub p: usize,
    pub orientation: Orientation,
    pub matrix: SparseMatrix<i64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AdjacencyKind {
    Upper,
    Lower,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdjacencyMatrix<T> {
    pub p: usize,
    pub kind: AdjacencyKind,
    pub normalized: bool,
    pub matrix: SparseMatrix<T>,
}

impl SimplicialComplex {
    pub fn boundary_matrix(&self, p: usize, orientation: Orientation) -> Result<BoundaryMatrix> {
        if p > self.dim() {
            return Err(Error::DimensionOutOfRange { requested: p, max: self.dim() });
        }
        Ok(self.boundary_unchecked(p, orientation))
    }

    /// Like [`boundary_matrix`](Self::boundary_matrix) but yields the empty
    /// `n_{p-1} x 0` matrix one step above the top dimension.
    pub(crate) fn boundary_unchecked(&self, p: usize, orientation: Orientation) -> BoundaryMatrix {
        let rows = if p == 0 { 0 } else { self.count(p - 1) };
        let cols = self.count(p);
        let mut triplets = Vec::with_capacity(cols * (p + 1));
        if p > 0 {
            for (col, s) in self.simplices(p).iter().enumerate() {
                for (i, face) in s.facets().enumerate() {
                    let row = self.index_of(&face).expect("complex is face-closed");
                    let val = match orientation {
                        Orientation::NonOriented => 1,
                        Orientation::Oriented if i % 2 == 0 => 1,
                        Orientation::Oriented => -1,
                    };
                    triplets.push((row, col, val));
                }
            }
        }
        let matrix = SparseMatrix::from_triplets(rows, cols, triplets).expect("indices in range");
        BoundaryMatrix { p, orientation, matrix }
    }

    /// `A_up,p` for `0 <= p <= P`, from the non-oriented `B_{p+1}` (zero at
    /// the top dimension).
    pub fn upper_adjacency(&self, p: usize, normalized: bool) -> Result<AdjacencyMatrix<i64>> {
        if p > self.dim() {
            return Err(Error::DimensionOutOfRange { requested: p, max: self.dim() });
        }
        upper_adjacency(&self.boundary_unchecked(p + 1, Orientation::NonOriented), normalized)
    }

    /// `A_low,p = B_pᵀ B_p` from the non-oriented boundary.
    pub fn lower_adjacency(&self, p: usize) -> Result<AdjacencyMatrix<i64>> {
        lower_adjacency(&self.boundary_matrix(p, Orientation::NonOriented)?)
    }
}

/// Upper adjacency of the `(p-1)`-simplices from `B_p`.
///
/// Unnormalized: `B Bᵀ`. Normalized: `|D - B Bᵀ|` where `D` holds the row
/// sums of `|B|`, i.e. the coface counts.
pub fn upper_adjacency(b_next: &BoundaryMatrix, normalized: bool) -> Result<AdjacencyMatrix<i64>> {
    let p = b_next
        .p
        .checked_sub(1)
        .ok_or_else(|| Error::malformed("upper adjacency needs a boundary matrix of dimension >= 1"))?;
    upper_adjacency_from(p, &b_next.matrix, normalized)
}

pub(crate) fn upper_adjacency_from<T: Scalar>(
    p: usize,
    b_next: &SparseMatrix<T>,
    normalized: bool,
) -> Result<AdjacencyMatrix<T>> {
    let product = b_next.matmul(&b_next.transpose())?;
    let matrix = if normalized { product.abs_diff_from_diagonal(&b_next.abs().row_sums())? } else { product };
    Ok(AdjacencyMatrix { p, kind: AdjacencyKind::Upper, normalized, matrix })
}

pub fn lower_adjacency(b: &BoundaryMatrix) -> Result<AdjacencyMatrix<i64>> {
    let matrix = b.matrix.transpose().matmul(&b.matrix)?;
    Ok(AdjacencyMatrix { p: b.p, kind: AdjacencyKind::Lower, normalized: false, matrix })
}
