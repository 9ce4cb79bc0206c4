//! Betti numbers over GF(2).

use std::fmt;

use serde::Serialize;

use crate::complex::{Orientation, SimplicialComplex};
use crate::sparse::{Scalar, SparseMatrix};

/// Rank over GF(2) of the support of `m` (nonzero entries read as 1).
pub fn rank_gf2<T: Scalar>(m: &SparseMatrix<T>) -> usize {
    let words = m.cols().div_ceil(64);
    if words == 0 {
        return 0;
    }
    let mut rows: Vec<Vec<u64>> = vec![vec![0; words]; m.rows()];
    for &(r, c, _) in m.triplets() {
        rows[r][c / 64] |= 1 << (c % 64);
    }
    // pivot[c] holds a reduced row whose lowest set bit is c
    let mut pivot: Vec<Option<Vec<u64>>> = vec![None; m.cols()];
    let mut rank = 0;
    for mut row in rows {
        while let Some(low) = lowest_bit(&row) {
            match &pivot[low] {
                Some(p) => row.iter_mut().zip(p).for_each(|(a, b)| *a ^= b),
                None => {
                    pivot[low] = Some(row);
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

fn lowest_bit(row: &[u64]) -> Option<usize> {
    row.iter().enumerate().find(|(_, &w)| w != 0).map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

/// `β_0 .. β_P`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct BettiVector(pub Vec<usize>);

impl BettiVector {
    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Alternating sum of the Betti numbers.
    pub fn euler_characteristic(&self) -> i64 {
        self.0.iter().enumerate().map(|(p, &b)| if p % 2 == 0 { b as i64 } else { -(b as i64) }).sum()
    }
}

impl fmt::Display for BettiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

/// `β_p = n_p − rank B_p − rank B_{p+1}`.
pub fn betti(k: &SimplicialComplex) -> BettiVector {
    let ranks: Vec<usize> = (0..=k.dim() + 1)
        .map(|p| {
            if p == 0 || p > k.dim() {
                0
            } else {
                rank_gf2(&k.boundary_unchecked(p, Orientation::NonOriented).matrix)
            }
        })
        .collect();
    BettiVector((0..=k.dim()).map(|p| k.count(p) - ranks[p] - ranks[p + 1]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::fixtures::fig1;

    #[test]
    fn rank_examples() {
        assert_eq!(rank_gf2(&SparseMatrix::identity(3, 1i64)), 3);
        assert_eq!(rank_gf2(&SparseMatrix::<i64>::zeros(4, 5)), 0);
        let b1 = fig1().boundary_matrix(1, Orientation::NonOriented).unwrap();
        assert_eq!(rank_gf2(&b1.matrix), 4);
        // over the rationals this has rank 3; mod 2 the rows sum to zero
        let m = SparseMatrix::from_dense(&[vec![1i64, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]).unwrap();
        assert_eq!(rank_gf2(&m), 2);
    }

    #[test]
    fn rank_wide_matrix_crosses_word_boundary() {
        let m = SparseMatrix::from_triplets(2, 130, vec![(0, 0, 1i64), (0, 129, 1), (1, 129, 1)]).unwrap();
        assert_eq!(rank_gf2(&m), 2);
    }

    #[test]
    fn betti_examples() {
        assert_eq!(betti(&fig1()), BettiVector(vec![1, 1, 0]));
        let point = SimplicialComplex::from_maximal_simplices([["a"]]).unwrap();
        assert_eq!(betti(&point), BettiVector(vec![1]));
        let hollow = SimplicialComplex::from_maximal_simplices([["a", "b"], ["b", "c"], ["a", "c"]]).unwrap();
        assert_eq!(betti(&hollow), BettiVector(vec![1, 1]));
        let tet = SimplicialComplex::from_maximal_simplices([["a", "b", "c", "d"]]).unwrap();
        assert_eq!(betti(&tet), BettiVector(vec![1, 0, 0, 0]));
        assert_eq!(betti(&fig1()).to_string(), "1 1 0");
    }

    #[test]
    fn hollow_tetrahedron_is_a_sphere() {
        let k = SimplicialComplex::from_maximal_simplices([
            ["a", "b", "c"],
            ["a", "b", "d"],
            ["a", "c", "d"],
            ["b", "c", "d"],
        ])
        .unwrap();
        assert_eq!(betti(&k), BettiVector(vec![1, 0, 1]));
    }
}
