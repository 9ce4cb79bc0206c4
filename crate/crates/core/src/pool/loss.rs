//! Auxiliary regularizers on a vertex assignment.

use super::assignment::VertexAssignment;
use crate::error::{Error, Result};
use crate::sparse::SparseMatrix;

/// Row sums of a probabilistic assignment may drift this far from one.
const ROW_SUM_TOLERANCE: f64 = 1e-9;

/// `‖A_0 − S_0 S_0ᵀ‖_F`.
pub fn loss_link_prediction(a0: &SparseMatrix<f64>, s0: &VertexAssignment) -> Result<f64> {
    let n = s0.vertices().len();
    if a0.shape() != (n, n) {
        return Err(Error::shape(format!("{n}x{n}"), format!("{}x{}", a0.rows(), a0.cols())));
    }
    let s = s0.matrix();
    let reconstruction = s.matmul(&s.transpose())?;
    let diff = SparseMatrix::from_triplets(
        n,
        n,
        a0.triplets().iter().copied().chain(reconstruction.triplets().iter().map(|&(r, c, v)| (r, c, -v))),
    )?;
    Ok(diff.triplets().iter().fold(0.0, |acc, e| acc + e.2 * e.2).sqrt())
}

/// Mean Shannon entropy (natural log) of the rows of `S_0`.
///
/// Every row must already be a probability vector.
pub fn loss_entropy(s0: &VertexAssignment) -> Result<f64> {
    let n = s0.vertices().len();
    let mut total = 0.0;
    for i in 0..n {
        let row = s0.row(i);
        let sum: f64 = row.iter().map(|e| e.1).sum();
        if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
            return Err(Error::malformed(format!("row of `{}` sums to {sum}, not 1", s0.vertices()[i])));
        }
        total -= row.iter().map(|&(_, w)| w * w.ln()).sum::<f64>();
    }
    Ok(total / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::VertexId;

    fn ids(xs: &[&str]) -> Vec<VertexId> {
        xs.iter().map(|x| VertexId::new(x).unwrap()).collect()
    }

    fn s0(rows: &[Vec<f64>]) -> VertexAssignment {
        let names: Vec<String> = (0..rows.len()).map(|i| format!("v{i}")).collect();
        let clusters: Vec<String> = (0..rows[0].len()).map(|j| format!("U{j}")).collect();
        let n: Vec<&str> = names.iter().map(String::as_str).collect();
        let c: Vec<&str> = clusters.iter().map(String::as_str).collect();
        VertexAssignment::from_dense(ids(&n), ids(&c), rows).unwrap()
    }

    #[test]
    fn link_prediction_exact_reconstruction() {
        let s = s0(&[vec![1.0, 0.0], vec![0.0, 1.0]]);
        let eye = SparseMatrix::identity(2, 1.0);
        assert_eq!(loss_link_prediction(&eye, &s).unwrap(), 0.0);

        let soft = s0(&[vec![0.5, 0.5], vec![1.0, 0.0]]);
        let m = soft.matrix();
        let a = m.matmul(&m.transpose()).unwrap();
        assert_eq!(loss_link_prediction(&a, &soft).unwrap(), 0.0);
    }

    #[test]
    fn link_prediction_against_zero() {
        let s = s0(&[vec![1.0, 0.0], vec![0.0, 1.0]]);
        let zero = SparseMatrix::zeros(2, 2);
        assert!((loss_link_prediction(&zero, &s).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert!(loss_link_prediction(&SparseMatrix::zeros(3, 3), &s).is_err());
    }

    #[test]
    fn entropy_values() {
        assert_eq!(loss_entropy(&s0(&[vec![1.0, 0.0], vec![0.0, 1.0]])).unwrap(), 0.0);
        let ln2 = std::f64::consts::LN_2;
        assert!((loss_entropy(&s0(&[vec![0.5, 0.5]])).unwrap() - ln2).abs() < 1e-12);
        assert!((loss_entropy(&s0(&[vec![1.0, 0.0], vec![0.5, 0.5]])).unwrap() - ln2 / 2.0).abs() < 1e-12);
        assert!(matches!(loss_entropy(&s0(&[vec![0.7, 0.7]])), Err(Error::Malformed(_))));
    }
}
