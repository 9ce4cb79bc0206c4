use serde::Serialize;

use super::assignment::VertexAssignment;
use super::blocks::{build_assignment, normalize_rows, BlockAssignment};
use crate::complex::operators::upper_adjacency_from;
use crate::complex::{AdjacencyMatrix, Orientation, Simplex, SimplicialComplex};
use crate::cover::PartitionKind;
use crate::error::{Error, Result};
use crate::sparse::SparseMatrix;

/// Products below this magnitude are treated as zero before any support
/// is read off a pooled matrix.
pub const ZERO_TOLERANCE: f64 = 1e-12;

/// Features on the `p`-simplices, one row per simplex, row-major.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FeatureMatrix {
    pub p: usize,
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl FeatureMatrix {
    pub fn new(p: usize, rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::shape(format!("{rows}x{cols} = {} values", rows * cols), data.len()));
        }
        Ok(FeatureMatrix { p, rows, cols, data })
    }

    pub fn from_rows(p: usize, rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::malformed("feature rows differ in length"));
        }
        Self::new(p, rows.len(), cols, rows.concat())
    }

    pub fn zeros(p: usize, rows: usize, cols: usize) -> Self {
        FeatureMatrix { p, rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }
}

/// `X_p' = S_pᵀ X_p`.
pub fn pool_features(x: &FeatureMatrix, s_p: &SparseMatrix<f64>) -> Result<FeatureMatrix> {
    if x.rows != s_p.rows() {
        return Err(Error::shape(format!("{} feature rows", s_p.rows()), x.rows));
    }
    let mut out = FeatureMatrix::zeros(x.p, s_p.cols(), x.cols);
    for &(sigma, tau, w) in s_p.triplets() {
        for j in 0..x.cols {
            out.data[tau * x.cols + j] += w * x.get(sigma, j);
        }
    }
    Ok(out)
}

/// `B_p' = S_{p-1}ᵀ |B_p| S_p` for `1 <= p <=` output dimension, with
/// `B_0'` the empty `0 x n_0'` matrix.
pub fn pool_boundaries(k: &SimplicialComplex, s: &BlockAssignment) -> Result<Vec<SparseMatrix<f64>>> {
    let diagonal =
        |p: usize| s.diagonal(p).ok_or_else(|| Error::malformed(format!("assignment has no diagonal block {p}")));
    let mut out = vec![SparseMatrix::zeros(0, s.labels(0).len())];
    for p in 1..=s.output_dim() {
        let b = k.boundary_matrix(p, Orientation::NonOriented)?.matrix.to_f64();
        let pooled = diagonal(p - 1)?.transpose().matmul(&b)?.matmul(diagonal(p)?)?;
        out.push(pooled.clamp_below(ZERO_TOLERANCE));
    }
    Ok(out)
}

/// `A_up,p'` for every pooled dimension; zero at the top.
pub fn pool_adjacency(boundaries: &[SparseMatrix<f64>], normalized: bool) -> Result<Vec<AdjacencyMatrix<f64>>> {
    let top = boundaries.len() - 1;
    (0..=top)
        .map(|p| {
            let b_next = match boundaries.get(p + 1) {
                Some(b) => b.clone(),
                None => SparseMatrix::zeros(boundaries[p].cols(), 0),
            };
            let mut a = upper_adjacency_from(p, &b_next, normalized)?;
            a.matrix = a.matrix.clamp_below(ZERO_TOLERANCE);
            Ok(a)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct PooledResult {
    pub kind: PartitionKind,
    /// Pooled simplices per dimension, sorted.
    pub labels: Vec<Vec<Simplex>>,
    /// `B_p'` indexed by `p`; entry 0 is empty.
    pub boundaries: Vec<SparseMatrix<f64>>,
    pub adjacency: Vec<AdjacencyMatrix<f64>>,
    pub adjacency_normalized: Vec<AdjacencyMatrix<f64>>,
    pub features: Vec<FeatureMatrix>,
    /// The normalized block assignment the result was computed with.
    pub assignment: BlockAssignment,
}

/// A boundary entry whose row label is not a face of its column label.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtraneousEntry {
    pub p: usize,
    pub face: Simplex,
    pub simplex: Simplex,
    pub value: f64,
}

/// Runs the whole matrix pipeline: down and right updates, dead-column
/// removal, row normalization, pooled boundaries, upper adjacencies and
/// pooled features.
pub fn pool(k: &SimplicialComplex, s0: &VertexAssignment, features: &[FeatureMatrix]) -> Result<PooledResult> {
    let assignment = normalize_rows(&build_assignment(k, s0)?)?;
    let boundaries = pool_boundaries(k, &assignment)?;
    let adjacency = pool_adjacency(&boundaries, false)?;
    let adjacency_normalized = pool_adjacency(&boundaries, true)?;
    let features = features
        .iter()
        .map(|x| {
            if x.p > k.dim() {
                return Err(Error::DimensionOutOfRange { requested: x.p, max: k.dim() });
            }
            match assignment.diagonal(x.p) {
                Some(s_p) => pool_features(x, s_p),
                None if x.rows == k.count(x.p) => Ok(FeatureMatrix::zeros(x.p, 0, x.cols)),
                None => Err(Error::shape(format!("{} feature rows", k.count(x.p)), x.rows)),
            }
        })
        .collect::<Result<_>>()?;
    Ok(PooledResult {
        kind: s0.kind(),
        labels: assignment.all_labels().to_vec(),
        boundaries,
        adjacency,
        adjacency_normalized,
        features,
        assignment,
    })
}

impl PooledResult {
    pub fn output_dim(&self) -> usize {
        self.labels.len() - 1
    }

    /// The unweighted complex spanned by the pooled simplices.
    pub fn support_complex(&self) -> SimplicialComplex {
        SimplicialComplex::from_simplices(self.labels.iter().flatten().cloned()).expect("at least one pooled vertex")
    }

    /// Boundary entries linking a pooled simplex to a non-face.
    pub fn extraneous_boundary_entries(&self) -> Vec<ExtraneousEntry> {
        let mut out = Vec::new();
        for p in 1..self.boundaries.len() {
            for &(r, c, value) in self.boundaries[p].triplets() {
                let face = &self.labels[p - 1][r];
                let simplex = &self.labels[p][c];
                if !face.is_face_of(simplex) {
                    out.push(ExtraneousEntry { p, face: face.clone(), simplex: simplex.clone(), value });
                }
            }
        }
        out
    }

    /// True when every column of every `B_p'` is supported exactly on the
    /// faces of its pooled simplex.
    pub fn boundary_supports_match_faces(&self) -> bool {
        (1..self.boundaries.len()).all(|p| {
            let b = &self.boundaries[p];
            self.labels[p].iter().enumerate().all(|(c, tau)| {
                let support: Vec<&Simplex> = b.column(c).iter().map(|&(r, _)| &self.labels[p - 1][r]).collect();
                support.len() == p + 1 && support.iter().all(|f| f.is_face_of(tau))
            })
        })
    }

    /// Labels, pooled matrices and pooled features in sorted, index-free
    /// form. The block assignment is left out: its rows are indexed by the
    /// input simplices, so it is not invariant under vertex relabeling.
    pub fn canonical(&self) -> CanonicalPooled {
        let labels: Vec<Vec<String>> =
            self.labels.iter().map(|level| level.iter().map(|s| s.join(",")).collect()).collect();
        CanonicalPooled {
            labels,
            boundaries: self.boundaries.iter().enumerate().skip(1).map(|(p, m)| Triplets::new(p, m)).collect(),
            upper_adjacency: self.adjacency.iter().map(|a| Triplets::new(a.p, &a.matrix)).collect(),
            upper_adjacency_normalized: self
                .adjacency_normalized
                .iter()
                .map(|a| Triplets::new(a.p, &a.matrix))
                .collect(),
            features: self.features.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Triplets {
    pub p: usize,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, f64)>,
}

impl Triplets {
    pub fn new(p: usize, m: &SparseMatrix<f64>) -> Self {
        Triplets { p, rows: m.rows(), cols: m.cols(), entries: m.triplets().to_vec() }
    }

    fn first_difference(&self, other: &Self, tol: f64) -> Option<String> {
        if (self.p, self.rows, self.cols) != (other.p, other.rows, other.cols) {
            return Some(format!(
                "shape {}x{} (p={}) vs {}x{} (p={})",
                self.rows, self.cols, self.p, other.rows, other.cols, other.p
            ));
        }
        if self.entries.len() != other.entries.len() {
            return Some(format!("{} vs {} nonzero entries", self.entries.len(), other.entries.len()));
        }
        self.entries.iter().zip(&other.entries).find_map(|(a, b)| {
            ((a.0, a.1) != (b.0, b.1) || (a.2 - b.2).abs() > tol)
                .then(|| format!("entry ({},{})={} vs ({},{})={}", a.0, a.1, a.2, b.0, b.1, b.2))
        })
    }
}

/// Index-free form of a [`PooledResult`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CanonicalPooled {
    pub labels: Vec<Vec<String>>,
    pub boundaries: Vec<Triplets>,
    pub upper_adjacency: Vec<Triplets>,
    pub upper_adjacency_normalized: Vec<Triplets>,
    pub features: Vec<FeatureMatrix>,
}

impl CanonicalPooled {
    /// First point where the two disagree: labels exactly, matrix supports
    /// exactly, weights within `tol`.
    pub fn first_difference(&self, other: &Self, tol: f64) -> Option<String> {
        if self.labels != other.labels {
            for (p, (a, b)) in self.labels.iter().zip(&other.labels).enumerate() {
                if let Some(x) = a.iter().find(|x| !b.contains(x)) {
                    return Some(format!("pooled {p}-simplex ({x}) only on the left"));
                }
                if let Some(x) = b.iter().find(|x| !a.contains(x)) {
                    return Some(format!("pooled {p}-simplex ({x}) only on the right"));
                }
            }
            return Some(format!("output dimensions {} vs {}", self.labels.len() - 1, other.labels.len() - 1));
        }
        let groups = [
            ("boundary", &self.boundaries, &other.boundaries),
            ("upper adjacency", &self.upper_adjacency, &other.upper_adjacency),
            ("normalized upper adjacency", &self.upper_adjacency_normalized, &other.upper_adjacency_normalized),
        ];
        for (name, a, b) in groups {
            for (x, y) in a.iter().zip(b.iter()) {
                if let Some(d) = x.first_difference(y, tol) {
                    return Some(format!("{name} p={}: {d}", x.p));
                }
            }
        }
        if self.features.len() != other.features.len() {
            return Some("different number of feature matrices".into());
        }
        for (x, y) in self.features.iter().zip(&other.features) {
            if x.p != y.p || x.rows != y.rows || x.cols != y.cols {
                return Some(format!("feature matrix shape mismatch at p={}", x.p));
            }
            if let Some(i) = x.data.iter().zip(&y.data).position(|(a, b)| (a - b).abs() > tol) {
                return Some(format!("feature p={} value #{i}: {} vs {}", x.p, x.data[i], y.data[i]));
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::fixtures::{fig1, s, v};
    use crate::complex::VertexId;
    use crate::cover::{pool_via_nerve, VertexCover};

    fn assign(k: &SimplicialComplex, pairs: &[(&str, &str, f64)]) -> VertexAssignment {
        let recs: Vec<(VertexId, VertexId, f64)> = pairs.iter().map(|(a, c, w)| (v(a), v(c), *w)).collect();
        VertexAssignment::from_records(k, recs).unwrap()
    }

    fn two_way(k: &SimplicialComplex) -> VertexAssignment {
        assign(k, &[("v0", "U1", 1.0), ("v4", "U1", 1.0), ("v1", "U2", 1.0), ("v2", "U2", 1.0), ("v3", "U2", 1.0)])
    }

    #[test]
    fn two_cluster_pool_is_a_single_edge() {
        let k = fig1();
        let r = pool(&k, &two_way(&k), &[]).unwrap();
        assert_eq!(r.output_dim(), 1);
        let b1 = &r.boundaries[1];
        assert_eq!(b1.shape(), (2, 1));
        assert!(b1.get(0, 0) > 0.0 && b1.get(1, 0) > 0.0);
        assert!(r.extraneous_boundary_entries().is_empty());
        assert!(r.boundary_supports_match_faces());
        assert_eq!(r.support_complex(), pool_via_nerve(&k, &two_way(&k).to_cover().unwrap()).unwrap());
    }

    #[test]
    fn pooled_boundary_values_by_hand() {
        // S_0 rows are one-hot; the edge rows (v0,v1) and (v3,v4) carry 1/3
        // in S_1 and the other edges none. B_1 has two unit entries per
        // column, so B_1'[U, (U1,U2)] = sum over those two edges of the
        // number of their endpoints in U, times 1/3.
        let k = fig1();
        let r = pool(&k, &two_way(&k), &[]).unwrap();
        let third = 1.0 / 3.0;
        assert!((r.boundaries[1].get(0, 0) - 2.0 * third).abs() < 1e-15);
        assert!((r.boundaries[1].get(1, 0) - 2.0 * third).abs() < 1e-15);
    }

    #[test]
    fn pooled_adjacency_has_self_loops() {
        let k = fig1();
        let r = pool(&k, &two_way(&k), &[]).unwrap();
        let a = &r.adjacency[0].matrix;
        let (b1, b2) = (r.boundaries[1].get(0, 0), r.boundaries[1].get(1, 0));
        assert!((a.get(0, 1) - b1 * b2).abs() < 1e-15);
        assert!((a.get(0, 0) - b1 * b1).abs() < 1e-15);
        assert!(a.get(0, 0) > 0.0 && a.get(1, 1) > 0.0);
        let n = &r.adjacency_normalized[0].matrix;
        assert!((n.get(0, 0) - (b1 - b1 * b1).abs()).abs() < 1e-15);
        assert!((n.get(0, 1) - b1 * b2).abs() < 1e-15);
        // the pooled edge has no cofaces
        assert_eq!(r.adjacency[1].matrix.nnz(), 0);
    }

    #[test]
    fn one_cluster_pool() {
        let k = fig1();
        let s0 =
            assign(&k, &[("v0", "U", 1.0), ("v1", "U", 1.0), ("v2", "U", 1.0), ("v3", "U", 1.0), ("v4", "U", 1.0)]);
        let r = pool(&k, &s0, &[]).unwrap();
        assert_eq!(r.labels, vec![vec![s(&["U"])]]);
        assert_eq!(r.boundaries.len(), 1);
        assert_eq!(r.adjacency[0].matrix.nnz(), 0);
    }

    #[test]
    fn singleton_pool_matches_input_supports() {
        let k = fig1();
        let s0 = VertexAssignment::from_cover(&k, &VertexCover::singletons(&k)).unwrap();
        let r = pool(&k, &s0, &[]).unwrap();
        assert_eq!(r.support_complex(), k);
        for p in 1..=k.dim() {
            let b = k.boundary_matrix(p, Orientation::NonOriented).unwrap().matrix;
            assert_eq!(r.boundaries[p].support(), b.support());
        }
    }

    #[test]
    fn feature_pooling() {
        let k = fig1();
        let x = FeatureMatrix::from_rows(0, &[vec![1.0], vec![0.0], vec![0.0], vec![0.0], vec![3.0]]).unwrap();
        let r = pool(&k, &two_way(&k), &[x]).unwrap();
        assert_eq!(r.features[0].get(0, 0), 4.0);

        let empty = FeatureMatrix::new(0, 5, 0, vec![]).unwrap();
        let r = pool(&k, &two_way(&k), &[empty]).unwrap();
        assert_eq!((r.features[0].rows(), r.features[0].cols()), (2, 0));

        let zero = FeatureMatrix::zeros(1, 6, 2);
        let r = pool(&k, &two_way(&k), &[zero]).unwrap();
        assert!(r.features[0].data().iter().all(|&x| x == 0.0));

        // no pooled triangles: features on triangles pool to nothing
        let tri = FeatureMatrix::from_rows(2, &[vec![1.0]]).unwrap();
        let r = pool(&k, &two_way(&k), &[tri]).unwrap();
        assert_eq!(r.features[0].rows(), 0);

        let bad = FeatureMatrix::zeros(0, 4, 1);
        assert!(matches!(pool(&k, &two_way(&k), &[bad]), Err(Error::ShapeMismatch { .. })));
    }

    #[test]
    fn soft_assignment_can_create_extraneous_entries() {
        // v1 sits in both clusters; the pooled edge (A,B) then also picks
        // up weight from C through the edge (v1,v2).
        let k = SimplicialComplex::from_maximal_simplices([["v0", "v1"], ["v1", "v2"]]).unwrap();
        let s0 = assign(&k, &[("v0", "A", 1.0), ("v1", "A", 0.5), ("v1", "B", 0.5), ("v2", "C", 1.0)]);
        let r = pool(&k, &s0, &[]).unwrap();
        let extra = r.extraneous_boundary_entries();
        assert!(!extra.is_empty());
        assert!(extra.iter().all(|e| !e.face.is_face_of(&e.simplex)));
    }

    #[test]
    fn canonical_diff_reports_label() {
        let k = fig1();
        let a = pool(&k, &two_way(&k), &[]).unwrap().canonical();
        let s0 = VertexAssignment::from_cover(&k, &VertexCover::singletons(&k)).unwrap();
        let b = pool(&k, &s0, &[]).unwrap().canonical();
        assert!(a.first_difference(&a, 1e-9).is_none());
        let d = a.first_difference(&b, 1e-9).unwrap();
        assert!(d.contains("only on"), "{d}");
    }
}
