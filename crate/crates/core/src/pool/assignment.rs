use std::collections::{BTreeSet, HashMap};

use crate::complex::{ClusterId, SimplicialComplex, VertexId};
use crate::cover::{PartitionKind, VertexCover};
use crate::error::{Error, Result};
use crate::sparse::SparseMatrix;

/// `S_0`: non-negative vertex-to-cluster weights.
///
/// Rows follow the vertex order of the host complex; columns are clusters
/// in the order they were first seen. Each row stores its positive entries
/// sorted by column.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexAssignment {
    vertices: Vec<VertexId>,
    clusters: Vec<ClusterId>,
    rows: Vec<Vec<(usize, f64)>>,
    kind: PartitionKind,
}

impl VertexAssignment {
    /// Builds `S_0` for `k` from `(vertex, cluster, weight)` records.
    pub fn from_records(
        k: &SimplicialComplex,
        records: impl IntoIterator<Item = (VertexId, ClusterId, f64)>,
    ) -> Result<Self> {
        let vertices: Vec<VertexId> = k.vertex_ids().cloned().collect();
        let mut clusters: Vec<ClusterId> = Vec::new();
        let mut cluster_index: HashMap<ClusterId, usize> = HashMap::new();
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); vertices.len()];
        for (v, c, w) in records {
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::malformed(format!("weight {w} for ({v}, {c}) must be positive")));
            }
            let row = k.vertex_index(&v).ok_or_else(|| Error::UnknownVertex(v.to_string()))?;
            let col = *cluster_index.entry(c.clone()).or_insert_with(|| {
                clusters.push(c.clone());
                clusters.len() - 1
            });
            if rows[row].iter().any(|&(j, _)| j == col) {
                return Err(Error::malformed(format!("vertex `{v}` assigned to `{c}` twice")));
            }
            rows[row].push((col, w));
        }
        Self::assemble(vertices, clusters, rows)
    }

    /// Dense constructor; `matrix[i][j]` is the weight of `vertices[i]` in
    /// `clusters[j]`.
    pub fn from_dense(vertices: Vec<VertexId>, clusters: Vec<ClusterId>, matrix: &[Vec<f64>]) -> Result<Self> {
        if matrix.len() != vertices.len() {
            return Err(Error::shape(format!("{} rows", vertices.len()), format!("{} rows", matrix.len())));
        }
        let mut rows = Vec::with_capacity(matrix.len());
        for row in matrix {
            if row.len() != clusters.len() {
                return Err(Error::shape(format!("{} columns", clusters.len()), format!("{} columns", row.len())));
            }
            if row.iter().any(|w| !w.is_finite() || *w < 0.0) {
                return Err(Error::malformed("assignment weights must be finite and non-negative"));
            }
            rows.push(row.iter().enumerate().filter(|(_, &w)| w > 0.0).map(|(j, &w)| (j, w)).collect());
        }
        Self::assemble(vertices, clusters, rows)
    }

    /// Unit weights for every membership in `cover`.
    pub fn from_cover(k: &SimplicialComplex, cover: &VertexCover) -> Result<Self> {
        let records =
            cover.clusters().iter().flat_map(|(c, members)| members.iter().map(move |v| (v.clone(), c.clone(), 1.0)));
        Self::from_records(k, records)
    }

    fn assemble(vertices: Vec<VertexId>, clusters: Vec<ClusterId>, mut rows: Vec<Vec<(usize, f64)>>) -> Result<Self> {
        let mut kind = PartitionKind::Hard;
        for (v, row) in vertices.iter().zip(rows.iter_mut()) {
            if row.is_empty() {
                return Err(Error::IncompleteCover(v.to_string()));
            }
            if row.len() > 1 {
                kind = PartitionKind::Soft;
            }
            row.sort_by_key(|e| e.0);
        }
        Ok(VertexAssignment { vertices, clusters, rows, kind })
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn clusters(&self) -> &[ClusterId] {
        &self.clusters
    }

    pub fn kind(&self) -> PartitionKind {
        self.kind
    }

    /// Positive `(cluster column, weight)` entries of row `i`.
    pub fn row(&self, i: usize) -> &[(usize, f64)] {
        &self.rows[i]
    }

    pub fn weight(&self, vertex: usize, cluster: usize) -> f64 {
        self.rows[vertex].iter().find(|e| e.0 == cluster).map_or(0.0, |e| e.1)
    }

    pub fn matrix(&self) -> SparseMatrix<f64> {
        let triplets = self.rows.iter().enumerate().flat_map(|(i, r)| r.iter().map(move |&(j, w)| (i, j, w)));
        SparseMatrix::from_triplets(self.vertices.len(), self.clusters.len(), triplets)
            .expect("row entries are in range")
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        self.matrix().to_dense()
    }

    /// The cover formed by the supports of the columns.
    pub fn to_cover(&self) -> Result<VertexCover> {
        let mut members: Vec<BTreeSet<VertexId>> = vec![BTreeSet::new(); self.clusters.len()];
        for (v, row) in self.vertices.iter().zip(&self.rows) {
            for &(j, _) in row {
                members[j].insert(v.clone());
            }
        }
        let clusters = self.clusters.iter().cloned().zip(members).filter(|(_, m)| !m.is_empty()).collect();
        VertexCover::new(clusters)
    }

    /// Applies a vertex relabeling; rows are re-sorted to the canonical
    /// vertex order of the relabeled complex.
    pub fn permute_vertices(&self, perm: &HashMap<VertexId, VertexId>) -> Result<Self> {
        let mut rows: Vec<(VertexId, Vec<(usize, f64)>)> = Vec::with_capacity(self.rows.len());
        for (v, row) in self.vertices.iter().zip(&self.rows) {
            let w = perm.get(v).ok_or_else(|| Error::malformed(format!("permutation does not map `{v}`")))?;
            rows.push((w.clone(), row.clone()));
        }
        rows.sort_by(|a, b| a.0.cmp(&b.0));
        if rows.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::malformed("permutation is not injective"));
        }
        let (vertices, rows) = rows.into_iter().unzip();
        Ok(VertexAssignment { vertices, clusters: self.clusters.clone(), rows, kind: self.kind })
    }
}
