//! Construction of the lower block-triangular assignment matrix `S`.
//!
//! `S_{q,p}` maps the `q`-simplices of the input complex to the pooled
//! `p`-simplices. Column `U_j` of `S_{q,0}` marks the `q`-simplices touching
//! cluster `U_j` (the down update); the column of `S_{q,p}` for a pooled
//! simplex `(U_a, ..., U_c)` is the entrywise product of the corresponding
//! `S_{q,0}` columns (the right update).

use std::collections::{BTreeSet, HashMap};

use itertools::Itertools;

use super::assignment::VertexAssignment;
use crate::complex::{ClusterId, Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::sparse::SparseMatrix;

/// The first block column `S_{q,0}` for every input dimension `q`.
///
/// `blocks[0]` is `S_0` itself with its real weights; `blocks[q]` for
/// `q >= 1` is binary. Columns follow `clusters`.
#[derive(Clone, Debug, PartialEq)]
pub struct DownBlocks {
    pub clusters: Vec<ClusterId>,
    pub blocks: Vec<SparseMatrix<f64>>,
}

/// Assigns each `q`-simplex to every cluster owning one of its vertices.
pub fn extend_down(s0: &VertexAssignment, k: &SimplicialComplex) -> Result<DownBlocks> {
    if !s0.vertices().iter().eq(k.vertex_ids()) {
        return Err(Error::malformed("assignment rows do not match the vertices of the complex"));
    }
    let n_clusters = s0.clusters().len();
    let mut blocks = vec![s0.matrix()];
    for q in 1..=k.dim() {
        let mut triplets = Vec::new();
        for (i, s) in k.simplices(q).iter().enumerate() {
            let touched: BTreeSet<usize> = s
                .vertices()
                .iter()
                .flat_map(|v| s0.row(k.vertex_index(v).expect("closed complex")).iter().map(|e| e.0))
                .collect();
            triplets.extend(touched.into_iter().map(|j| (i, j, 1.0)));
        }
        blocks.push(SparseMatrix::from_triplets(k.count(q), n_clusters, triplets)?);
    }
    Ok(DownBlocks { clusters: s0.clusters().to_vec(), blocks })
}

/// Candidate pooled simplices per dimension.
///
/// Dimension 0 holds the clusters with a non-empty column. For `p >= 1`,
/// every `p`-simplex of the input contributes each `(p+1)`-subset of the
/// clusters it touches; those are exactly the tuples whose column product
/// in the diagonal block is nonzero on that row.
pub fn enumerate_candidates(down: &DownBlocks) -> Vec<BTreeSet<Simplex>> {
    let mut out = Vec::new();
    let used: BTreeSet<usize> = down.blocks[0].triplets().iter().map(|e| e.1).collect();
    out.push(used.into_iter().map(|j| Simplex::vertex(down.clusters[j].clone())).collect::<BTreeSet<_>>());
    for p in 1..down.blocks.len() {
        let mut level = BTreeSet::new();
        for (_, row) in &down.blocks[p].triplets().iter().chunk_by(|e| e.0) {
            let touched: Vec<usize> = row.map(|e| e.1).collect();
            for combo in touched.into_iter().combinations(p + 1) {
                let labels = combo.into_iter().map(|j| down.clusters[j].clone()).collect();
                level.insert(Simplex::new(labels).expect("distinct clusters"));
            }
        }
        if level.is_empty() {
            break;
        }
        out.push(level);
    }
    out
}

/// The block matrix `S`, restricted to the pooled simplices that survive.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockAssignment {
    /// Input simplices per dimension `q` (row labels of `S_{q,*}`).
    pub(crate) row_labels: Vec<Vec<Simplex>>,
    /// Pooled simplices per dimension `p` (column labels of `S_{*,p}`).
    pub(crate) labels: Vec<Vec<Simplex>>,
    /// `blocks[q][p]` for `p <= min(q, output dimension)`.
    pub(crate) blocks: Vec<Vec<SparseMatrix<f64>>>,
    pub(crate) normalized: bool,
}

impl BlockAssignment {
    pub fn input_dim(&self) -> usize {
        self.row_labels.len() - 1
    }

    /// Largest dimension with a pooled simplex.
    pub fn output_dim(&self) -> usize {
        self.labels.len() - 1
    }

    pub fn labels(&self, p: usize) -> &[Simplex] {
        self.labels.get(p).map_or(&[], Vec::as_slice)
    }

    pub fn all_labels(&self) -> &[Vec<Simplex>] {
        &self.labels
    }

    pub fn row_labels(&self, q: usize) -> &[Simplex] {
        &self.row_labels[q]
    }

    /// `S_{q,p}`; `None` above the diagonal or beyond the output dimension.
    pub fn block(&self, q: usize, p: usize) -> Option<&SparseMatrix<f64>> {
        self.blocks.get(q)?.get(p)
    }

    /// `S_p`, the diagonal block used for pooling.
    pub fn diagonal(&self, p: usize) -> Option<&SparseMatrix<f64>> {
        self.block(p, p)
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Sum of each block-row of `S`, per input dimension.
    pub fn row_sums(&self) -> Vec<Vec<f64>> {
        self.blocks
            .iter()
            .zip(&self.row_labels)
            .map(|(row_blocks, rows)| {
                let mut sums = vec![0.0; rows.len()];
                for b in row_blocks {
                    for (i, s) in b.row_sums().into_iter().enumerate() {
                        sums[i] += s;
                    }
                }
                sums
            })
            .collect()
    }

    /// `max |row sum - 1|` over all block-rows.
    pub fn max_row_sum_deviation(&self) -> f64 {
        self.row_sums().iter().flatten().fold(0.0, |m, s| m.max((s - 1.0).abs()))
    }
}

fn column_lists(m: &SparseMatrix<f64>) -> Vec<Vec<(usize, f64)>> {
    let mut cols = vec![Vec::new(); m.cols()];
    for &(r, c, v) in m.triplets() {
        cols[c].push((r, v));
    }
    cols
}

/// Entrywise product of sorted sparse columns.
fn column_product(columns: &[&[(usize, f64)]]) -> Vec<(usize, f64)> {
    let (first, rest) = columns.split_first().expect("at least one column");
    let mut acc: Vec<(usize, f64)> = first.to_vec();
    for col in rest {
        let mut next = Vec::with_capacity(acc.len().min(col.len()));
        let (mut i, mut j) = (0, 0);
        while i < acc.len() && j < col.len() {
            match acc[i].0.cmp(&col[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    next.push((acc[i].0, acc[i].1 * col[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        acc = next;
    }
    acc.retain(|e| e.1 != 0.0);
    acc
}

/// Fills `S_{q,p}` for every candidate by column products, then drops the
/// candidates whose diagonal-block column `S_{p,p}` is zero.
pub fn extend_right(
    k: &SimplicialComplex,
    down: &DownBlocks,
    candidates: &[BTreeSet<Simplex>],
) -> Result<BlockAssignment> {
    if down.blocks.len() != k.dim() + 1 {
        return Err(Error::shape(format!("{} down blocks", k.dim() + 1), down.blocks.len()));
    }
    let cluster_col: HashMap<&ClusterId, usize> = down.clusters.iter().enumerate().map(|(j, c)| (c, j)).collect();
    let columns: Vec<Vec<Vec<(usize, f64)>>> = down.blocks.iter().map(column_lists).collect();

    // surviving labels and their per-q columns, by pooled dimension
    let mut labels: Vec<Vec<Simplex>> = Vec::new();
    let mut cols_by_p: Vec<Vec<Vec<Vec<(usize, f64)>>>> = Vec::new();
    for (p, level) in candidates.iter().enumerate().take(k.dim() + 1) {
        let mut kept = Vec::new();
        let mut kept_cols: Vec<Vec<Vec<(usize, f64)>>> = vec![Vec::new(); k.dim() + 1];
        for tau in level {
            if tau.dim() != p {
                return Err(Error::malformed(format!("candidate {tau} listed under dimension {p}")));
            }
            let idx: Vec<usize> = tau
                .vertices()
                .iter()
                .map(|c| cluster_col.get(c).copied().ok_or_else(|| Error::malformed(format!("unknown cluster `{c}`"))))
                .collect::<Result<_>>()?;
            let diag = column_product(&idx.iter().map(|&j| columns[p][j].as_slice()).collect::<Vec<_>>());
            if diag.is_empty() {
                continue;
            }
            kept.push(tau.clone());
            for q in p..=k.dim() {
                let col = if q == p {
                    diag.clone()
                } else {
                    column_product(&idx.iter().map(|&j| columns[q][j].as_slice()).collect::<Vec<_>>())
                };
                kept_cols[q].push(col);
            }
        }
        if kept.is_empty() {
            break;
        }
        labels.push(kept);
        cols_by_p.push(kept_cols);
    }
    if labels.is_empty() {
        return Err(Error::malformed("no pooled vertices: every cluster column is empty"));
    }

    let out_dim = labels.len() - 1;
    let mut blocks: Vec<Vec<SparseMatrix<f64>>> = Vec::with_capacity(k.dim() + 1);
    for q in 0..=k.dim() {
        let mut row = Vec::new();
        for p in 0..=q.min(out_dim) {
            let triplets =
                cols_by_p[p][q].iter().enumerate().flat_map(|(c, col)| col.iter().map(move |&(r, v)| (r, c, v)));
            row.push(SparseMatrix::from_triplets(k.count(q), labels[p].len(), triplets)?);
        }
        blocks.push(row);
    }
    let row_labels = (0..=k.dim()).map(|q| k.simplices(q).to_vec()).collect();
    Ok(BlockAssignment { row_labels, labels, blocks, normalized: false })
}

/// Scales every block-row of `S` to sum to one.
pub fn normalize_rows(s: &BlockAssignment) -> Result<BlockAssignment> {
    let sums = s.row_sums();
    for (q, row) in sums.iter().enumerate() {
        if let Some(i) = row.iter().position(|&x| x <= 0.0) {
            return Err(Error::UncoveredSimplex(s.row_labels[q][i].to_string()));
        }
    }
    let blocks = s
        .blocks
        .iter()
        .zip(&sums)
        .map(|(row_blocks, sums)| {
            row_blocks
                .iter()
                .map(|b| {
                    SparseMatrix::from_triplets(
                        b.rows(),
                        b.cols(),
                        b.triplets().iter().map(|&(r, c, v)| (r, c, v / sums[r])),
                    )
                    .expect("same shape")
                })
                .collect()
        })
        .collect();
    Ok(BlockAssignment { row_labels: s.row_labels.clone(), labels: s.labels.clone(), blocks, normalized: true })
}

/// `extend_down`, candidate enumeration and `extend_right` in sequence.
pub fn build_assignment(k: &SimplicialComplex, s0: &VertexAssignment) -> Result<BlockAssignment> {
    let down = extend_down(s0, k)?;
    let candidates = enumerate_candidates(&down);
    extend_right(k, &down, &candidates)
}
