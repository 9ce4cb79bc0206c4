//! Set-theoretic pooling: extend a vertex cover by unions of stars, then
//! take the nerve of the extended cover.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::Serialize;

use crate::complex::{ClusterId, Simplex, SimplicialComplex, VertexId};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PartitionKind {
    /// Every vertex belongs to exactly one cluster.
    Hard,
    /// Some vertex belongs to more than one cluster.
    Soft,
}

/// Clusters of vertices, in a fixed order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexCover {
    clusters: Vec<(ClusterId, BTreeSet<VertexId>)>,
    kind: PartitionKind,
}

impl VertexCover {
    /// Rejects empty clusters and repeated cluster labels. The kind is
    /// inferred: hard iff the clusters are pairwise disjoint.
    pub fn new(clusters: Vec<(ClusterId, BTreeSet<VertexId>)>) -> Result<Self> {
        let mut labels = HashSet::new();
        let mut seen = HashSet::new();
        let mut kind = PartitionKind::Hard;
        for (id, members) in &clusters {
            if !labels.insert(id) {
                return Err(Error::malformed(format!("cluster `{id}` listed twice")));
            }
            if members.is_empty() {
                return Err(Error::malformed(format!("cluster `{id}` is empty")));
            }
            for v in members {
                if !seen.insert(v) {
                    kind = PartitionKind::Soft;
                }
            }
        }
        Ok(VertexCover { clusters, kind })
    }

    /// One cluster per vertex, labelled by the vertex itself.
    pub fn singletons(k: &SimplicialComplex) -> Self {
        let clusters = k.vertex_ids().map(|v| (v.clone(), BTreeSet::from([v.clone()]))).collect();
        VertexCover { clusters, kind: PartitionKind::Hard }
    }

    pub fn clusters(&self) -> &[(ClusterId, BTreeSet<VertexId>)] {
        &self.clusters
    }

    pub fn kind(&self) -> PartitionKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }
}

/// `Ũ_i`: the union of the stars of the vertices of cluster `U_i`.
///
/// Elements are plain simplex sets; they are generally not face-closed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedCover {
    pub elements: Vec<(ClusterId, BTreeSet<Simplex>)>,
}

pub fn extend_cover(k: &SimplicialComplex, cover: &VertexCover) -> Result<ExtendedCover> {
    let mut covered: HashSet<&VertexId> = HashSet::new();
    for (_, members) in cover.clusters() {
        for v in members {
            if k.vertex_index(v).is_none() {
                return Err(Error::UnknownVertex(v.to_string()));
            }
            covered.insert(v);
        }
    }
    if let Some(v) = k.vertex_ids().find(|v| !covered.contains(v)) {
        return Err(Error::IncompleteCover(v.to_string()));
    }
    // one pass over the complex: each simplex joins every cluster that
    // owns one of its vertices
    let mut owner: HashMap<&VertexId, Vec<usize>> = HashMap::new();
    for (i, (_, members)) in cover.clusters().iter().enumerate() {
        for v in members {
            owner.entry(v).or_default().push(i);
        }
    }
    let mut elements: Vec<(ClusterId, BTreeSet<Simplex>)> =
        cover.clusters().iter().map(|(id, _)| (id.clone(), BTreeSet::new())).collect();
    for s in k.iter() {
        for v in s.vertices() {
            for &i in &owner[v] {
                elements[i].1.insert(s.clone());
            }
        }
    }
    Ok(ExtendedCover { elements })
}

/// Nerve of an extended cover: one vertex per non-empty element and one
/// simplex per set of elements with a common simplex.
///
/// Every simplex of the host complex witnesses exactly the set of
/// elements containing it; the closure of those witness sets is the nerve.
pub fn nerve(ext: &ExtendedCover) -> Result<SimplicialComplex> {
    let mut membership: HashMap<&Simplex, Vec<usize>> = HashMap::new();
    for (i, (_, members)) in ext.elements.iter().enumerate() {
        for s in members {
            membership.entry(s).or_default().push(i);
        }
    }
    let witnesses: HashSet<Vec<usize>> = membership.into_values().collect();
    if witnesses.is_empty() {
        return Err(Error::malformed("extended cover has no simplices"));
    }
    let simplices = witnesses.into_iter().map(|w| {
        let labels: Vec<ClusterId> = w.into_iter().map(|i| ext.elements[i].0.clone()).collect();
        Simplex::new(labels).expect("cluster labels are distinct")
    });
    SimplicialComplex::from_simplices(simplices)
}

/// `Nrv({Ũ_i})`: the pooled complex by the topological route.
pub fn pool_via_nerve(k: &SimplicialComplex, cover: &VertexCover) -> Result<SimplicialComplex> {
    nerve(&extend_cover(k, cover)?)
}
