//! Canonical simplicial complexes, their boundary matrices and adjacency
//! operators.
//!
//! A [`SimplicialComplex`] is stored as one sorted list of simplices per
//! dimension. Simplex index order within a dimension is lexicographic on
//! the sorted vertex lists, so every matrix built from a complex is
//! reproducible bit for bit.

pub(crate) mod operators;
mod simplex;
mod validate;

use std::collections::{BTreeSet, HashMap};

pub use operators::{lower_adjacency, upper_adjacency, AdjacencyKind, AdjacencyMatrix, BoundaryMatrix, Orientation};
pub use simplex::{ClusterId, Simplex, VertexId};
pub use validate::{validate_listing, ValidationIssue, ValidationReport};

use crate::error::{Error, Result};

#[derive(Clone)]
pub struct SimplicialComplex {
    by_dim: Vec<Vec<Simplex>>,
    index: Vec<HashMap<Simplex, usize>>,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.by_dim == other.by_dim
    }
}

impl Eq for SimplicialComplex {}

impl std::fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SimplicialComplex").field("counts", &self.counts()).finish()
    }
}

impl SimplicialComplex {
    /// Downward closure of the given simplices.
    pub fn from_maximal_simplices<I, S, V>(maximal: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: IntoIterator<Item = V>,
        V: AsRef<str>,
    {
        let simplices = maximal.into_iter().map(Simplex::from_labels).collect::<Result<Vec<_>>>()?;
        Self::from_simplices(simplices)
    }

    /// Downward closure of already-canonical simplices.
    pub fn from_simplices(simplices: impl IntoIterator<Item = Simplex>) -> Result<Self> {
        let mut levels: Vec<BTreeSet<Simplex>> = Vec::new();
        for s in simplices {
            let d = s.dim();
            if levels.len() <= d {
                levels.resize_with(d + 1, BTreeSet::new);
            }
            levels[d].insert(s);
        }
        if levels.is_empty() {
            return Err(Error::malformed("a simplicial complex needs a non-empty vertex set"));
        }
        for d in (1..levels.len()).rev() {
            let (lower, upper) = levels.split_at_mut(d);
            for s in upper[0].iter() {
                for f in s.facets() {
                    lower[d - 1].insert(f);
                }
            }
        }
        Ok(Self::from_levels(levels.into_iter().map(|l| l.into_iter().collect()).collect()))
    }

    fn from_levels(by_dim: Vec<Vec<Simplex>>) -> Self {
        let index =
            by_dim.iter().map(|level| level.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect()).collect();
        SimplicialComplex { by_dim, index }
    }

    /// Maximum simplex dimension.
    pub fn dim(&self) -> usize {
        self.by_dim.len() - 1
    }

    /// Number of `p`-simplices; zero above the top dimension.
    pub fn count(&self, p: usize) -> usize {
        self.by_dim.get(p).map_or(0, Vec::len)
    }

    pub fn counts(&self) -> Vec<usize> {
        self.by_dim.iter().map(Vec::len).collect()
    }

    pub fn total_simplices(&self) -> usize {
        self.by_dim.iter().map(Vec::len).sum()
    }

    /// The `p`-simplices in canonical order; empty above the top dimension.
    pub fn simplices(&self, p: usize) -> &[Simplex] {
        self.by_dim.get(p).map_or(&[], Vec::as_slice)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Simplex> {
        self.by_dim.iter().flatten()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = &VertexId> {
        self.by_dim[0].iter().map(|s| &s.vertices()[0])
    }

    pub fn index_of(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s.dim())?.get(s).copied()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.index_of(s).is_some()
    }

    pub fn vertex_index(&self, v: &VertexId) -> Option<usize> {
        self.index_of(&Simplex::vertex(v.clone()))
    }

    /// Simplices with no coface in the complex.
    pub fn maximal_simplices(&self) -> Vec<Simplex> {
        let mut covered: BTreeSet<&Simplex> = BTreeSet::new();
        let mut faces = Vec::new();
        for level in self.by_dim.iter().skip(1) {
            for s in level {
                faces.extend(s.facets());
            }
        }
        for f in &faces {
            if let Some(i) = self.index_of(f) {
                covered.insert(&self.by_dim[f.dim()][i]);
            }
        }
        self.iter().filter(|s| !covered.contains(s)).cloned().collect()
    }

    /// `St(v)`: every simplex having `v` as a vertex, `v` included.
    pub fn star(&self, v: &VertexId) -> Result<BTreeSet<Simplex>> {
        if self.vertex_index(v).is_none() {
            return Err(Error::UnknownVertex(v.to_string()));
        }
        Ok(self.iter().filter(|s| s.contains(v)).cloned().collect())
    }

    /// Relabels vertices through a bijection on the vertex set.
    pub fn permute_vertices(&self, perm: &HashMap<VertexId, VertexId>) -> Result<Self> {
        if perm.len() != self.count(0) {
            return Err(Error::malformed(format!(
                "permutation has {} entries for {} vertices",
                perm.len(),
                self.count(0)
            )));
        }
        let mut image = BTreeSet::new();
        for v in self.vertex_ids() {
            let w = perm.get(v).ok_or_else(|| Error::malformed(format!("permutation does not map vertex `{v}`")))?;
            if !image.insert(w.clone()) {
                return Err(Error::malformed(format!("permutation is not injective at `{w}`")));
            }
        }
        let relabeled = self.iter().map(|s| s.relabel(|v| perm[v].clone())).collect::<Result<Vec<_>>>()?;
        Self::from_simplices(relabeled)
    }

    /// The 1-skeleton edges as vertex index pairs.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.simplices(1)
            .iter()
            .map(|e| {
                let vs = e.vertices();
                let a = self.vertex_index(&vs[0]).expect("closed complex");
                let b = self.vertex_index(&vs[1]).expect("closed complex");
                (a, b)
            })
            .collect()
    }

    /// Alternating sum of simplex counts.
    pub fn euler_characteristic(&self) -> i64 {
        self.counts().iter().enumerate().map(|(p, &n)| if p % 2 == 0 { n as i64 } else { -(n as i64) }).sum()
    }

    /// Re-checks closure, ordering and uniqueness.
    pub fn validate(&self) -> ValidationReport {
        let listing: Vec<Vec<Vec<VertexId>>> =
            self.by_dim.iter().map(|level| level.iter().map(|s| s.vertices().to_vec()).collect()).collect();
        validate_listing(&listing)
    }

    /// Canonical text form: one line per simplex, grouped by dimension.
    pub fn canonical_string(&self) -> String {
        let mut out = String::new();
        for s in self.iter() {
            out.push_str(&s.join(","));
            out.push('\n');
        }
        out
    }
}
