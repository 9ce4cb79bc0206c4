use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A vertex label: a non-empty token with no commas and no whitespace.
///
/// Cluster labels follow the same rules and share the type (see
/// [`ClusterId`]), since a pooled complex uses clusters as its vertices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct VertexId(Arc<str>);

/// Label of a vertex cluster; the vertices of a pooled complex.
pub type ClusterId = VertexId;

impl VertexId {
    pub fn new(token: &str) -> Result<Self> {
        if token.is_empty() {
            return Err(Error::malformed("empty vertex identifier"));
        }
        if token.contains(',') || token.chars().any(char::is_whitespace) {
            return Err(Error::malformed(format!("vertex identifier `{token}` contains a comma or whitespace")));
        }
        Ok(VertexId(Arc::from(token)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl FromStr for VertexId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        VertexId::new(s)
    }
}

impl TryFrom<String> for VertexId {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        VertexId::new(&s)
    }
}

impl From<VertexId> for String {
    fn from(v: VertexId) -> String {
        v.0.to_string()
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A simplex in canonical form: its vertices sorted strictly ascending.
///
/// Simplices order first by dimension, then lexicographically on the
/// vertex list.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<VertexId>", into = "Vec<VertexId>")]
pub struct Simplex {
    vertices: Vec<VertexId>,
}

impl Simplex {
    pub fn new(mut vertices: Vec<VertexId>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::malformed("a simplex needs at least one vertex"));
        }
        vertices.sort();
        if let Some(w) = vertices.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::malformed(format!("duplicate vertex `{}` in simplex", w[0])));
        }
        Ok(Simplex { vertices })
    }

    /// Parses each token as a [`VertexId`] first.
    pub fn from_labels<S: AsRef<str>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let vertices = labels.into_iter().map(|s| VertexId::new(s.as_ref())).collect::<Result<_>>()?;
        Simplex::new(vertices)
    }

    pub fn vertex(v: VertexId) -> Self {
        Simplex { vertices: vec![v] }
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn contains(&self, v: &VertexId) -> bool {
        self.vertices.binary_search(v).is_ok()
    }

    /// The codimension-1 faces; the `i`-th one omits the `i`-th vertex.
    /// Empty for a vertex.
    pub fn facets(&self) -> impl Iterator<Item = Simplex> + '_ {
        let n = if self.vertices.len() > 1 { self.vertices.len() } else { 0 };
        (0..n).map(move |i| {
            let mut vs = self.vertices.clone();
            vs.remove(i);
            Simplex { vertices: vs }
        })
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.vertices.len() <= other.vertices.len() && self.vertices.iter().all(|v| other.contains(v))
    }

    /// Applies a vertex relabeling and restores canonical order.
    pub fn relabel(&self, f: impl Fn(&VertexId) -> VertexId) -> Result<Simplex> {
        Simplex::new(self.vertices.iter().map(f).collect())
    }

    /// Vertices joined by `sep`.
    pub fn join(&self, sep: &str) -> String {
        self.vertices.iter().map(VertexId::as_str).collect::<Vec<_>>().join(sep)
    }
}

impl Ord for Simplex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.vertices.len().cmp(&other.vertices.len()).then_with(|| self.vertices.cmp(&other.vertices))
    }
}

impl PartialOrd for Simplex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl TryFrom<Vec<VertexId>> for Simplex {
    type Error = Error;
    fn try_from(v: Vec<VertexId>) -> Result<Self> {
        Simplex::new(v)
    }
}

impl From<Simplex> for Vec<VertexId> {
    fn from(s: Simplex) -> Self {
        s.vertices
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.join(","))
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vertex_id_rules() {
        assert!(VertexId::new("v0").is_ok());
        assert!(VertexId::new("").is_err());
        assert!(VertexId::new("a,b").is_err());
        assert!(VertexId::new("a b").is_err());
        assert!(VertexId::new("a\tb").is_err());
    }

    #[test]
    fn canonical_form_sorts_and_rejects_duplicates() {
        let s = Simplex::from_labels(["c", "a", "b"]).unwrap();
        assert_eq!(s.join(","), "a,b,c");
        assert_eq!(s.dim(), 2);
        assert!(Simplex::from_labels(["a", "a"]).is_err());
        assert!(Simplex::from_labels(Vec::<&str>::new()).is_err());
    }

    #[test]
    fn facets_drop_one_vertex_in_order() {
        let s = Simplex::from_labels(["a", "b", "c"]).unwrap();
        let f: Vec<String> = s.facets().map(|f| f.join(",")).collect();
        assert_eq!(f, ["b,c", "a,c", "a,b"]);
        assert_eq!(Simplex::from_labels(["a"]).unwrap().facets().count(), 0);
    }

    #[test]
    fn ordering_is_dimension_then_lexicographic() {
        let a = Simplex::from_labels(["b"]).unwrap();
        let b = Simplex::from_labels(["a", "c"]).unwrap();
        let c = Simplex::from_labels(["a", "d"]).unwrap();
        assert!(a < b && b < c);
    }
}
