use std::collections::HashSet;
use std::fmt;

use super::VertexId;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValidationIssue {
    EmptyVertexSet,
    /// A simplex listed under the wrong dimension.
    WrongDimension {
        listed: usize,
        actual: usize,
        simplex: Vec<VertexId>,
    },
    /// Vertex list not strictly ascending (unsorted or repeated vertex).
    NotCanonical {
        simplex: Vec<VertexId>,
    },
    Duplicate {
        simplex: Vec<VertexId>,
    },
    /// Neighbouring simplices out of lexicographic order.
    OutOfOrder {
        dim: usize,
        index: usize,
    },
    MissingFace {
        simplex: Vec<VertexId>,
        face: Vec<VertexId>,
    },
    /// The top listed dimension holds no simplices.
    EmptyTopDimension {
        dim: usize,
    },
}

fn show(s: &[VertexId]) -> String {
    let parts: Vec<&str> = s.iter().map(VertexId::as_str).collect();
    format!("({})", parts.join(","))
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationIssue::EmptyVertexSet => write!(f, "vertex set is empty"),
            ValidationIssue::WrongDimension { listed, actual, simplex } => {
                write!(f, "{} has dimension {actual} but is listed under {listed}", show(simplex))
            }
            ValidationIssue::NotCanonical { simplex } => {
                write!(f, "{} is not strictly ascending", show(simplex))
            }
            ValidationIssue::Duplicate { simplex } => write!(f, "{} appears twice", show(simplex)),
            ValidationIssue::OutOfOrder { dim, index } => {
                write!(f, "dimension {dim}: simplex #{index} breaks lexicographic order")
            }
            ValidationIssue::MissingFace { simplex, face } => {
                write!(f, "face {} of {} is missing", show(face), show(simplex))
            }
            ValidationIssue::EmptyTopDimension { dim } => {
                write!(f, "dimension {dim} is listed but empty")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub issues: Vec<ValidationIssue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.issues.is_empty() {
            return write!(f, "valid");
        }
        for (i, issue) in self.issues.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{issue}")?;
        }
        Ok(())
    }
}

/// Checks a raw per-dimension listing of simplices against the complex
/// invariants: non-empty vertex set, canonical vertex order, uniqueness,
/// lexicographic order within each dimension, and closure under faces.
pub fn validate_listing(by_dim: &[Vec<Vec<VertexId>>]) -> ValidationReport {
    let mut issues = Vec::new();
    if by_dim.first().is_none_or(Vec::is_empty) {
        issues.push(ValidationIssue::EmptyVertexSet);
    }
    if by_dim.len() > 1 && by_dim.last().is_some_and(Vec::is_empty) {
        issues.push(ValidationIssue::EmptyTopDimension { dim: by_dim.len() - 1 });
    }

    let mut present: Vec<HashSet<&[VertexId]>> = vec![HashSet::new(); by_dim.len()];
    for (dim, level) in by_dim.iter().enumerate() {
        for (index, s) in level.iter().enumerate() {
            if s.len() != dim + 1 {
                issues.push(ValidationIssue::WrongDimension {
                    listed: dim,
                    actual: s.len().wrapping_sub(1),
                    simplex: s.clone(),
                });
                continue;
            }
            if !s.windows(2).all(|w| w[0] < w[1]) {
                issues.push(ValidationIssue::NotCanonical { simplex: s.clone() });
            }
            if !present[dim].insert(s.as_slice()) {
                issues.push(ValidationIssue::Duplicate { simplex: s.clone() });
            }
            if index > 0 && level[index - 1] > *s {
                issues.push(ValidationIssue::OutOfOrder { dim, index });
            }
        }
    }

    for dim in 1..by_dim.len() {
        for s in &by_dim[dim] {
            if s.len() != dim + 1 {
                continue;
            }
            for i in 0..s.len() {
                let mut face = s.clone();
                face.remove(i);
                // faces of a non-canonical simplex are compared in canonical form
                face.sort();
                if !present[dim - 1].contains(face.as_slice()) {
                    issues.push(ValidationIssue::MissingFace { simplex: s.clone(), face });
                }
            }
        }
    }
    ValidationReport { issues }
}
