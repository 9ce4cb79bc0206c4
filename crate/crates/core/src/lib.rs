//! Simplicial complex pooling through nerves of star-extended vertex
//! covers.
//!
//! Two routes compute the same coarsening. [`cover::pool_via_nerve`] takes
//! the nerve of the cover whose elements are unions of vertex stars;
//! [`pool::pool`] builds a block assignment matrix from a vertex
//! assignment and multiplies it against non-oriented boundary matrices.
//! Under a hard partition both produce the same complex; [`verify`] checks
//! this and related properties on seeded random instances.

pub mod complex;
pub mod cover;
pub mod error;
pub mod homology;
pub mod io;
pub mod pool;
pub mod sparse;
pub mod verify;

pub use complex::{
    AdjacencyKind, AdjacencyMatrix, BoundaryMatrix, ClusterId, Orientation, Simplex, SimplicialComplex, VertexId,
};
pub use cover::{extend_cover, nerve, pool_via_nerve, ExtendedCover, PartitionKind, VertexCover};
pub use error::{Error, Result};
pub use homology::{betti, rank_gf2, BettiVector};
pub use pool::{pool, FeatureMatrix, PooledResult, VertexAssignment};
pub use sparse::SparseMatrix;
