//! Matrix formulation of nerve pooling.
//!
//! A vertex assignment `S_0` is extended to the block matrix `S`, whose
//! diagonal blocks pool boundary matrices (`S_{p-1}ᵀ |B_p| S_p`) and
//! features (`S_pᵀ X_p`).

mod assignment;
mod blocks;
mod loss;
mod pipeline;

pub use assignment::VertexAssignment;
pub use blocks::{
    build_assignment, enumerate_candidates, extend_down, extend_right, normalize_rows, BlockAssignment, DownBlocks,
};
pub use loss::{loss_entropy, loss_link_prediction};
pub use pipeline::{
    pool, pool_adjacency, pool_boundaries, pool_features, CanonicalPooled, ExtraneousEntry, FeatureMatrix,
    PooledResult, Triplets, ZERO_TOLERANCE,
};
