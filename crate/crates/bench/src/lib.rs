//! Shared workloads for the pooling benchmarks.

use nervepool::verify::{random_complex, random_hard_partition};
use nervepool::{SimplicialComplex, VertexAssignment};

/// A seeded random complex with a hard partition into `clusters` parts.
pub fn workload(
    seed: u64,
    vertices: usize,
    max_dim: usize,
    density: f64,
    clusters: usize,
) -> (SimplicialComplex, VertexAssignment) {
    let k = random_complex(seed, vertices, max_dim, density).expect("valid parameters");
    let s0 = random_hard_partition(seed, &k, clusters).expect("clusters <= vertices");
    (k, s0)
}
