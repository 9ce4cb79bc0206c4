//! Seeded random instances and mechanical checks of the pooling theorems:
//! agreement of the matrix and nerve routes, the singleton-cover identity,
//! and invariance under vertex relabeling.
//!
//! Every instance is derived from a single `u64` seed, so any report can be
//! reproduced from the seed it carries.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::complex::{Orientation, Simplex, SimplicialComplex, VertexId};
use crate::cover::{pool_via_nerve, PartitionKind, VertexCover};
use crate::error::{Error, Result};
use crate::pool::{pool, PooledResult, VertexAssignment};

/// Pooled weights compare within this tolerance where weights matter.
pub const WEIGHT_TOLERANCE: f64 = 1e-9;

const DENSITIES: [f64; 3] = [0.3, 0.5, 0.8];
const MAX_VERTICES: usize = 25;
const MAX_DIM: usize = 4;
/// Chance that a vertex of a random soft assignment joins a second cluster.
const SOFT_OVERLAP: f64 = 0.3;

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn vertex_label(i: usize) -> VertexId {
    VertexId::new(&format!("v{i}")).expect("valid token")
}

fn cluster_label(j: usize) -> VertexId {
    VertexId::new(&format!("U{j}")).expect("valid token")
}

/// Random clique complex: an Erdős–Rényi 1-skeleton with edge probability
/// `density`, then every `(k+1)`-clique whose faces were all promoted is
/// itself promoted to a `k`-simplex with probability `density`, up to
/// `max_dim`.
pub fn random_complex(seed: u64, n_vertices: usize, max_dim: usize, density: f64) -> Result<SimplicialComplex> {
    if n_vertices == 0 {
        return Err(Error::malformed("a random complex needs at least one vertex"));
    }
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::malformed(format!("density {density} outside [0, 1]")));
    }
    let mut rng = rng_for(seed, 0);
    let mut adjacent = vec![vec![false; n_vertices]; n_vertices];
    let mut level: Vec<Vec<usize>> = Vec::new();
    if max_dim >= 1 {
        for i in 0..n_vertices {
            for j in i + 1..n_vertices {
                if rng.gen_bool(density) {
                    adjacent[i][j] = true;
                    adjacent[j][i] = true;
                    level.push(vec![i, j]);
                }
            }
        }
    }
    let mut all: Vec<Vec<usize>> = (0..n_vertices).map(|i| vec![i]).collect();
    all.extend(level.iter().cloned());
    for _ in 2..=max_dim {
        let present: BTreeSet<&Vec<usize>> = level.iter().collect();
        let mut next = Vec::new();
        for s in &level {
            let last = *s.last().expect("non-empty");
            for w in last + 1..n_vertices {
                if !s.iter().all(|&u| adjacent[u][w]) {
                    continue;
                }
                let mut candidate = s.clone();
                candidate.push(w);
                let faces_present = (0..candidate.len() - 1).all(|i| {
                    let mut f = candidate.clone();
                    f.remove(i);
                    present.contains(&f)
                });
                if faces_present && rng.gen_bool(density) {
                    next.push(candidate);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        all.extend(next.iter().cloned());
        level = next;
    }
    let simplices = all.into_iter().map(|s| Simplex::new(s.into_iter().map(vertex_label).collect()));
    SimplicialComplex::from_simplices(simplices.collect::<Result<Vec<_>>>()?)
}

/// Surjective one-hot assignment of the vertices onto `k_clusters`
/// clusters `U0..`.
pub fn random_hard_partition(seed: u64, k: &SimplicialComplex, k_clusters: usize) -> Result<VertexAssignment> {
    let n = k.count(0);
    if k_clusters == 0 || k_clusters > n {
        return Err(Error::malformed(format!("cannot split {n} vertices into {k_clusters} non-empty clusters")));
    }
    let mut rng = rng_for(seed, 1);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut cluster_of = vec![0; n];
    for (rank, &i) in order.iter().enumerate() {
        cluster_of[i] = if rank < k_clusters { rank } else { rng.gen_range(0..k_clusters) };
    }
    let ids: Vec<VertexId> = k.vertex_ids().cloned().collect();
    let records = (0..k_clusters)
        .flat_map(|j| cluster_of.iter().enumerate().filter(move |(_, &c)| c == j).map(move |(i, _)| (i, j)))
        .map(|(i, j)| (ids[i].clone(), cluster_label(j), 1.0));
    VertexAssignment::from_records(k, records)
}

/// A hard partition where each vertex joins one extra cluster with
/// probability 0.3; rows carry random weights summing to one.
pub fn random_soft_assignment(seed: u64, k: &SimplicialComplex, k_clusters: usize) -> Result<VertexAssignment> {
    let hard = random_hard_partition(seed, k, k_clusters)?;
    let mut rng = rng_for(seed, 2);
    let mut records = Vec::new();
    for (i, v) in hard.vertices().iter().enumerate() {
        let home = hard.row(i)[0].0;
        let mut members = vec![home];
        if k_clusters > 1 && rng.gen_bool(SOFT_OVERLAP) {
            let mut extra = rng.gen_range(0..k_clusters - 1);
            if extra >= home {
                extra += 1;
            }
            members.push(extra);
        }
        let weights: Vec<f64> = members.iter().map(|_| rng.gen_range(0.1..1.0)).collect();
        let total: f64 = weights.iter().sum();
        for (&j, w) in members.iter().zip(weights) {
            records.push((v.clone(), hard.clusters()[j].clone(), w / total));
        }
    }
    VertexAssignment::from_records(k, records)
}

/// A uniformly random bijection on the vertex labels.
pub fn random_permutation(seed: u64, k: &SimplicialComplex) -> HashMap<VertexId, VertexId> {
    let mut rng = rng_for(seed, 3);
    let ids: Vec<VertexId> = k.vertex_ids().cloned().collect();
    let mut image = ids.clone();
    image.shuffle(&mut rng);
    ids.into_iter().zip(image).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Equivalence,
    Identity,
    Permutation,
    Soft,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Check::Equivalence => "equivalence",
            Check::Identity => "identity",
            Check::Permutation => "permutation",
            Check::Soft => "soft",
        };
        f.write_str(name)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Instance {
    pub seed: Option<u64>,
    pub vertices: usize,
    pub dim: usize,
    pub clusters: usize,
    pub density: Option<f64>,
}

impl Instance {
    fn of(k: &SimplicialComplex, clusters: usize) -> Self {
        Instance { seed: None, vertices: k.count(0), dim: k.dim(), clusters, density: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "outcome", content = "diff", rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    /// The first disagreement found.
    Fail(String),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub check: Check,
    pub instance: Instance,
    pub outcome: Outcome,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = &self.instance;
        let seed = i.seed.map_or_else(|| "-".to_string(), |s| s.to_string());
        write!(f, "{} seed={seed} n0={} dim={} k={}: ", self.check, i.vertices, i.dim, i.clusters)?;
        match &self.outcome {
            Outcome::Pass => write!(f, "pass"),
            Outcome::Fail(d) => write!(f, "FAIL {d}"),
        }
    }
}

/// Pooled `p`-simplices present in one complex but not the other.
fn first_simplex_difference(matrix: &SimplicialComplex, nerve: &SimplicialComplex) -> Option<String> {
    for p in 0..=matrix.dim().max(nerve.dim()) {
        if let Some(s) = matrix.simplices(p).iter().find(|s| !nerve.contains(s)) {
            return Some(format!("{p}-simplex {s} only in the matrix route"));
        }
        if let Some(s) = nerve.simplices(p).iter().find(|s| !matrix.contains(s)) {
            return Some(format!("{p}-simplex {s} only in the nerve route"));
        }
    }
    None
}

/// `(face, simplex)` label pairs of the support of a boundary matrix.
fn labelled_support(
    pairs: impl Iterator<Item = (usize, usize)>,
    rows: &[Simplex],
    cols: &[Simplex],
) -> BTreeSet<(Simplex, Simplex)> {
    pairs.map(|(r, c)| (rows[r].clone(), cols[c].clone())).collect()
}

fn boundary_support_difference(pooled: &PooledResult, nerve: &SimplicialComplex) -> Option<String> {
    for p in 1..pooled.boundaries.len() {
        let ours =
            labelled_support(pooled.boundaries[p].support().into_iter(), &pooled.labels[p - 1], &pooled.labels[p]);
        let b = nerve.boundary_unchecked(p, Orientation::NonOriented);
        let theirs = labelled_support(b.matrix.support().into_iter(), nerve.simplices(p - 1), nerve.simplices(p));
        if let Some((f, s)) = ours.difference(&theirs).next() {
            return Some(format!("B_{p} entry ({f}, {s}) only in the matrix route"));
        }
        if let Some((f, s)) = theirs.difference(&ours).next() {
            return Some(format!("B_{p} entry ({f}, {s}) only in the nerve route"));
        }
    }
    None
}

/// Off-diagonal support of each upper adjacency, as label pairs.
fn off_diagonal_pairs(pooled: &PooledResult) -> Vec<BTreeSet<(Simplex, Simplex)>> {
    pooled
        .adjacency
        .iter()
        .map(|a| {
            let labels = &pooled.labels[a.p];
            a.matrix
                .support()
                .into_iter()
                .filter(|(r, c)| r != c)
                .map(|(r, c)| (labels[r].clone(), labels[c].clone()))
                .collect()
        })
        .collect()
}

fn nerve_off_diagonal_pairs(nerve: &SimplicialComplex) -> Vec<BTreeSet<(Simplex, Simplex)>> {
    (0..=nerve.dim())
        .map(|p| {
            let a = nerve.upper_adjacency(p, false).expect("p within range");
            let labels = nerve.simplices(p);
            a.matrix
                .support()
                .into_iter()
                .filter(|(r, c)| r != c)
                .map(|(r, c)| (labels[r].clone(), labels[c].clone()))
                .collect()
        })
        .collect()
}

/// Matrix route against nerve route.
///
/// Hard assignments must give identical labelled simplex sets and identical
/// boundary supports. Soft assignments are held to the weaker criterion:
/// the off-diagonal support of every pooled upper adjacency matches the
/// upper adjacency of the nerve.
pub fn check_equivalence(k: &SimplicialComplex, s0: &VertexAssignment) -> Result<VerificationReport> {
    let nerve = pool_via_nerve(k, &s0.to_cover()?)?;
    let pooled = pool(k, s0, &[])?;
    let instance = Instance::of(k, s0.clusters().len());
    let (check, diff) = match s0.kind() {
        PartitionKind::Hard => {
            let diff = first_simplex_difference(&pooled.support_complex(), &nerve)
                .or_else(|| boundary_support_difference(&pooled, &nerve));
            (Check::Equivalence, diff)
        }
        PartitionKind::Soft => {
            let ours = off_diagonal_pairs(&pooled);
            let theirs = nerve_off_diagonal_pairs(&nerve);
            let empty = BTreeSet::new();
            let diff = (0..ours.len().max(theirs.len())).find_map(|p| {
                let a = ours.get(p).unwrap_or(&empty);
                let b = theirs.get(p).unwrap_or(&empty);
                if let Some((x, y)) = a.difference(b).next() {
                    return Some(format!("A_up,{p} pair ({x}, {y}) only in the matrix route"));
                }
                b.difference(a).next().map(|(x, y)| format!("A_up,{p} pair ({x}, {y}) only in the nerve route"))
            });
            (Check::Soft, diff)
        }
    };
    Ok(VerificationReport { check, instance, outcome: diff.map_or(Outcome::Pass, Outcome::Fail) })
}

/// Pooling with one cluster per vertex reproduces the input: the support
/// complex equals `k` under `U_i ↦ v_i` and boundary supports coincide.
pub fn check_identity(k: &SimplicialComplex) -> Result<VerificationReport> {
    // singleton clusters carry their vertex's label, so the relabeling
    // U_i -> v_i is the identity on labels
    let s0 = VertexAssignment::from_cover(k, &VertexCover::singletons(k))?;
    let pooled = pool(k, &s0, &[])?;
    let diff = first_simplex_difference(&pooled.support_complex(), k).or_else(|| {
        (1..pooled.boundaries.len()).find_map(|p| {
            let ours = pooled.boundaries[p].support();
            let theirs = k.boundary_unchecked(p, Orientation::NonOriented).matrix.support();
            (ours != theirs).then(|| format!("B_{p} support differs from the input"))
        })
    });
    let diff = diff.or_else(|| {
        (pooled.output_dim() != k.dim()).then(|| format!("output dimension {} vs {}", pooled.output_dim(), k.dim()))
    });
    Ok(VerificationReport {
        check: Check::Identity,
        instance: Instance::of(k, k.count(0)),
        outcome: diff.map_or(Outcome::Pass, Outcome::Fail),
    })
}

/// `pool(P·K, P·S_0)` against `pool(K, S_0)` in canonical form.
pub fn check_permutation_invariance(
    k: &SimplicialComplex,
    s0: &VertexAssignment,
    perm: &HashMap<VertexId, VertexId>,
) -> Result<VerificationReport> {
    let original = pool(k, s0, &[])?.canonical();
    let permuted = pool(&k.permute_vertices(perm)?, &s0.permute_vertices(perm)?, &[])?.canonical();
    let diff = original.first_difference(&permuted, WEIGHT_TOLERANCE);
    Ok(VerificationReport {
        check: Check::Permutation,
        instance: Instance::of(k, s0.clusters().len()),
        outcome: diff.map_or(Outcome::Pass, Outcome::Fail),
    })
}

/// Parameters of one seeded instance: `2 <= n_0 <= 25`, `1 <= dim <= 4`,
/// density from {0.3, 0.5, 0.8}, `2 <= k <= n_0` clusters.
pub fn random_instance(seed: u64) -> Result<(SimplicialComplex, Instance)> {
    let mut rng = rng_for(seed, 4);
    let vertices = rng.gen_range(2..=MAX_VERTICES);
    let max_dim = rng.gen_range(1..=MAX_DIM);
    let density = *DENSITIES.choose(&mut rng).expect("non-empty");
    let clusters = rng.gen_range(2..=vertices);
    let k = random_complex(seed, vertices, max_dim, density)?;
    let instance = Instance { seed: Some(seed), vertices, dim: k.dim(), clusters, density: Some(density) };
    Ok((k, instance))
}

/// The complex and hard partition behind instance `seed` of the
/// equivalence and permutation suites.
pub fn hard_instance(seed: u64) -> Result<(SimplicialComplex, VertexAssignment, Instance)> {
    let (k, instance) = random_instance(seed)?;
    let s0 = random_hard_partition(seed, &k, instance.clusters)?;
    Ok((k, s0, instance))
}

pub fn soft_instance(seed: u64) -> Result<(SimplicialComplex, VertexAssignment, Instance)> {
    let (k, instance) = random_instance(seed)?;
    let s0 = random_soft_assignment(seed, &k, instance.clusters)?;
    Ok((k, s0, instance))
}

fn run_one(check: Check, seed: u64) -> Result<VerificationReport> {
    let mut report = match check {
        Check::Equivalence => {
            let (k, s0, instance) = hard_instance(seed)?;
            VerificationReport { instance, ..check_equivalence(&k, &s0)? }
        }
        Check::Soft => {
            let (k, s0, instance) = soft_instance(seed)?;
            VerificationReport { instance, ..check_equivalence(&k, &s0)? }
        }
        Check::Identity => {
            let (k, mut instance) = random_instance(seed)?;
            instance.clusters = k.count(0);
            VerificationReport { instance, ..check_identity(&k)? }
        }
        Check::Permutation => {
            let (k, s0, instance) = hard_instance(seed)?;
            let perm = random_permutation(seed, &k);
            VerificationReport { instance, ..check_permutation_invariance(&k, &s0, &perm)? }
        }
    };
    report.instance.seed = Some(seed);
    Ok(report)
}

/// Per-instance seeds for a batch, drawn from the batch seed.
pub fn instance_seeds(seed: u64, instances: usize) -> Vec<u64> {
    let mut rng = rng_for(seed, 5);
    (0..instances).map(|_| rng.gen()).collect()
}

/// Runs `check` on `instances` seeded instances, in parallel. Reports come
/// back in instance order.
pub fn run_batch(check: Check, instances: usize, seed: u64) -> Result<Vec<VerificationReport>> {
    instance_seeds(seed, instances).into_par_iter().map(|s| run_one(check, s)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::fixtures::{fig1, v};

    #[test]
    fn density_extremes() {
        let empty = random_complex(1, 6, 3, 0.0).unwrap();
        assert_eq!(empty.counts(), vec![6]);
        let full = random_complex(1, 4, 3, 1.0).unwrap();
        assert_eq!(full.counts(), vec![4, 6, 4, 1]);
        assert!(random_complex(1, 0, 2, 0.5).is_err());
        assert!(random_complex(1, 3, 2, 1.5).is_err());
    }

    #[test]
    fn generation_is_deterministic() {
        let a = random_complex(7, 10, 3, 0.5).unwrap();
        let b = random_complex(7, 10, 3, 0.5).unwrap();
        assert_eq!(a.canonical_string(), b.canonical_string());
        assert!(a.validate().is_valid());
        let p = random_hard_partition(3, &a, 4).unwrap();
        assert_eq!(p, random_hard_partition(3, &a, 4).unwrap());
    }

    #[test]
    fn hard_partition_extremes() {
        let k = random_complex(2, 8, 2, 0.5).unwrap();
        let singletons = random_hard_partition(5, &k, 8).unwrap();
        assert!((0..8).all(|i| singletons.row(i).len() == 1));
        let cover = singletons.to_cover().unwrap();
        assert!(cover.clusters().iter().all(|(_, m)| m.len() == 1));
        let one = random_hard_partition(5, &k, 1).unwrap();
        assert_eq!(one.to_dense(), vec![vec![1.0]; 8]);
        assert!(random_hard_partition(5, &k, 9).is_err());
        assert!(random_hard_partition(5, &k, 0).is_err());
    }

    #[test]
    fn soft_assignment_rows_are_probabilities() {
        let k = random_complex(4, 20, 2, 0.5).unwrap();
        let s0 = random_soft_assignment(4, &k, 5).unwrap();
        assert_eq!(s0.kind(), PartitionKind::Soft);
        for i in 0..20 {
            let sum: f64 = s0.row(i).iter().map(|e| e.1).sum();
            assert!((sum - 1.0).abs() < 1e-12);
        }
    }

    fn fig1_two_way() -> VertexAssignment {
        let k = fig1();
        let recs: Vec<_> = [("v0", "U1"), ("v4", "U1"), ("v1", "U2"), ("v2", "U2"), ("v3", "U2")]
            .iter()
            .map(|(a, c)| (v(a), v(c), 1.0))
            .collect();
        VertexAssignment::from_records(&k, recs).unwrap()
    }

    #[test]
    fn fig1_equivalence_and_identity() {
        let k = fig1();
        assert!(check_equivalence(&k, &fig1_two_way()).unwrap().passed());
        let singles = VertexAssignment::from_cover(&k, &VertexCover::singletons(&k)).unwrap();
        assert!(check_equivalence(&k, &singles).unwrap().passed());
        assert!(check_identity(&k).unwrap().passed());
        let tet = SimplicialComplex::from_maximal_simplices([["a", "b", "c", "d"]]).unwrap();
        assert!(check_identity(&tet).unwrap().passed());
    }

    #[test]
    fn fig1_swap_permutation() {
        let k = fig1();
        let mut perm: HashMap<_, _> = k.vertex_ids().map(|x| (x.clone(), x.clone())).collect();
        assert!(check_permutation_invariance(&k, &fig1_two_way(), &perm).unwrap().passed());
        perm.insert(v("v0"), v("v4"));
        perm.insert(v("v4"), v("v0"));
        assert!(check_permutation_invariance(&k, &fig1_two_way(), &perm).unwrap().passed());
    }

    #[test]
    fn failure_names_a_simplex() {
        let k = fig1();
        let smaller = SimplicialComplex::from_maximal_simplices([["v0", "v1"]]).unwrap();
        let d = first_simplex_difference(&k, &smaller).unwrap();
        assert!(d.contains("(v2)"), "{d}");
    }

    #[test]
    fn shared_vertex_links_clusters_the_nerve_keeps_apart() {
        // y belongs to B and C, so every edge at y lands in the pooled edge
        // (B,C) and drags the clusters of its other endpoint along
        let k = SimplicialComplex::from_maximal_simplices([["x", "y"], ["y", "z"]]).unwrap();
        let recs = [("x", "A", 1.0), ("y", "B", 0.5), ("y", "C", 0.5), ("z", "D", 1.0)];
        let s0 = VertexAssignment::from_records(&k, recs.iter().map(|&(a, c, w)| (v(a), v(c), w))).unwrap();
        let report = check_equivalence(&k, &s0).unwrap();
        assert_eq!(report.check, Check::Soft);
        assert_eq!(report.outcome, Outcome::Fail("A_up,0 pair ((A), (D)) only in the matrix route".into()));
        assert!(!pool(&k, &s0, &[]).unwrap().extraneous_boundary_entries().is_empty());
    }

    #[test]
    fn batch_reports_are_seeded_and_ordered() {
        let a = run_batch(Check::Equivalence, 6, 42).unwrap();
        let b = run_batch(Check::Equivalence, 6, 42).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|r| r.instance.seed.is_some()));
        assert!(a.iter().all(VerificationReport::passed), "{:?}", a);
    }
}
