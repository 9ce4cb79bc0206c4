//! Text formats: complex files, partition files, feature tables, the JSON
//! pooled output, and DOT export of 1-skeletons.
//!
//! Complex files hold one maximal simplex per line as comma-separated
//! vertex labels. Partition files hold `vertex,cluster[,weight]` records.
//! In both, lines starting with `#` and blank lines are skipped.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::complex::{Simplex, SimplicialComplex, VertexId};
use crate::cover::PartitionKind;
use crate::error::{Error, Result};
use crate::homology::{betti, BettiVector};
use crate::pool::{FeatureMatrix, PooledResult, Triplets, VertexAssignment};

/// Non-comment, non-blank lines with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn at_line(line: usize) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::Malformed(message) => Error::Parse { line, message },
        other => Error::Parse { line, message: other.to_string() },
    }
}

pub fn parse_complex(text: &str) -> Result<SimplicialComplex> {
    let mut simplices = Vec::new();
    for (line, l) in content_lines(text) {
        let s = Simplex::from_labels(l.split(',').map(str::trim)).map_err(at_line(line))?;
        simplices.push(s);
    }
    if simplices.is_empty() {
        return Err(Error::malformed("complex file lists no simplices"));
    }
    SimplicialComplex::from_simplices(simplices)
}

/// Maximal simplices in canonical order, one per line.
pub fn serialize_complex(k: &SimplicialComplex) -> String {
    let mut maximal = k.maximal_simplices();
    maximal.sort();
    let mut out = String::new();
    for s in maximal {
        out.push_str(&s.join(","));
        out.push('\n');
    }
    out
}

/// Cluster order follows first appearance in the file; the assignment is
/// soft as soon as some vertex has two records.
pub fn parse_partition(text: &str, k: &SimplicialComplex) -> Result<VertexAssignment> {
    let mut records = Vec::new();
    for (line, l) in content_lines(text) {
        let fields: Vec<&str> = l.split(',').map(str::trim).collect();
        if !(2..=3).contains(&fields.len()) {
            return Err(Error::Parse { line, message: format!("expected `vertex,cluster[,weight]`, found `{l}`") });
        }
        let v = VertexId::new(fields[0]).map_err(at_line(line))?;
        let c = VertexId::new(fields[1]).map_err(at_line(line))?;
        let w = match fields.get(2) {
            Some(w) => w.parse::<f64>().map_err(|e| Error::Parse { line, message: format!("weight `{w}`: {e}") })?,
            None => 1.0,
        };
        if !(w.is_finite() && w > 0.0) {
            return Err(Error::Malformed(format!("line {line}: weight {w} must be positive")));
        }
        records.push((v, c, w));
    }
    VertexAssignment::from_records(k, records)
}

pub fn serialize_partition(s0: &VertexAssignment) -> String {
    let mut out = String::new();
    for (i, v) in s0.vertices().iter().enumerate() {
        for &(j, w) in s0.row(i) {
            let c = &s0.clusters()[j];
            match s0.kind() {
                PartitionKind::Hard => writeln!(out, "{v},{c}"),
                PartitionKind::Soft => writeln!(out, "{v},{c},{w}"),
            }
            .expect("writing to a String");
        }
    }
    out
}

/// A feature table: each row is a simplex label (vertices joined by `-`)
/// followed by comma-separated values. The dimension is read off the label
/// length; every simplex of that dimension needs exactly one row. A first
/// row whose values are not numbers is taken as a header.
pub fn parse_features(text: &str, k: &SimplicialComplex) -> Result<FeatureMatrix> {
    let mut rows: Vec<(usize, Vec<f64>)> = Vec::new();
    let mut dim: Option<usize> = None;
    let mut width: Option<usize> = None;
    for (n, (line, l)) in content_lines(text).enumerate() {
        let fields: Vec<&str> = l.split(',').map(str::trim).collect();
        let parsed: std::result::Result<Vec<f64>, _> = fields[1..].iter().map(|x| x.parse::<f64>()).collect();
        let values = match parsed {
            Ok(v) => v,
            Err(_) if n == 0 => continue,
            Err(e) => return Err(Error::Parse { line, message: format!("feature value: {e}") }),
        };
        let s = Simplex::from_labels(fields[0].split('-')).map_err(at_line(line))?;
        let p = s.dim();
        if *dim.get_or_insert(p) != p {
            return Err(Error::Parse {
                line,
                message: format!("{p}-simplex {s} in a table of {}-simplices", dim.unwrap()),
            });
        }
        if *width.get_or_insert(values.len()) != values.len() {
            return Err(Error::Parse {
                line,
                message: format!("{} values, expected {}", values.len(), width.unwrap()),
            });
        }
        if p > k.dim() {
            return Err(Error::DimensionOutOfRange { requested: p, max: k.dim() });
        }
        let i = k
            .index_of(&s)
            .ok_or_else(|| Error::Parse { line, message: format!("simplex {s} is not in the complex") })?;
        rows.push((i, values));
    }
    let p = dim.ok_or_else(|| Error::malformed("feature table has no rows"))?;
    let cols = width.unwrap_or(0);
    let mut table: Vec<Option<Vec<f64>>> = vec![None; k.count(p)];
    for (i, values) in rows {
        if table[i].replace(values).is_some() {
            return Err(Error::malformed(format!("simplex {} has two feature rows", k.simplices(p)[i])));
        }
    }
    let mut data = Vec::with_capacity(table.len() * cols);
    for (i, row) in table.into_iter().enumerate() {
        let row = row.ok_or_else(|| Error::malformed(format!("no feature row for simplex {}", k.simplices(p)[i])))?;
        data.extend(row);
    }
    FeatureMatrix::new(p, k.count(p), cols, data)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BettiPair {
    pub input: BettiVector,
    pub output: BettiVector,
}

/// One block `S_{q,p}` with its row and column labels.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AssignmentBlock {
    pub q: usize,
    pub p: usize,
    pub rows: Vec<Simplex>,
    pub cols: Vec<Simplex>,
    pub entries: Vec<(usize, usize, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PooledFeatures {
    pub p: usize,
    pub rows: Vec<Vec<f64>>,
}

/// The JSON document written by `pool`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PooledOutput {
    pub kind: PartitionKind,
    /// Pooled simplices per dimension, each a sorted list of cluster labels.
    pub labels: Vec<Vec<Simplex>>,
    /// `B_p'` for `p >= 1`.
    pub boundaries: Vec<Triplets>,
    pub upper_adjacency: Vec<Triplets>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upper_adjacency_normalized: Option<Vec<Triplets>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub features: Vec<PooledFeatures>,
    pub betti: BettiPair,
    /// The row-normalized blocks of `S`.
    pub assignment: Vec<AssignmentBlock>,
}

impl PooledOutput {
    pub fn new(k: &SimplicialComplex, pooled: &PooledResult, with_normalized: bool) -> Self {
        let a = &pooled.assignment;
        let mut assignment = Vec::new();
        for q in 0..=a.input_dim() {
            for p in 0..=q.min(a.output_dim()) {
                if let Some(b) = a.block(q, p) {
                    assignment.push(AssignmentBlock {
                        q,
                        p,
                        rows: a.row_labels(q).to_vec(),
                        cols: a.labels(p).to_vec(),
                        entries: b.triplets().to_vec(),
                    });
                }
            }
        }
        let triplets =
            |ms: &[crate::complex::AdjacencyMatrix<f64>]| ms.iter().map(|m| Triplets::new(m.p, &m.matrix)).collect();
        PooledOutput {
            kind: pooled.kind,
            labels: pooled.labels.clone(),
            boundaries: pooled.boundaries.iter().enumerate().skip(1).map(|(p, m)| Triplets::new(p, m)).collect(),
            upper_adjacency: triplets(&pooled.adjacency),
            upper_adjacency_normalized: with_normalized.then(|| triplets(&pooled.adjacency_normalized)),
            features: pooled
                .features
                .iter()
                .map(|x| PooledFeatures { p: x.p, rows: (0..x.rows()).map(|i| x.row(i).to_vec()).collect() })
                .collect(),
            betti: BettiPair { input: betti(k), output: betti(&pooled.support_complex()) },
            assignment,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }
}

fn dot_id(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// The 1-skeleton as an undirected DOT graph. With a hard assignment the
/// vertices are filled by cluster.
pub fn export_dot(k: &SimplicialComplex, clusters: Option<&VertexAssignment>) -> String {
    let mut out = String::from("graph complex {\n");
    let colour: HashMap<&VertexId, usize> = match clusters {
        Some(s0) if s0.kind() == PartitionKind::Hard => {
            s0.vertices().iter().enumerate().map(|(i, v)| (v, s0.row(i)[0].0)).collect()
        }
        _ => HashMap::new(),
    };
    if !colour.is_empty() {
        out.push_str("  node [style=filled, colorscheme=set312];\n");
    }
    for v in k.vertex_ids() {
        match colour.get(v) {
            Some(j) => writeln!(out, "  {} [fillcolor={}];", dot_id(v.as_str()), j % 12 + 1),
            None => writeln!(out, "  {};", dot_id(v.as_str())),
        }
        .expect("writing to a String");
    }
    for e in k.simplices(1) {
        let vs = e.vertices();
        writeln!(out, "  {} -- {};", dot_id(vs[0].as_str()), dot_id(vs[1].as_str())).expect("writing to a String");
    }
    out.push_str("}\n");
    out
}
