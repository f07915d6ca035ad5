//! `K`-fat `K₃`-minor witnesses: construction from a wide layering cluster
//! and verification.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{disk, DistanceMatrix, Graph, Vertex};
use crate::layering::{cluster_metrics, layering_partition};

/// Three connected vertex sets and three connector paths; `p12` runs from
/// `h1` to `h2`, `p13` from `h1` to `h3` and `p23` from `h2` to `h3`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FatMinorWitness {
    pub h1: Vec<Vertex>,
    pub h2: Vec<Vertex>,
    pub h3: Vec<Vertex>,
    pub p12: Vec<Vertex>,
    pub p23: Vec<Vertex>,
    pub p13: Vec<Vertex>,
    pub k: u32,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructError {
    #[error("K must be positive")]
    ZeroK,
    #[error("source {0} is not in the graph")]
    SourceOutOfRange(Vertex),
    #[error("precondition unmet: cluster diameter {delta_s} < 5K = {}", 5 * .k)]
    PreconditionUnmet { delta_s: u32, k: u32 },
}

/// Builds the witness from a pair `x, y` realizing `Δ_s` (lexicographically
/// first), BFS paths towards `s`, and a shortest `x–y` path outside
/// `D_{ℓ−1}(s)` where `ℓ = d(s, x)`.
pub fn fat_minor_construct(
    g: &Graph,
    dist: &DistanceMatrix,
    s: Vertex,
    k: u32,
) -> Result<FatMinorWitness, ConstructError> {
    if k == 0 {
        return Err(ConstructError::ZeroK);
    }
    if s >= g.n() {
        return Err(ConstructError::SourceOutOfRange(s));
    }
    let lp = layering_partition(g, dist, s);
    let delta_s = cluster_metrics(dist, &lp).diameter;
    if delta_s < 5 * k {
        return Err(ConstructError::PreconditionUnmet { delta_s, k });
    }
    let (x, y) = lp
        .clusters
        .iter()
        .flat_map(|c| {
            c.members.iter().enumerate().flat_map(move |(i, &a)| c.members[i + 1..].iter().map(move |&b| (a, b)))
        })
        .filter(|&(a, b)| dist.get(a, b) == delta_s)
        .min()
        .expect("some cluster realizes the diameter");
    let l = dist.get(s, x);
    let everywhere = vec![true; g.n()];
    let p_xs = g.shortest_path_within(x, s, &everywhere).unwrap();
    let p_ys = g.shortest_path_within(y, s, &everywhere).unwrap();
    let outside: Vec<bool> = dist.row(s).iter().map(|&d| d >= l).collect();
    let q = g.shortest_path_within(x, y, &outside).expect("x and y share a cluster");

    let k_us = k as usize;
    let p13 = p_xs[k_us..=2 * k_us].to_vec();
    let p23 = p_ys[k_us..=2 * k_us].to_vec();
    let last_near_x = q.iter().rposition(|&v| dist.get(x, v) <= k).unwrap();
    let first_near_y = q.iter().position(|&v| dist.get(y, v) <= k).unwrap();
    let p12 = q[last_near_x..=first_near_y].to_vec();
    Ok(FatMinorWitness { h1: disk(dist, x, k), h2: disk(dist, y, k), h3: disk(dist, s, l - 2 * k), p12, p23, p13, k })
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("{0} is empty")]
    Empty(&'static str),
    #[error("{part} holds vertex {vertex}, which is not in the graph")]
    VertexOutOfRange { part: &'static str, vertex: Vertex },
    #[error("{0} is not connected")]
    Disconnected(&'static str),
    #[error("{0} is not a simple path")]
    NotAPath(&'static str),
    #[error("{path} must meet {set} exactly in its {end} endpoint")]
    Endpoint { path: &'static str, set: &'static str, end: &'static str },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FatMinorViolation {
    #[error("structurally invalid: {0}")]
    Structure(#[from] StructureError),
    #[error("d({a}, {b}) = {distance} < {k}, realized by vertices {pair:?}")]
    TooClose { a: &'static str, b: &'static str, distance: u32, k: u32, pair: (Vertex, Vertex) },
}

impl FatMinorViolation {
    /// Stable identifier of the violated distance constraint, e.g. `"H1-H3"`.
    pub fn constraint(&self) -> Option<String> {
        match self {
            FatMinorViolation::TooClose { a, b, .. } => Some(format!("{a}-{b}")),
            FatMinorViolation::Structure(_) => None,
        }
    }
}

fn is_simple_path(g: &Graph, p: &[Vertex]) -> bool {
    let mut sorted = p.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    sorted.len() == p.len() && p.windows(2).all(|w| g.has_edge(w[0], w[1]))
}

/// Checks structure (connected sets, simple paths meeting their two sets
/// only at their endpoints), then the nine distance constraints: set–set,
/// path–opposite set, path–path.
pub fn fat_minor_verify(
    g: &Graph,
    dist: &DistanceMatrix,
    w: &FatMinorWitness,
    k: u32,
) -> Result<(), FatMinorViolation> {
    let sets: [(&'static str, &[Vertex]); 3] = [("H1", &w.h1), ("H2", &w.h2), ("H3", &w.h3)];
    let paths: [(&'static str, &[Vertex], usize, usize); 3] =
        [("P12", &w.p12, 0, 1), ("P13", &w.p13, 0, 2), ("P23", &w.p23, 1, 2)];
    let parts = sets.iter().copied().chain(paths.iter().map(|&(name, p, _, _)| (name, p)));
    for (name, part) in parts {
        if part.is_empty() {
            return Err(StructureError::Empty(name).into());
        }
        if let Some(&vertex) = part.iter().find(|&&v| v >= g.n()) {
            return Err(StructureError::VertexOutOfRange { part: name, vertex }.into());
        }
    }
    for &(name, set) in &sets {
        if !g.is_connected_subset(set) {
            return Err(StructureError::Disconnected(name).into());
        }
    }
    for &(name, path, i, j) in &paths {
        if !is_simple_path(g, path) {
            return Err(StructureError::NotAPath(name).into());
        }
        for (set, end, endpoint) in [(i, "first", path[0]), (j, "last", *path.last().unwrap())] {
            let (set_name, members) = sets[set];
            let hits: Vec<Vertex> = path.iter().copied().filter(|v| members.contains(v)).collect();
            if hits != [endpoint] {
                return Err(StructureError::Endpoint { path: name, set: set_name, end }.into());
            }
        }
    }
    let mut checks: Vec<(&'static str, &[Vertex], &'static str, &[Vertex])> = Vec::with_capacity(9);
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        checks.push((sets[a].0, sets[a].1, sets[b].0, sets[b].1));
    }
    for &(name, path, i, j) in &paths {
        let other = 3 - i - j;
        checks.push((name, path, sets[other].0, sets[other].1));
    }
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        checks.push((paths[a].0, paths[a].1, paths[b].0, paths[b].1));
    }
    for (a, sa, b, sb) in checks {
        let (distance, u, v) = dist.between_sets(sa, sb).unwrap();
        if distance < k {
            return Err(FatMinorViolation::TooClose { a, b, distance, k, pair: (u, v) });
        }
    }
    Ok(())
}
