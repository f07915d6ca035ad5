//! Additive distortion of unweighted spanning trees on `V(G)`.

use rayon::prelude::*;
use serde::Serialize;

use crate::graph::{DistanceMatrix, Graph, Vertex};
use crate::layering::{canonical_tree, deviation_from_matrix, layering_partition, tree_distances};
use crate::CapExceeded;

/// Default vertex cap of [`adt_oracle`] (`8⁶` labeled trees).
pub const DEFAULT_ADT_CAP: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeWitness {
    pub value: u32,
    pub edges: Vec<(Vertex, Vertex)>,
}

/// Edges of the labeled tree with the given Prüfer sequence.
pub fn prufer_decode(n: usize, seq: &[Vertex]) -> Vec<(Vertex, Vertex)> {
    debug_assert_eq!(seq.len() + 2, n.max(2));
    if n < 2 {
        return Vec::new();
    }
    let mut degree = vec![1usize; n];
    for &v in seq {
        degree[v] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &v in seq {
        let leaf = (0..n).find(|&u| degree[u] == 1).unwrap();
        edges.push((leaf.min(v), leaf.max(v)));
        degree[leaf] -= 1;
        degree[v] -= 1;
    }
    let rest: Vec<Vertex> = (0..n).filter(|&u| degree[u] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// Exact `adt(G)` over all `n^(n−2)` labeled trees. The witness is the tree
/// of the lexicographically first optimal Prüfer sequence.
pub fn adt_oracle(g: &Graph, dist: &DistanceMatrix, cap: usize) -> Result<TreeWitness, CapExceeded> {
    let n = g.n();
    if n > cap {
        return Err(CapExceeded { what: "adt oracle", size: n as u64, cap: cap as u64 });
    }
    if n <= 2 {
        return Ok(TreeWitness { value: 0, edges: g.edges().collect() });
    }
    let len = n - 2;
    let total = n.pow(len as u32);
    let first = n.pow(len as u32 - 1);
    // Split on the leading symbol; each chunk scans its sequences in order.
    let best = (0..n)
        .into_par_iter()
        .map(|lead| {
            let mut seq = vec![0; len];
            let mut best: Option<(u32, usize)> = None;
            for idx in lead * first..(lead + 1) * first {
                let mut x = idx;
                for slot in seq.iter_mut().rev() {
                    *slot = x % n;
                    x /= n;
                }
                let edges = prufer_decode(n, &seq);
                let dt = tree_distances(n, &edges).expect("Prüfer sequences decode to trees");
                let value = deviation_from_matrix(dist, &dt).additive();
                if best.is_none_or(|(b, _)| value < b) {
                    best = Some((value, idx));
                }
            }
            best.unwrap()
        })
        .reduce_with(|a, b| if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a })
        .unwrap();
    debug_assert!(best.1 < total);
    let mut seq = vec![0; len];
    let mut x = best.1;
    for slot in seq.iter_mut().rev() {
        *slot = x % n;
        x /= n;
    }
    Ok(TreeWitness { value: best.0, edges: prufer_decode(n, &seq) })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicalUpper {
    pub value: u32,
    pub source: Vertex,
    pub edges: Vec<(Vertex, Vertex)>,
}

/// Best canonical tree over all sources (smallest source on ties).
pub fn adt_upper(g: &Graph, dist: &DistanceMatrix) -> CanonicalUpper {
    let n = g.n();
    (0..n)
        .into_par_iter()
        .map(|s| {
            let h = canonical_tree(g, &layering_partition(g, dist, s));
            let edges = h.edges();
            let dt = tree_distances(n, &edges).expect("canonical trees span");
            CanonicalUpper { value: deviation_from_matrix(dist, &dt).additive(), source: s, edges }
        })
        .reduce_with(|a, b| if (b.value, b.source) < (a.value, a.source) { b } else { a })
        .unwrap()
}
