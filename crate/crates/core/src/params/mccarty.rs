//! McCarty widths and balanced disk separators.

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{DiskComponents, IN_DISK};
use crate::graph::{component_labels, DistanceMatrix, Graph, Vertex};
use crate::layering::{cluster_metrics_all, layering_partition, layering_tree};
use crate::CapExceeded;

/// Default cap on the number of `k`-subsets examined by [`mccarty_width_k`].
pub const DEFAULT_SUBSET_CAP: u64 = 20_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Width {
    pub value: u32,
    /// A vertex set attaining `value` (first in lexicographic order).
    pub witness: Vec<Vertex>,
}

/// Least `r` such that `D_r(x)` absorbs or separates `a` and `b`.
fn pair_radius(dc: &DiskComponents, dist: &DistanceMatrix, x: Vertex, a: Vertex, b: Vertex) -> u32 {
    let cap = dist.get(x, a).min(dist.get(x, b));
    (0..cap).find(|&r| dc.separates(x, r, a, b)).unwrap_or(cap)
}

/// `mcw(G)`: the maximum over vertex triples of the least radius of a disk
/// leaving no component with two of the triple. Separation is monotone in
/// `r`, so a triple's radius at `x` is the largest of its three pair radii.
pub fn mccarty_width(dist: &DistanceMatrix, dc: &DiskComponents) -> Width {
    let n = dist.n();
    if n < 3 {
        return Width { value: 0, witness: Vec::new() };
    }
    let pair: Vec<u32> = (0..n)
        .into_par_iter()
        .flat_map_iter(|x| {
            (0..n).flat_map(move |a| (0..n).map(move |b| if a < b { pair_radius(dc, dist, x, a, b) } else { 0 }))
        })
        .collect();
    let at = |x: usize, a: usize, b: usize| pair[(x * n + a) * n + b];
    let per_a: Vec<Width> = (0..n)
        .into_par_iter()
        .map(|a| {
            let mut best = Width { value: 0, witness: Vec::new() };
            for b in a + 1..n {
                for c in b + 1..n {
                    let r = (0..n).map(|x| at(x, a, b).max(at(x, a, c)).max(at(x, b, c))).min().unwrap();
                    if best.witness.is_empty() || r > best.value {
                        best = Width { value: r, witness: vec![a, b, c] };
                    }
                }
            }
            best
        })
        .collect();
    first_max(per_a)
}

fn first_max(items: Vec<Width>) -> Width {
    items
        .into_iter()
        .filter(|w| !w.witness.is_empty())
        .fold(None, |acc: Option<Width>, w| match acc {
            Some(a) if a.value >= w.value => Some(a),
            _ => Some(w),
        })
        .unwrap_or(Width { value: 0, witness: Vec::new() })
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Whether every component of `G − D_r(c)` holds at most `|X|/2` of `X`.
fn balanced(labels: &[u32], count: u32, set: &[Vertex], scratch: &mut Vec<u32>) -> bool {
    scratch.clear();
    scratch.resize(count as usize, 0);
    for &x in set {
        let l = labels[x];
        if l != IN_DISK {
            scratch[l as usize] += 1;
            if 2 * scratch[l as usize] as usize > set.len() {
                return false;
            }
        }
    }
    true
}

/// Minimum balancing radius over all centers, ties to the smaller center.
fn exhaustive_separator(dc: &DiskComponents, set: &[Vertex], n: usize) -> (u32, Vertex) {
    let mut best = (u32::MAX, 0);
    let mut scratch = Vec::new();
    for v in 0..n {
        let limit = dc.eccentricity(v).min(best.0);
        let r = (0..limit)
            .find(|&r| balanced(dc.labels(v, r).unwrap(), dc.component_count(v, r), set, &mut scratch))
            .unwrap_or(limit);
        if r < best.0 {
            best = (r, v);
        }
    }
    best
}

/// `mcw_k(G)`: the maximum over `k`-subsets `X` of the least radius of a
/// balanced disk separator for `X`.
pub fn mccarty_width_k(dist: &DistanceMatrix, dc: &DiskComponents, k: usize, cap: u64) -> Result<Width, CapExceeded> {
    let n = dist.n();
    let count = binomial(n as u64, k as u64);
    if count > cap {
        return Err(CapExceeded { what: "k-subsets", size: count, cap });
    }
    let subsets: Vec<Vec<Vertex>> = (0..n).combinations(k).collect();
    let widths: Vec<Width> =
        subsets.into_par_iter().map(|x| Width { value: exhaustive_separator(dc, &x, n).0, witness: x }).collect();
    Ok(first_max(widths))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "method", content = "source")]
pub enum SeparatorMethod {
    /// Median cluster of the layering tree rooted at the given source.
    Layering(Vertex),
    /// Minimum radius over all centers.
    Exhaustive,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeparatorError {
    #[error("the marked set is empty")]
    EmptySet,
    #[error("vertex {0} is not in the graph")]
    VertexOutOfRange(Vertex),
}

/// A disk `D_radius(center)` and the load `|component ∩ X|` of every
/// component of `G − D_radius(center)`, ordered by smallest vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparatorCertificate {
    pub center: Vertex,
    pub radius: u32,
    pub set: Vec<Vertex>,
    pub component_loads: Vec<u32>,
}

fn loads(g: &Graph, dist: &DistanceMatrix, center: Vertex, radius: u32, set: &[Vertex]) -> Vec<u32> {
    let removed: Vec<bool> = dist.row(center).iter().map(|&d| d <= radius).collect();
    let (labels, count) = component_labels(g, &removed);
    let mut out = vec![0; count as usize];
    for &x in set {
        if let Some(l) = labels[x] {
            out[l as usize] += 1;
        }
    }
    out
}

impl SeparatorCertificate {
    pub fn is_balanced(&self) -> bool {
        self.component_loads.iter().all(|&l| 2 * l as usize <= self.set.len())
    }

    /// Recomputes the loads from the graph and checks balance.
    pub fn recertify(&self, g: &Graph, dist: &DistanceMatrix) -> bool {
        self.center < g.n()
            && loads(g, dist, self.center, self.radius, &self.set) == self.component_loads
            && self.is_balanced()
    }
}

pub fn balanced_separator_for_set(
    g: &Graph,
    dist: &DistanceMatrix,
    set: &[Vertex],
    method: SeparatorMethod,
) -> Result<SeparatorCertificate, SeparatorError> {
    let n = g.n();
    if let Some(&v) = set.iter().find(|&&v| v >= n) {
        return Err(SeparatorError::VertexOutOfRange(v));
    }
    let mut set = set.to_vec();
    set.sort_unstable();
    set.dedup();
    if set.is_empty() {
        return Err(SeparatorError::EmptySet);
    }
    let (center, radius) = match method {
        SeparatorMethod::Layering(s) => {
            if s >= n {
                return Err(SeparatorError::VertexOutOfRange(s));
            }
            layering_median(g, dist, s, &set)
        }
        SeparatorMethod::Exhaustive => {
            let mut best = (u32::MAX, 0);
            for v in 0..n {
                let limit = dist.eccentricity(v).min(best.0);
                let r = (0..limit)
                    .find(|&r| loads(g, dist, v, r, &set).iter().all(|&l| 2 * l as usize <= set.len()))
                    .unwrap_or(limit);
                if r < best.0 {
                    best = (r, v);
                }
            }
            (best.1, best.0)
        }
    };
    let component_loads = loads(g, dist, center, radius, &set);
    Ok(SeparatorCertificate { center, radius, set, component_loads })
}

/// Weighted median of the layering tree (weights `|C ∩ X|`, ties to the
/// smallest cluster id), covered by a disk around its smallest vertex.
fn layering_median(g: &Graph, dist: &DistanceMatrix, s: Vertex, set: &[Vertex]) -> (Vertex, u32) {
    let lp = layering_partition(g, dist, s);
    let tree = layering_tree(g, &lp);
    let k = tree.nodes;
    let mut weight = vec![0u64; k];
    for &x in set {
        weight[lp.cluster_of[x]] += 1;
    }
    let total = set.len() as u64;
    let adj = tree.adjacency();
    // Root at cluster 0; children have larger BFS order.
    let mut order = vec![0];
    let mut parent = vec![usize::MAX; k];
    parent[0] = 0;
    let mut i = 0;
    while i < order.len() {
        let a = order[i];
        for &b in &adj[a] {
            if parent[b] == usize::MAX {
                parent[b] = a;
                order.push(b);
            }
        }
        i += 1;
    }
    let mut sub = weight.clone();
    for &a in order.iter().skip(1).rev() {
        sub[parent[a]] += sub[a];
    }
    let median = (0..k)
        .find(|&c| {
            let above = total - sub[c];
            2 * above <= total && adj[c].iter().all(|&b| b == parent[c] || 2 * sub[b] <= total)
        })
        .expect("every weighted tree has a median");
    let members = &lp.clusters[median].members;
    let u = members[0];
    let r = members.iter().map(|&c| dist.get(u, c)).max().unwrap();
    (u, r)
}

/// `ρ(G)`, which bounds `mcw(G)` and every `mcw_k(G)` from above.
pub fn mcw_upper_from_separators(g: &Graph, dist: &DistanceMatrix) -> u32 {
    cluster_metrics_all(g, dist).rho.0
}
