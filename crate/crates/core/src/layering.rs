//! Layering partitions `LP(G, s)`, the layering tree `Γ(G, s)`, cluster
//! diameter / radius, and the canonical tree `H` that approximates `d_G`
//! additively.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{DistanceMatrix, Graph, Vertex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("tree has {edges} edges, expected {expected}")]
    EdgeCount { edges: usize, expected: usize },
    #[error("tree edge ({0}, {1}) references a vertex outside the graph")]
    OutOfRange(Vertex, Vertex),
    #[error("tree does not span: vertex {0} is unreachable from vertex 0")]
    NotSpanning(Vertex),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cluster {
    pub layer: u32,
    /// Ascending.
    pub members: Vec<Vertex>,
}

/// Clusters are numbered in `(layer, smallest member)` order, so cluster 0
/// is always `{s}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LayeringPartition {
    pub source: Vertex,
    pub layer_of: Vec<u32>,
    pub cluster_of: Vec<usize>,
    pub clusters: Vec<Cluster>,
}

impl LayeringPartition {
    pub fn depth(&self) -> u32 {
        self.layer_of.iter().copied().max().unwrap_or(0)
    }

    /// Vertices of layer `i`, ascending.
    pub fn layer(&self, i: u32) -> Vec<Vertex> {
        (0..self.layer_of.len()).filter(|&v| self.layer_of[v] == i).collect()
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Builds `LP(G, s)`.
///
/// Edges are bucketed by the smaller layer of their endpoints and merged
/// into a union-find from the deepest layer upwards; after merging bucket
/// `i`, two layer-`i` vertices share a root exactly when they are joined by
/// a path avoiding `D_{i−1}(s)`.
pub fn layering_partition(g: &Graph, dist: &DistanceMatrix, s: Vertex) -> LayeringPartition {
    let n = g.n();
    let layer_of: Vec<u32> = dist.row(s).to_vec();
    let depth = layer_of.iter().copied().max().unwrap_or(0) as usize;

    let mut buckets: Vec<Vec<(Vertex, Vertex)>> = vec![Vec::new(); depth + 1];
    for (u, v) in g.edges() {
        buckets[layer_of[u].min(layer_of[v]) as usize].push((u, v));
    }
    let mut by_layer: Vec<Vec<Vertex>> = vec![Vec::new(); depth + 1];
    for v in 0..n {
        by_layer[layer_of[v] as usize].push(v);
    }

    let mut uf = UnionFind::new(n);
    let mut groups: Vec<Cluster> = Vec::new();
    for i in (0..=depth).rev() {
        for &(u, v) in &buckets[i] {
            uf.union(u, v);
        }
        let mut per_root: Vec<(usize, Vec<Vertex>)> = Vec::new();
        for &v in &by_layer[i] {
            let r = uf.find(v);
            match per_root.iter_mut().find(|(root, _)| *root == r) {
                Some((_, members)) => members.push(v),
                None => per_root.push((r, vec![v])),
            }
        }
        groups.extend(per_root.into_iter().map(|(_, members)| Cluster { layer: i as u32, members }));
    }
    groups.sort_by(|a, b| (a.layer, a.members[0]).cmp(&(b.layer, b.members[0])));

    let mut cluster_of = vec![0; n];
    for (id, c) in groups.iter().enumerate() {
        for &v in &c.members {
            cluster_of[v] = id;
        }
    }
    LayeringPartition { source: s, layer_of, cluster_of, clusters: groups }
}

/// `Γ(G, s)`: one node per cluster, an edge wherever a graph edge crosses
/// clusters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LayeringTree {
    pub nodes: usize,
    /// `(a, b)` with `a < b`, sorted.
    pub edges: Vec<(usize, usize)>,
}

impl LayeringTree {
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.nodes];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }
}

/// # Panics
/// If the cluster graph is not a tree, which would mean `lp` was not built
/// from `g`.
pub fn layering_tree(g: &Graph, lp: &LayeringPartition) -> LayeringTree {
    let edges: BTreeSet<(usize, usize)> = g
        .edges()
        .filter_map(|(u, v)| {
            let (a, b) = (lp.cluster_of[u], lp.cluster_of[v]);
            (a != b).then(|| (a.min(b), a.max(b)))
        })
        .collect();
    let tree = LayeringTree { nodes: lp.clusters.len(), edges: edges.into_iter().collect() };
    assert_eq!(tree.edges.len() + 1, tree.nodes, "layering tree must be a tree");
    let adj = tree.adjacency();
    let mut seen = vec![false; tree.nodes];
    seen[0] = true;
    let mut queue = VecDeque::from([0]);
    while let Some(a) = queue.pop_front() {
        for &b in &adj[a] {
            if !seen[b] {
                seen[b] = true;
                queue.push_back(b);
            }
        }
    }
    assert!(seen.iter().all(|&x| x), "layering tree must be connected");
    tree
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ClusterMetrics {
    /// `Δ_s`
    pub diameter: u32,
    /// `ρ_s`
    pub radius: u32,
    /// A pair realizing the diameter (first in cluster, then vertex order).
    pub diameter_pair: (Vertex, Vertex),
}

/// `Δ_s` and `ρ_s` of one partition. Radius centers range over all of `V`.
pub fn cluster_metrics(dist: &DistanceMatrix, lp: &LayeringPartition) -> ClusterMetrics {
    let mut out = ClusterMetrics { diameter: 0, radius: 0, diameter_pair: (lp.source, lp.source) };
    for c in &lp.clusters {
        let m = &c.members;
        for (i, &u) in m.iter().enumerate() {
            for &v in &m[i + 1..] {
                let d = dist.get(u, v);
                if d > out.diameter {
                    out.diameter = d;
                    out.diameter_pair = (u, v);
                }
            }
        }
        out.radius = out.radius.max(dist.set_radius(m).0);
    }
    out
}

/// Per-source metrics and their extremes over all sources.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LayeringMetrics {
    pub per_source: Vec<ClusterMetrics>,
    /// `Δ(G)` and the smallest source attaining it.
    pub delta: (u32, Vertex),
    /// `Δ̂(G)`
    pub delta_hat: (u32, Vertex),
    /// `ρ(G)`
    pub rho: (u32, Vertex),
    /// `ρ̂(G)`
    pub rho_hat: (u32, Vertex),
}

pub fn cluster_metrics_all(g: &Graph, dist: &DistanceMatrix) -> LayeringMetrics {
    let per_source: Vec<ClusterMetrics> =
        (0..g.n()).into_par_iter().map(|s| cluster_metrics(dist, &layering_partition(g, dist, s))).collect();
    let argmin =
        |f: &dyn Fn(&ClusterMetrics) -> u32| per_source.iter().enumerate().map(|(s, m)| (f(m), s)).min().unwrap();
    let argmax = |f: &dyn Fn(&ClusterMetrics) -> u32| {
        per_source.iter().enumerate().map(|(s, m)| (f(m), std::cmp::Reverse(s))).max().map(|(v, s)| (v, s.0)).unwrap()
    };
    LayeringMetrics {
        delta: argmin(&|m| m.diameter),
        delta_hat: argmax(&|m| m.diameter),
        rho: argmin(&|m| m.radius),
        rho_hat: argmax(&|m| m.radius),
        per_source,
    }
}

/// Spanning tree rooted at the layering source.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicalTree {
    pub root: Vertex,
    pub parent: Vec<Option<Vertex>>,
}

impl CanonicalTree {
    /// `(parent, child)` pairs in child order.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        self.parent.iter().enumerate().filter_map(|(v, p)| p.map(|p| (p, v))).collect()
    }

    /// Edge-list file with a `# root <s>` header, using the graph's labels.
    pub fn to_edge_list(&self, g: &Graph) -> String {
        let mut out = format!("# root {}\n", g.label(self.root));
        for (p, v) in self.edges() {
            let _ = writeln!(out, "{} {}", g.label(p), g.label(v));
        }
        out
    }
}

/// Canonical tree `H`: every vertex of a non-root cluster `C` hangs off
/// `x_C`, the smallest-id vertex of the previous layer adjacent to `C`.
pub fn canonical_tree(g: &Graph, lp: &LayeringPartition) -> CanonicalTree {
    let mut parent = vec![None; g.n()];
    for c in lp.clusters.iter().skip(1) {
        let x_c = c
            .members
            .iter()
            .flat_map(|&v| g.neighbors(v).iter().copied())
            .filter(|&w| lp.layer_of[w] + 1 == c.layer)
            .min()
            .expect("every non-root cluster has a neighbor one layer up");
        for &v in &c.members {
            parent[v] = Some(x_c);
        }
    }
    CanonicalTree { root: lp.source, parent }
}

/// Extremes of `d_T − d_G` (`max_over`) and `d_G − d_T` (`max_under`) over
/// all vertex pairs. Both are at least 0 because `u = v` is included.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TreeDeviation {
    pub max_over: u32,
    pub max_under: u32,
}

impl TreeDeviation {
    /// `max |d_G − d_T|`
    pub fn additive(&self) -> u32 {
        self.max_over.max(self.max_under)
    }
}

/// All-pairs distances in a tree on `0..n` given by its edges.
pub fn tree_distances(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Vec<u32>, TreeError> {
    if edges.len() + 1 != n {
        return Err(TreeError::EdgeCount { edges: edges.len(), expected: n.saturating_sub(1) });
    }
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        if a >= n || b >= n {
            return Err(TreeError::OutOfRange(a, b));
        }
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut d = vec![u32::MAX; n * n];
    let mut queue = VecDeque::new();
    for s in 0..n {
        let row = &mut d[s * n..(s + 1) * n];
        row[s] = 0;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u] {
                if row[w] == u32::MAX {
                    row[w] = row[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if let Some(v) = row.iter().position(|&x| x == u32::MAX) {
            return Err(TreeError::NotSpanning(v));
        }
    }
    Ok(d)
}

pub fn tree_additive_deviation(
    dist: &DistanceMatrix,
    tree_edges: &[(Vertex, Vertex)],
) -> Result<TreeDeviation, TreeError> {
    let n = dist.n();
    let dt = tree_distances(n, tree_edges)?;
    Ok(deviation_from_matrix(dist, &dt))
}

pub(crate) fn deviation_from_matrix(dist: &DistanceMatrix, dt: &[u32]) -> TreeDeviation {
    let n = dist.n();
    let mut dev = TreeDeviation { max_over: 0, max_under: 0 };
    for u in 0..n {
        for v in u + 1..n {
            let (g, t) = (dist.get(u, v), dt[u * n + v]);
            if t > g {
                dev.max_over = dev.max_over.max(t - g);
            } else {
                dev.max_under = dev.max_under.max(g - t);
            }
        }
    }
    dev
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::{bow, cycle, path};

    fn members(lp: &LayeringPartition) -> Vec<Vec<Vertex>> {
        lp.clusters.iter().map(|c| c.members.clone()).collect()
    }

    #[test]
    fn partitions_of_small_graphs() {
        let c6 = cycle(6);
        let d = DistanceMatrix::new(&c6);
        let lp = layering_partition(&c6, &d, 0);
        assert_eq!(members(&lp), vec![vec![0], vec![1, 5], vec![2, 4], vec![3]]);

        let c12 = cycle(12);
        let d = DistanceMatrix::new(&c12);
        let lp = layering_partition(&c12, &d, 0);
        let mut expected = vec![vec![0]];
        expected.extend((1..=5).map(|i| vec![i, 12 - i]));
        expected.push(vec![6]);
        assert_eq!(members(&lp), expected);

        let p5 = path(5);
        let d = DistanceMatrix::new(&p5);
        let lp = layering_partition(&p5, &d, 2);
        assert!(lp.clusters.iter().all(|c| c.members.len() == 1));
    }

    #[test]
    fn layering_trees() {
        let p5 = path(5);
        let d = DistanceMatrix::new(&p5);
        let t = layering_tree(&p5, &layering_partition(&p5, &d, 0));
        assert_eq!(t.edges, vec![(0, 1), (1, 2), (2, 3), (3, 4)]);

        let c6 = cycle(6);
        let d = DistanceMatrix::new(&c6);
        let t = layering_tree(&c6, &layering_partition(&c6, &d, 0));
        assert_eq!(t.edges, vec![(0, 1), (1, 2), (2, 3)]);

        let b = bow();
        let d = DistanceMatrix::new(&b);
        let lp = layering_partition(&b, &d, 0);
        assert_eq!(members(&lp), vec![vec![0], vec![1, 2], vec![3, 4]]);
        assert_eq!(layering_tree(&b, &lp).edges, vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn metrics() {
        let p5 = path(5);
        let d = DistanceMatrix::new(&p5);
        let m = cluster_metrics(&d, &layering_partition(&p5, &d, 1));
        assert_eq!((m.diameter, m.radius), (0, 0));

        let c6 = cycle(6);
        let d = DistanceMatrix::new(&c6);
        let m = cluster_metrics(&d, &layering_partition(&c6, &d, 0));
        assert_eq!((m.diameter, m.radius), (2, 1));
        let all = cluster_metrics_all(&c6, &d);
        assert_eq!((all.delta.0, all.delta_hat.0), (2, 2));
        assert_eq!((all.rho.0, all.rho_hat.0), (1, 1));

        let c12 = cycle(12);
        let d = DistanceMatrix::new(&c12);
        let m = cluster_metrics(&d, &layering_partition(&c12, &d, 0));
        assert_eq!((m.diameter, m.radius), (6, 3));
        assert_eq!(m.diameter_pair, (3, 9));
    }

    #[test]
    fn canonical_trees() {
        let c6 = cycle(6);
        let d = DistanceMatrix::new(&c6);
        let h = canonical_tree(&c6, &layering_partition(&c6, &d, 0));
        assert_eq!(h.parent, vec![None, Some(0), Some(1), Some(2), Some(1), Some(0)]);
        let dev = tree_additive_deviation(&d, &h.edges()).unwrap();
        assert!(dev.max_over <= 2 && dev.max_under <= 2);

        let p5 = path(5);
        let d = DistanceMatrix::new(&p5);
        let h = canonical_tree(&p5, &layering_partition(&p5, &d, 2));
        let mut edges: Vec<_> = h.edges().into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        edges.sort_unstable();
        assert_eq!(edges, p5.edges().collect::<Vec<_>>());
        assert_eq!(h.to_edge_list(&p5).lines().next(), Some("# root 2"));
    }

    #[test]
    fn deviation_of_star_on_c6() {
        let c6 = cycle(6);
        let d = DistanceMatrix::new(&c6);
        let star: Vec<_> = (1..6).map(|v| (0, v)).collect();
        // Brute force over the 15 pairs.
        let mut under = 0i64;
        let mut over = 0i64;
        for u in 0..6 {
            for v in u + 1..6 {
                let dt = if u == 0 { 1 } else { 2 };
                under = under.max(d.get(u, v) as i64 - dt);
                over = over.max(dt - d.get(u, v) as i64);
            }
        }
        let dev = tree_additive_deviation(&d, &star).unwrap();
        assert_eq!((dev.max_under as i64, dev.max_over as i64), (under, over));
        assert_eq!(dev.max_under, 2);
    }

    #[test]
    fn rejects_non_trees() {
        let c6 = cycle(6);
        let d = DistanceMatrix::new(&c6);
        assert!(matches!(tree_additive_deviation(&d, &[(0, 1)]), Err(TreeError::EdgeCount { .. })));
        let cyc = [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5)];
        assert!(matches!(tree_additive_deviation(&d, &cyc), Err(TreeError::NotSpanning(_))));
        assert!(matches!(
            tree_additive_deviation(&d, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 9)]),
            Err(TreeError::OutOfRange(4, 9))
        ));
    }
}
