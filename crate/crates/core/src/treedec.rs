//! Tree-decompositions: validation, length/breadth metrics, the
//! expanded-cluster 3-approximation, and exact tree-length / tree-breadth by
//! dynamic programming over eliminated vertex sets.

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{DistanceMatrix, Graph, Vertex};
use crate::layering::{layering_partition, layering_tree};
use crate::CapExceeded;

/// Default vertex cap of [`tl_tb_oracle`].
pub const DEFAULT_ORACLE_CAP: usize = 18;

/// Bags plus a tree over bag indices. Serializes as
/// `{"bags": [[..]], "tree": [[i, j]]}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeDecomposition {
    pub bags: Vec<Vec<Vertex>>,
    pub tree: Vec<(usize, usize)>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MalformedTree {
    #[error("decomposition has no bags")]
    NoBags,
    #[error("tree edge ({0}, {1}) references a missing bag")]
    BagIndex(usize, usize),
    #[error("bag {bag} holds vertex {vertex}, which is not in the graph")]
    VertexOutOfRange { bag: usize, vertex: Vertex },
    #[error("bag tree has {edges} edges for {bags} bags")]
    EdgeCount { edges: usize, bags: usize },
    #[error("bag tree is disconnected: bag {0} is unreachable from bag 0")]
    Disconnected(usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AxiomViolation {
    #[error("vertex {0} is in no bag")]
    MissingVertex(Vertex),
    #[error("edge ({0}, {1}) is in no bag")]
    UncoveredEdge(Vertex, Vertex),
    #[error("bags containing vertex {vertex} are disconnected (e.g. bags {bags:?})")]
    DisconnectedSubtree { vertex: Vertex, bags: (usize, usize) },
}

impl AxiomViolation {
    /// Which of the three decomposition axioms failed.
    pub fn axiom(&self) -> u8 {
        match self {
            AxiomViolation::MissingVertex(_) => 1,
            AxiomViolation::UncoveredEdge(..) => 2,
            AxiomViolation::DisconnectedSubtree { .. } => 3,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecompositionError {
    #[error("malformed decomposition: {0}")]
    Malformed(#[from] MalformedTree),
    #[error("axiom {axiom} violated: {0}", axiom = .0.axiom())]
    Axiom(#[from] AxiomViolation),
}

impl TreeDecomposition {
    fn tree_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.tree {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    fn check_shape(&self, n: usize) -> Result<(), MalformedTree> {
        let k = self.bags.len();
        if k == 0 {
            return Err(MalformedTree::NoBags);
        }
        for (bag, members) in self.bags.iter().enumerate() {
            if let Some(&vertex) = members.iter().find(|&&v| v >= n) {
                return Err(MalformedTree::VertexOutOfRange { bag, vertex });
            }
        }
        if let Some(&(a, b)) = self.tree.iter().find(|&&(a, b)| a >= k || b >= k || a == b) {
            return Err(MalformedTree::BagIndex(a, b));
        }
        if self.tree.len() + 1 != k {
            return Err(MalformedTree::EdgeCount { edges: self.tree.len(), bags: k });
        }
        let adj = self.tree_adjacency();
        let mut seen = vec![false; k];
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(a) = stack.pop() {
            for &b in &adj[a] {
                if !seen[b] {
                    seen[b] = true;
                    stack.push(b);
                }
            }
        }
        match seen.iter().position(|&s| !s) {
            Some(b) => Err(MalformedTree::Disconnected(b)),
            None => Ok(()),
        }
    }
}

/// Checks the tree shape, then the three axioms in order, reporting the
/// first failure.
pub fn validate_decomposition(g: &Graph, td: &TreeDecomposition) -> Result<(), DecompositionError> {
    let n = g.n();
    td.check_shape(n)?;
    let mut holders: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, bag) in td.bags.iter().enumerate() {
        for &v in bag {
            if holders[v].last() != Some(&i) {
                holders[v].push(i);
            }
        }
    }
    if let Some(v) = holders.iter().position(|h| h.is_empty()) {
        return Err(AxiomViolation::MissingVertex(v).into());
    }
    for (u, v) in g.edges() {
        if !td.bags.iter().any(|b| b.contains(&u) && b.contains(&v)) {
            return Err(AxiomViolation::UncoveredEdge(u, v).into());
        }
    }
    let adj = td.tree_adjacency();
    let mut mark = vec![usize::MAX; td.bags.len()];
    for (v, bags) in holders.iter().enumerate() {
        for &b in bags {
            mark[b] = v;
        }
        let mut seen = vec![false; td.bags.len()];
        seen[bags[0]] = true;
        let mut stack = vec![bags[0]];
        while let Some(a) = stack.pop() {
            for &b in &adj[a] {
                if mark[b] == v && !seen[b] {
                    seen[b] = true;
                    stack.push(b);
                }
            }
        }
        if let Some(&b) = bags.iter().find(|&&b| !seen[b]) {
            return Err(AxiomViolation::DisconnectedSubtree { vertex: v, bags: (bags[0], b) }.into());
        }
    }
    Ok(())
}

/// Inner metrics are `None` when some bag induces a disconnected subgraph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionMetrics {
    pub length: u32,
    pub breadth: u32,
    pub inner_length: Option<u32>,
    pub inner_breadth: Option<u32>,
}

/// Eccentricities of every bag vertex inside `G[bag]`, or `None` if the
/// induced subgraph is disconnected.
fn induced_eccentricities(g: &Graph, bag: &[Vertex]) -> Option<Vec<u32>> {
    let mut index = vec![usize::MAX; g.n()];
    for (i, &v) in bag.iter().enumerate() {
        index[v] = i;
    }
    let mut ecc = Vec::with_capacity(bag.len());
    let mut d = vec![u32::MAX; bag.len()];
    let mut queue = VecDeque::new();
    for start in 0..bag.len() {
        d.fill(u32::MAX);
        d[start] = 0;
        queue.push_back(start);
        while let Some(i) = queue.pop_front() {
            for &w in g.neighbors(bag[i]) {
                let j = index[w];
                if j != usize::MAX && d[j] == u32::MAX {
                    d[j] = d[i] + 1;
                    queue.push_back(j);
                }
            }
        }
        ecc.push(*d.iter().max().unwrap());
    }
    (!ecc.contains(&u32::MAX)).then_some(ecc)
}

pub fn decomposition_metrics(g: &Graph, dist: &DistanceMatrix, td: &TreeDecomposition) -> DecompositionMetrics {
    let mut m = DecompositionMetrics { length: 0, breadth: 0, inner_length: Some(0), inner_breadth: Some(0) };
    for bag in td.bags.iter().filter(|b| !b.is_empty()) {
        m.length = m.length.max(dist.set_diameter(bag));
        m.breadth = m.breadth.max(dist.set_radius(bag).0);
        match induced_eccentricities(g, bag) {
            Some(ecc) => {
                let (lo, hi) = (*ecc.iter().min().unwrap(), *ecc.iter().max().unwrap());
                m.inner_length = m.inner_length.map(|x| x.max(hi));
                m.inner_breadth = m.inner_breadth.map(|x| x.max(lo));
            }
            None => {
                m.inner_length = None;
                m.inner_breadth = None;
            }
        }
    }
    m
}

/// One bag `C ∪ (N(C) ∩ L^{i−1})` per cluster of `LP(G, s)`, arranged along
/// the layering tree.
pub fn expanded_cluster_decomposition(g: &Graph, dist: &DistanceMatrix, s: Vertex) -> TreeDecomposition {
    let lp = layering_partition(g, dist, s);
    let tree = layering_tree(g, &lp);
    let bags = lp
        .clusters
        .iter()
        .map(|c| {
            let mut bag = c.members.clone();
            for &v in &c.members {
                bag.extend(g.neighbors(v).iter().filter(|&&w| lp.layer_of[w] + 1 == c.layer));
            }
            bag.sort_unstable();
            bag.dedup();
            bag
        })
        .collect();
    TreeDecomposition { bags, tree: tree.edges }
}

/// `{v}` plus every vertex outside `S ∪ {v}` that is adjacent to `v` or
/// reachable from `v` through vertices of `S` only. Ascending.
pub fn elimination_bag(g: &Graph, v: Vertex, eliminated: &[Vertex]) -> Vec<Vertex> {
    let mut in_s = vec![false; g.n()];
    for &u in eliminated {
        in_s[u] = true;
    }
    elimination_bag_flags(g, v, &in_s)
}

fn elimination_bag_flags(g: &Graph, v: Vertex, in_s: &[bool]) -> Vec<Vertex> {
    let mut seen = vec![false; g.n()];
    seen[v] = true;
    let mut bag = vec![v];
    let mut stack = vec![v];
    while let Some(u) = stack.pop() {
        for &w in g.neighbors(u) {
            if seen[w] {
                continue;
            }
            seen[w] = true;
            if in_s[w] {
                stack.push(w);
            } else {
                bag.push(w);
            }
        }
    }
    bag.sort_unstable();
    bag
}

/// Same as [`elimination_bag`] on bitmasks (`n ≤ 32`).
fn elimination_bag_mask(nbr: &[u32], v: usize, s: u32) -> u32 {
    let mut comp = 1u32 << v;
    let mut frontier = comp;
    let mut around = 0u32;
    while frontier != 0 {
        let mut next = 0u32;
        let mut f = frontier;
        while f != 0 {
            let u = f.trailing_zeros() as usize;
            f &= f - 1;
            next |= nbr[u];
        }
        around |= next;
        frontier = next & s & !comp;
        comp |= frontier;
    }
    (around & !s) | (1 << v)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeOracle {
    pub tl: u32,
    pub tb: u32,
    /// An elimination ordering whose bags all have diameter at most `tl`.
    pub tl_order: Vec<Vertex>,
    /// An elimination ordering whose bags all have radius at most `tb`.
    pub tb_order: Vec<Vertex>,
}

/// Exact tree-length and tree-breadth.
///
/// For each threshold the DP marks the eliminated sets `S` reachable by an
/// ordering whose bags so far all pass the threshold; the bag of `v` given
/// `S` depends only on `S`, so `2^n · n` bag evaluations settle a threshold.
/// Thresholds are tried upward from 1.
pub fn tl_tb_oracle(g: &Graph, dist: &DistanceMatrix, cap: usize) -> Result<TreeOracle, CapExceeded> {
    let n = g.n();
    if n > cap.min(32) {
        return Err(CapExceeded { what: "tree-length oracle", size: n as u64, cap: cap.min(32) as u64 });
    }
    if n == 1 {
        return Ok(TreeOracle { tl: 0, tb: 0, tl_order: vec![0], tb_order: vec![0] });
    }
    let nbr: Vec<u32> = (0..n).map(|v| g.neighbors(v).iter().fold(0, |m, &w| m | 1 << w)).collect();
    let full: u32 = if n == 32 { u32::MAX } else { (1 << n) - 1 };
    let states = full as usize + 1;
    // bags[s * n + v] for v ∉ s.
    let mut bags = vec![0u32; states * n];
    bags.par_chunks_mut(n).enumerate().for_each(|(s, row)| {
        for (v, slot) in row.iter_mut().enumerate() {
            if s >> v & 1 == 0 {
                *slot = elimination_bag_mask(&nbr, v, s as u32);
            }
        }
    });
    let within = |r: u32| -> Vec<u32> {
        (0..n).map(|a| (0..n).filter(|&b| dist.get(a, b) <= r).fold(0, |m, b| m | 1 << b)).collect()
    };
    let diam_ok = |near: &[u32], bag: u32| {
        let mut b = bag;
        while b != 0 {
            let a = b.trailing_zeros() as usize;
            b &= b - 1;
            if bag & !near[a] != 0 {
                return false;
            }
        }
        true
    };
    let radius_ok = |near: &[u32], bag: u32| near.iter().any(|&m| bag & !m == 0);

    let search = |ok: &dyn Fn(&[u32], u32) -> bool| -> (u32, Vec<Vertex>) {
        let mut reach = vec![false; states];
        for r in 1.. {
            let near = within(r);
            reach.fill(false);
            reach[0] = true;
            for s in 1..states {
                let mut rest = s as u32;
                while rest != 0 {
                    let v = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    let prev = s & !(1 << v);
                    if reach[prev] && ok(&near, bags[prev * n + v]) {
                        reach[s] = true;
                        break;
                    }
                }
            }
            if reach[full as usize] {
                let mut order = Vec::with_capacity(n);
                let mut s = full as usize;
                while s != 0 {
                    let v = (0..n)
                        .find(|&v| {
                            s >> v & 1 == 1 && {
                                let prev = s & !(1 << v);
                                reach[prev] && ok(&near, bags[prev * n + v])
                            }
                        })
                        .expect("reachable state has a predecessor");
                    order.push(v);
                    s &= !(1 << v);
                }
                order.reverse();
                return (r, order);
            }
        }
        unreachable!("threshold n always succeeds")
    };
    let (tl, tl_order) = search(&diam_ok);
    let (tb, tb_order) = search(&radius_ok);
    Ok(TreeOracle { tl, tb, tl_order, tb_order })
}

/// Elimination bags along `order`, each linked to the bag of the
/// earliest-eliminated vertex of its remainder.
///
/// # Panics
/// If `order` is not a permutation of the vertices.
pub fn decomposition_from_ordering(g: &Graph, order: &[Vertex]) -> TreeDecomposition {
    let n = g.n();
    let mut position = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        assert!(position[v] == usize::MAX, "vertex {v} repeated in ordering");
        position[v] = i;
    }
    assert_eq!(order.len(), n, "ordering must cover every vertex");
    let mut in_s = vec![false; n];
    let mut bags = Vec::with_capacity(n);
    let mut tree = Vec::new();
    for (i, &v) in order.iter().enumerate() {
        let bag = elimination_bag_flags(g, v, &in_s);
        if let Some(j) = bag.iter().filter(|&&u| u != v).map(|&u| position[u]).min() {
            tree.push((i, j));
        }
        bags.push(bag);
        in_s[v] = true;
    }
    TreeDecomposition { bags, tree }
}
