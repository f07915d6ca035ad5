//! Simple connected undirected graphs, hop-distance matrices and the small
//! set of metric primitives (disks, components after removal, chordality)
//! that the rest of the crate is built on.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use thiserror::Error;

/// Dense vertex id in `0..n`.
pub type Vertex = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("line {line}: loop edge at vertex {vertex}")]
    Loop { line: usize, vertex: u64 },
    #[error("line {line}: duplicate edge {u} {v}")]
    DuplicateEdge { line: usize, u: u64, v: u64 },
    #[error("graph has no vertices")]
    Empty,
    #[error("graph is disconnected: vertex {unreachable} is not reachable from vertex {root}")]
    Disconnected { root: u64, unreachable: u64 },
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
}

/// Immutable simple connected undirected graph on vertices `0..n`.
///
/// Adjacency lists are sorted. `labels[v]` is the id the vertex carried in
/// the input it was built from (the identity for generated graphs).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    labels: Vec<u64>,
    m: usize,
}

impl Graph {
    /// Builds a graph on `0..n` from an edge list.
    ///
    /// Loops and duplicate edges are rejected (reported with line 0, since
    /// there is no source text), as is a disconnected result.
    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut adj = vec![Vec::new(); n];
        let mut seen = BTreeSet::new();
        for &(u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(GraphError::Loop { line: 0, vertex: u as u64 });
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(GraphError::DuplicateEdge { line: 0, u: u as u64, v: v as u64 });
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        Self::finish(adj, (0..n as u64).collect())
    }

    fn finish(mut adj: Vec<Vec<Vertex>>, labels: Vec<u64>) -> Result<Self, GraphError> {
        for list in &mut adj {
            list.sort_unstable();
        }
        let m = adj.iter().map(Vec::len).sum::<usize>() / 2;
        let graph = Graph { adj, labels, m };
        let dist = graph.bfs(0);
        if let Some(v) = dist.iter().position(|d| d.is_none()) {
            return Err(GraphError::Disconnected { root: graph.labels[0], unreachable: graph.labels[v] });
        }
        Ok(graph)
    }

    /// Parses the whitespace-separated edge-list format (`#` comments).
    ///
    /// Original ids are remapped to `0..n` in ascending order; the mapping is
    /// kept in [`Graph::label`].
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut raw = Vec::new();
        let mut seen = BTreeSet::new();
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let content = line.split('#').next().unwrap_or("");
            let tokens: Vec<&str> = content.split_whitespace().collect();
            if tokens.is_empty() {
                continue;
            }
            if tokens.len() != 2 {
                return Err(GraphError::Parse {
                    line: line_no,
                    reason: format!("expected two vertex ids, found {} tokens", tokens.len()),
                });
            }
            let mut ends = [0u64; 2];
            for (slot, tok) in ends.iter_mut().zip(&tokens) {
                *slot = tok.parse().map_err(|_| GraphError::Parse {
                    line: line_no,
                    reason: format!("`{tok}` is not a nonnegative integer"),
                })?;
            }
            let [u, v] = ends;
            if u == v {
                return Err(GraphError::Loop { line: line_no, vertex: u });
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(GraphError::DuplicateEdge { line: line_no, u, v });
            }
            raw.push((u, v));
        }
        if raw.is_empty() {
            return Err(GraphError::Empty);
        }
        let labels: Vec<u64> = raw.iter().flat_map(|&(u, v)| [u, v]).collect::<BTreeSet<_>>().into_iter().collect();
        let index = |x: u64| labels.binary_search(&x).expect("label collected above");
        let mut adj = vec![Vec::new(); labels.len()];
        for &(u, v) in &raw {
            let (a, b) = (index(u), index(v));
            adj[a].push(b);
            adj[b].push(a);
        }
        Self::finish(adj, labels)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Original id of `v` in the input the graph was parsed from.
    pub fn label(&self, v: Vertex) -> u64 {
        self.labels[v]
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<(), GraphError> {
        if v < self.n() {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange { vertex: v, n: self.n() })
        }
    }

    /// Hop distances from `source`; `None` for unreachable vertices.
    pub fn bfs(&self, source: Vertex) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.n()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &w in &self.adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Shortest path from `from` to `to` inside the vertices allowed by
    /// `allowed` (both endpoints must be allowed). Ties are broken towards
    /// smaller ids: each vertex's predecessor is its smallest-id neighbor on
    /// the previous BFS layer.
    pub fn shortest_path_within(&self, from: Vertex, to: Vertex, allowed: &[bool]) -> Option<Vec<Vertex>> {
        if !allowed[from] || !allowed[to] {
            return None;
        }
        let mut dist = vec![u32::MAX; self.n()];
        dist[to] = 0;
        let mut queue = VecDeque::from([to]);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if allowed[w] && dist[w] == u32::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if dist[from] == u32::MAX {
            return None;
        }
        // Walk from `from` downhill towards `to`, always taking the smallest id.
        let mut path = vec![from];
        let mut cur = from;
        while cur != to {
            cur = *self.adj[cur]
                .iter()
                .find(|&&w| allowed[w] && dist[w] + 1 == dist[cur])
                .expect("downhill neighbor exists");
            path.push(cur);
        }
        Some(path)
    }

    /// Serializes in the edge-list format using the original ids.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{} {}", self.labels[u], self.labels[v]);
        }
        out
    }

    /// Induced connectivity of a vertex set. The empty set is not connected.
    pub fn is_connected_subset(&self, set: &[Vertex]) -> bool {
        let Some(&start) = set.first() else {
            return false;
        };
        let mut inside = vec![false; self.n()];
        for &v in set {
            inside[v] = true;
        }
        let mut seen = vec![false; self.n()];
        seen[start] = true;
        let mut stack = vec![start];
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &w in &self.adj[u] {
                if inside[w] && !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        let distinct = set.iter().collect::<BTreeSet<_>>().len();
        count == distinct
    }
}

/// Full `n × n` matrix of hop distances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<u32>,
}

impl DistanceMatrix {
    /// BFS from every vertex.
    pub fn new(g: &Graph) -> Self {
        let n = g.n();
        let mut d = Vec::with_capacity(n * n);
        for s in 0..n {
            d.extend(g.bfs(s).into_iter().map(|x| x.expect("graph is connected")));
        }
        DistanceMatrix { n, d }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, u: Vertex, v: Vertex) -> u32 {
        self.d[u * self.n + v]
    }

    pub fn row(&self, u: Vertex) -> &[u32] {
        &self.d[u * self.n..(u + 1) * self.n]
    }

    pub fn eccentricity(&self, v: Vertex) -> u32 {
        self.row(v).iter().copied().max().unwrap_or(0)
    }

    pub fn diameter(&self) -> u32 {
        self.d.iter().copied().max().unwrap_or(0)
    }

    /// `min_{u in set} d(v, u)`; `u32::MAX` for an empty set.
    pub fn to_set(&self, v: Vertex, set: &[Vertex]) -> u32 {
        set.iter().map(|&u| self.get(v, u)).min().unwrap_or(u32::MAX)
    }

    /// `min_{a in A, b in B} d(a, b)` together with a realizing pair.
    pub fn between_sets(&self, a: &[Vertex], b: &[Vertex]) -> Option<(u32, Vertex, Vertex)> {
        let mut best: Option<(u32, Vertex, Vertex)> = None;
        for &x in a {
            for &y in b {
                let d = self.get(x, y);
                if best.is_none_or(|(bd, _, _)| d < bd) {
                    best = Some((d, x, y));
                }
            }
        }
        best
    }

    /// Largest pairwise distance inside `set`.
    pub fn set_diameter(&self, set: &[Vertex]) -> u32 {
        let mut best = 0;
        for (i, &u) in set.iter().enumerate() {
            for &v in &set[i + 1..] {
                best = best.max(self.get(u, v));
            }
        }
        best
    }

    /// Covering radius of `set` with the center ranging over all vertices,
    /// and the smallest-id center achieving it.
    pub fn set_radius(&self, set: &[Vertex]) -> (u32, Vertex) {
        (0..self.n)
            .map(|c| (set.iter().map(|&u| self.get(c, u)).max().unwrap_or(0), c))
            .min()
            .expect("graph is nonempty")
    }
}

/// `D_r(v)`: all vertices within distance `r` of `v`, ascending.
pub fn disk(dist: &DistanceMatrix, v: Vertex, r: u32) -> Vec<Vertex> {
    (0..dist.n()).filter(|&u| dist.get(v, u) <= r).collect()
}

/// Component label of every vertex of `G − removed` (`None` for removed
/// vertices). Labels are assigned in order of the smallest vertex of each
/// component, so label `i` is the `i`-th component by minimum vertex.
pub fn component_labels(g: &Graph, removed: &[bool]) -> (Vec<Option<u32>>, u32) {
    let mut label = vec![None; g.n()];
    let mut next = 0;
    let mut stack = Vec::new();
    for s in 0..g.n() {
        if removed[s] || label[s].is_some() {
            continue;
        }
        label[s] = Some(next);
        stack.push(s);
        while let Some(u) = stack.pop() {
            for &w in g.neighbors(u) {
                if !removed[w] && label[w].is_none() {
                    label[w] = Some(next);
                    stack.push(w);
                }
            }
        }
        next += 1;
    }
    (label, next)
}

/// Connected components of `G[V ∖ removed]`, sorted by minimum vertex, each
/// ascending.
pub fn components_after_removal(g: &Graph, removed: &[Vertex]) -> Vec<Vec<Vertex>> {
    let mut mask = vec![false; g.n()];
    for &v in removed {
        mask[v] = true;
    }
    let (label, count) = component_labels(g, &mask);
    let mut parts = vec![Vec::new(); count as usize];
    for (v, l) in label.iter().enumerate() {
        if let Some(l) = l {
            parts[*l as usize].push(v);
        }
    }
    parts
}

/// Chordality test by maximum cardinality search.
///
/// Returns a perfect elimination ordering when the graph is chordal.
pub fn is_chordal(g: &Graph) -> Option<Vec<Vertex>> {
    let n = g.n();
    // MCS: repeatedly visit an unvisited vertex with the most visited
    // neighbors (smallest id on ties); the reverse visit order is a PEO iff
    // the graph is chordal.
    let mut weight = vec![0usize; n];
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n).filter(|&v| !visited[v]).max_by_key(|&v| (weight[v], std::cmp::Reverse(v))).unwrap();
        visited[v] = true;
        order.push(v);
        for &w in g.neighbors(v) {
            if !visited[w] {
                weight[w] += 1;
            }
        }
    }
    order.reverse();
    is_perfect_elimination_ordering(g, &order).then_some(order)
}

/// Checks that every vertex's later neighbors form a clique.
pub fn is_perfect_elimination_ordering(g: &Graph, order: &[Vertex]) -> bool {
    let n = g.n();
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    if order.len() != n || pos.contains(&usize::MAX) {
        return false;
    }
    for &v in order {
        let later: Vec<Vertex> = g.neighbors(v).iter().copied().filter(|&w| pos[w] > pos[v]).collect();
        let Some(&parent) = later.iter().min_by_key(|&&w| pos[w]) else {
            continue;
        };
        // Tarjan–Yannakakis: later neighbors minus the parent must all be
        // neighbors of the parent.
        if later.iter().any(|&w| w != parent && !g.has_edge(parent, w)) {
            return false;
        }
    }
    true
}
