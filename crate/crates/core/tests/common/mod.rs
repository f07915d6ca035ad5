#![allow(dead_code)]

use std::collections::BTreeSet;

use tlkit_core::generate::{generate, Family, GeneratorSpec};
use tlkit_core::Graph;

pub fn family(f: Family) -> Graph {
    generate(&GeneratorSpec::new(f)).unwrap()
}

/// Connected graph on `n` vertices with roughly `extra` edges beyond a tree.
pub fn random_graph(n: usize, extra: usize, seed: u64) -> Graph {
    let m = (n - 1 + extra).min(n * (n - 1) / 2);
    generate(&GeneratorSpec::seeded(Family::RandomConnected { n, m }, seed)).unwrap()
}

pub fn adjacency(g: &Graph) -> Vec<Vec<bool>> {
    let n = g.n();
    let mut a = vec![vec![false; n]; n];
    for (u, v) in g.edges() {
        a[u][v] = true;
        a[v][u] = true;
    }
    a
}

/// Floyd–Warshall, independent of the library's BFS.
pub fn floyd(g: &Graph) -> Vec<Vec<u32>> {
    let n = g.n();
    let inf = u32::MAX / 4;
    let a = adjacency(g);
    let mut d: Vec<Vec<u32>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        0
                    } else if a[i][j] {
                        1
                    } else {
                        inf
                    }
                })
                .collect()
        })
        .collect();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                d[i][j] = d[i][j].min(d[i][k] + d[k][j]);
            }
        }
    }
    d
}

/// Whether `a` and `b` are joined by a path avoiding `removed`.
pub fn connected_avoiding(g: &Graph, removed: &[bool], a: usize, b: usize) -> bool {
    if removed[a] || removed[b] {
        return false;
    }
    let mut seen = vec![false; g.n()];
    let mut stack = vec![a];
    seen[a] = true;
    while let Some(u) = stack.pop() {
        if u == b {
            return true;
        }
        for &w in g.neighbors(u) {
            if !removed[w] && !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    false
}

/// All simple cycles as canonical vertex sequences (smallest vertex first,
/// then the smaller of its two neighbors), by exhaustive DFS.
pub fn all_cycles(g: &Graph) -> BTreeSet<Vec<usize>> {
    fn dfs(g: &Graph, path: &mut Vec<usize>, on: &mut Vec<bool>, out: &mut BTreeSet<Vec<usize>>) {
        let last = *path.last().unwrap();
        for &w in g.neighbors(last) {
            if w == path[0] && path.len() >= 3 {
                let mut c = path.clone();
                let i = (0..c.len()).min_by_key(|&i| c[i]).unwrap();
                c.rotate_left(i);
                if c[1] > c[c.len() - 1] {
                    c[1..].reverse();
                }
                out.insert(c);
            } else if !on[w] {
                on[w] = true;
                path.push(w);
                dfs(g, path, on, out);
                path.pop();
                on[w] = false;
            }
        }
    }
    let mut out = BTreeSet::new();
    for s in 0..g.n() {
        let mut on = vec![false; g.n()];
        on[s] = true;
        dfs(g, &mut vec![s], &mut on, &mut out);
    }
    out
}

/// Visits every permutation of `0..n` (Heap's algorithm).
pub fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    let mut p: Vec<usize> = (0..n).collect();
    let mut c = vec![0; n];
    f(&p);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            f(&p);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}
