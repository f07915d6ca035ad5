//! Simple-cycle enumeration and the cycle constants `cbc`, `bgc` and `glc`.

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{component_labels, DistanceMatrix, Graph, Vertex};
use crate::Status;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleCaps {
    pub max_cycles: usize,
    /// Longest cycle to enumerate; 0 means no limit.
    pub max_len: usize,
    /// Backtracking steps before the enumeration gives up.
    pub max_steps: u64,
}

impl Default for CycleCaps {
    fn default() -> Self {
        CycleCaps { max_cycles: 1_000_000, max_len: 0, max_steps: 200_000_000 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CycleEnumeration {
    /// Each cycle starts at its smallest vertex, and its second vertex is
    /// smaller than its last.
    pub cycles: Vec<Vec<Vertex>>,
    pub truncated: bool,
}

impl CycleEnumeration {
    pub fn status(&self) -> Status {
        if self.truncated {
            Status::Lower
        } else {
            Status::Exact
        }
    }
}

/// Backtracking from each root over larger vertices only.
pub fn enumerate_simple_cycles(g: &Graph, caps: CycleCaps) -> CycleEnumeration {
    let n = g.n();
    let max_len = if caps.max_len == 0 { n } else { caps.max_len.min(n) };
    let mut out = CycleEnumeration::default();
    let mut steps = 0u64;
    let mut on_path = vec![false; n];
    for root in 0..n {
        let mut path = vec![root];
        let mut next = vec![0usize];
        on_path[root] = true;
        while let Some(&u) = path.last() {
            let i = *next.last().unwrap();
            let nbrs = g.neighbors(u);
            if i == nbrs.len() {
                on_path[u] = false;
                path.pop();
                next.pop();
                continue;
            }
            *next.last_mut().unwrap() += 1;
            steps += 1;
            if steps > caps.max_steps {
                out.truncated = true;
                return out;
            }
            let w = nbrs[i];
            if w == root {
                if path.len() >= 3 && path[1] < u {
                    if out.cycles.len() == caps.max_cycles {
                        out.truncated = true;
                        return out;
                    }
                    out.cycles.push(path.clone());
                }
            } else if w > root && !on_path[w] {
                if path.len() < max_len {
                    on_path[w] = true;
                    path.push(w);
                    next.push(0);
                } else {
                    out.truncated = true;
                }
            }
        }
    }
    out
}

/// `cbc` by direct evaluation of its definition on the given cycles.
pub fn cbc_from_cycles(dist: &DistanceMatrix, cycles: &[Vec<Vertex>]) -> u32 {
    let longest = cycles.iter().map(Vec::len).max().unwrap_or(0);
    (1u32..)
        .find(|&k| {
            let k_us = k as usize;
            4 * k_us > longest
                || cycles.iter().filter(|c| c.len() >= 4 * k_us).all(|c| {
                    let l = c.len();
                    (0..l).all(|i| {
                        let (x, v, y) = (c[(i + l - k_us) % l], c[i], c[(i + k_us) % l]);
                        dist.get(x, y) != 2 * k || (k_us + 1..l - k_us).any(|j| dist.get(v, c[(i + j) % l]) <= k)
                    })
                })
        })
        .unwrap()
}

/// `cbc` without cycle enumeration.
///
/// `k` fails exactly when some `v` has two vertices `x, y` on its sphere of
/// radius `k` with `d(x, y) = 2k` that are joined by a path avoiding
/// `D_k(v)` except at its ends: such a path closes a shortest `x–v–y` path
/// into a cycle with no `k`-bridge from `v`, and every failing cycle
/// contains such a path.
pub fn cbc_exact(g: &Graph, dist: &DistanceMatrix) -> u32 {
    let n = g.n();
    let diam = dist.diameter();
    (1u32..)
        .find(|&k| {
            2 * k > diam
                || (0..n).all(|v| {
                    let sphere: Vec<Vertex> = (0..n).filter(|&u| dist.get(v, u) == k).collect();
                    if sphere.len() < 2 {
                        return true;
                    }
                    let removed: Vec<bool> = dist.row(v).iter().map(|&d| d <= k).collect();
                    let (labels, _) = component_labels(g, &removed);
                    let touching: Vec<Vec<u32>> = sphere
                        .iter()
                        .map(|&x| {
                            let mut t: Vec<u32> = g.neighbors(x).iter().filter_map(|&w| labels[w]).collect();
                            t.sort_unstable();
                            t.dedup();
                            t
                        })
                        .collect();
                    (0..sphere.len()).all(|a| {
                        (a + 1..sphere.len()).all(|b| {
                            dist.get(sphere[a], sphere[b]) != 2 * k
                                || !touching[a].iter().any(|l| touching[b].binary_search(l).is_ok())
                        })
                    })
                })
        })
        .unwrap()
}

/// `cbc` over an enumeration bounded by `caps`; a truncated enumeration
/// can only miss failures, so its result is a lower bound.
pub fn cycle_bridging_constant(g: &Graph, dist: &DistanceMatrix, caps: CycleCaps) -> (u32, Status) {
    let e = enumerate_simple_cycles(g, caps);
    (cbc_from_cycles(dist, &e.cycles), e.status())
}

/// `bgc` by direct evaluation on the given cycles: every geodesic side of
/// length `μ + 1` needs a `⌊(μ+1)/2⌋`-bridge to the rest of its cycle.
pub fn bgc_from_cycles(dist: &DistanceMatrix, cycles: &[Vec<Vertex>]) -> u32 {
    let longest = cycles.iter().map(Vec::len).max().unwrap_or(0);
    (1u32..)
        .find(|&mu| {
            let side = mu as usize + 1;
            let h = mu.div_ceil(2);
            2 * side > longest
                || cycles.iter().filter(|c| c.len() >= 2 * side).all(|c| {
                    let l = c.len();
                    (0..l).all(|i| {
                        if dist.get(c[i], c[(i + side) % l]) != side as u32 {
                            return true;
                        }
                        (0..=side).any(|a| {
                            (side + 1..l).any(|b| {
                                let gap = b - a;
                                let dc = gap.min(l - gap) as u32;
                                let dg = dist.get(c[(i + a) % l], c[(i + b) % l]);
                                dg <= h && h < dc
                            })
                        })
                    })
                })
        })
        .unwrap()
}

pub fn bridging_geodesic_constant(g: &Graph, dist: &DistanceMatrix, caps: CycleCaps) -> (u32, Status) {
    let e = enumerate_simple_cycles(g, caps);
    (bgc_from_cycles(dist, &e.cycles), e.status())
}

/// A cycle with a set of loaded edges. JSON: `{"cycle": [..], "loaded": [[u, v]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoadedCycle {
    pub cycle: Vec<Vertex>,
    pub loaded: Vec<(Vertex, Vertex)>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LoadedCycleError {
    #[error("a cycle needs at least 3 vertices")]
    TooShort,
    #[error("vertex {0} is not in the graph")]
    VertexOutOfRange(Vertex),
    #[error("vertex {0} repeats on the cycle")]
    Repeated(Vertex),
    #[error("consecutive cycle vertices {0} and {1} are not adjacent")]
    NotAdjacent(Vertex, Vertex),
    #[error("loaded edge ({0}, {1}) is not a cycle edge")]
    NotOnCycle(Vertex, Vertex),
}

impl LoadedCycle {
    /// Load bitmask over cycle edges `(c[i], c[i+1])`, after validation.
    fn load_mask(&self, g: &Graph) -> Result<Vec<bool>, LoadedCycleError> {
        let c = &self.cycle;
        let l = c.len();
        if l < 3 {
            return Err(LoadedCycleError::TooShort);
        }
        if let Some(&v) = c.iter().find(|&&v| v >= g.n()) {
            return Err(LoadedCycleError::VertexOutOfRange(v));
        }
        let mut seen = vec![false; g.n()];
        for &v in c {
            if std::mem::replace(&mut seen[v], true) {
                return Err(LoadedCycleError::Repeated(v));
            }
        }
        for i in 0..l {
            if !g.has_edge(c[i], c[(i + 1) % l]) {
                return Err(LoadedCycleError::NotAdjacent(c[i], c[(i + 1) % l]));
            }
        }
        let mut mask = vec![false; l];
        for &(a, b) in &self.loaded {
            let i = (0..l)
                .find(|&i| {
                    let (p, q) = (c[i], c[(i + 1) % l]);
                    (p, q) == (a, b) || (q, p) == (a, b)
                })
                .ok_or(LoadedCycleError::NotOnCycle(a, b))?;
            mask[i] = true;
        }
        Ok(mask)
    }

    pub fn load(&self, g: &Graph) -> Result<usize, LoadedCycleError> {
        Ok(self.load_mask(g)?.iter().filter(|&&b| b).count())
    }
}

/// True iff `d_G(u, v)` is at least the smaller loaded count of the two
/// arcs between `u` and `v`, for every pair on the cycle.
pub fn loaded_cycle_geodesic(g: &Graph, dist: &DistanceMatrix, lc: &LoadedCycle) -> Result<bool, LoadedCycleError> {
    let mask = lc.load_mask(g)?;
    if lc.cycle.len() <= 128 {
        let bits = mask.iter().enumerate().fold(0u128, |m, (i, &b)| if b { m | 1 << i } else { m });
        return Ok(geodesic_mask(bits, &pairs_of(dist, &lc.cycle)));
    }
    let l = lc.cycle.len();
    let mut prefix = vec![0u32; l + 1];
    for i in 0..l {
        prefix[i + 1] = prefix[i] + mask[i] as u32;
    }
    let total = prefix[l];
    Ok((0..l).all(|a| {
        (a + 1..l).all(|b| {
            let inner = prefix[b] - prefix[a];
            dist.get(lc.cycle[a], lc.cycle[b]) >= inner.min(total - inner)
        })
    }))
}

/// Position pairs `(a, b, d_G)` sorted by `d_G`.
fn pairs_of(dist: &DistanceMatrix, c: &[Vertex]) -> Vec<(usize, usize, u32)> {
    let l = c.len();
    let mut pairs: Vec<_> =
        (0..l).flat_map(|a| (a + 1..l).map(move |b| (a, b))).map(|(a, b)| (a, b, dist.get(c[a], c[b]))).collect();
    pairs.sort_by_key(|p| p.2);
    pairs
}

fn geodesic_mask(f: u128, pairs: &[(usize, usize, u32)]) -> bool {
    let total = f.count_ones();
    for &(a, b, d) in pairs {
        if 2 * d >= total {
            break;
        }
        let arc = if b - a == 128 { u128::MAX } else { ((1u128 << (b - a)) - 1) << a };
        let inner = (f & arc).count_ones();
        if d < inner.min(total - inner) {
            return false;
        }
    }
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlcCaps {
    pub cycles: CycleCaps,
    /// Cycles longer than this are not searched (the result becomes a lower
    /// bound).
    pub max_len: usize,
}

impl Default for GlcCaps {
    fn default() -> Self {
        GlcCaps { cycles: CycleCaps::default(), max_len: 20 }
    }
}

/// Largest load of a geodesic loaded cycle, with a maximizing witness.
///
/// Geodesicity survives removing loaded edges, so each cycle is searched
/// from the largest candidate load downwards and only loads beating the
/// current best are tried.
pub fn glc_oracle(g: &Graph, dist: &DistanceMatrix, caps: GlcCaps) -> (u32, Option<LoadedCycle>, Status) {
    let e = enumerate_simple_cycles(g, caps.cycles);
    let mut status = e.status();
    let mut best = 0usize;
    let mut witness = None;
    for c in &e.cycles {
        let l = c.len();
        if l > caps.max_len.min(128) {
            status = Status::Lower;
            continue;
        }
        if l <= best {
            continue;
        }
        let pairs = pairs_of(dist, c);
        'sizes: for size in (best + 1..=l).rev() {
            for chosen in (0..l).combinations(size) {
                let f = chosen.iter().fold(0u128, |m, &i| m | 1 << i);
                if geodesic_mask(f, &pairs) {
                    best = size;
                    witness = Some(LoadedCycle {
                        cycle: c.clone(),
                        loaded: chosen.iter().map(|&i| (c[i], c[(i + 1) % l])).collect(),
                    });
                    break 'sizes;
                }
            }
        }
    }
    (best as u32, witness, status)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, Family, GeneratorSpec};
    use crate::graph::tests::{bow, cycle, path};

    #[test]
    fn enumeration() {
        let caps = CycleCaps::default();
        assert!(enumerate_simple_cycles(&path(6), caps).cycles.is_empty());
        assert_eq!(enumerate_simple_cycles(&cycle(6), caps).cycles, vec![vec![0, 1, 2, 3, 4, 5]]);
        assert_eq!(enumerate_simple_cycles(&bow(), caps).cycles, vec![vec![0, 1, 2], vec![2, 3, 4]]);
        let k4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(enumerate_simple_cycles(&k4, caps).cycles.len(), 7);
        let capped = enumerate_simple_cycles(&k4, CycleCaps { max_cycles: 3, ..caps });
        assert_eq!((capped.cycles.len(), capped.truncated), (3, true));
        let short = enumerate_simple_cycles(&k4, CycleCaps { max_len: 3, ..caps });
        assert_eq!((short.cycles.len(), short.truncated), (4, true));
    }

    #[test]
    fn cbc_values() {
        let caps = CycleCaps::default();
        for (n, expected) in [(4, 2), (5, 2), (6, 2), (7, 2), (8, 3), (12, 4)] {
            let g = cycle(n);
            let d = DistanceMatrix::new(&g);
            assert_eq!(cycle_bridging_constant(&g, &d, caps), (expected, Status::Exact), "C{n}");
            assert_eq!(cbc_exact(&g, &d), expected, "C{n}");
        }
        let t = path(5);
        assert_eq!(cbc_exact(&t, &DistanceMatrix::new(&t)), 1);
        let chordal = generate(&GeneratorSpec::seeded(Family::RandomChordal { n: 12, k: 3 }, 3)).unwrap();
        assert_eq!(cbc_exact(&chordal, &DistanceMatrix::new(&chordal)), 1);
    }

    #[test]
    fn bgc_values() {
        let caps = CycleCaps::default();
        let c6 = cycle(6);
        assert_eq!(bridging_geodesic_constant(&c6, &DistanceMatrix::new(&c6), caps), (3, Status::Exact));
        let t = path(4);
        assert_eq!(bridging_geodesic_constant(&t, &DistanceMatrix::new(&t), caps).0, 1);
        let b = bow();
        assert_eq!(bridging_geodesic_constant(&b, &DistanceMatrix::new(&b), caps).0, 1);
    }

    #[test]
    fn loaded_cycles() {
        let c6 = cycle(6);
        let d = DistanceMatrix::new(&c6);
        let all = LoadedCycle { cycle: (0..6).collect(), loaded: (0..6).map(|i| (i, (i + 1) % 6)).collect() };
        assert_eq!(loaded_cycle_geodesic(&c6, &d, &all), Ok(true));
        let none = LoadedCycle { cycle: (0..6).collect(), loaded: vec![] };
        assert_eq!(loaded_cycle_geodesic(&c6, &d, &none), Ok(true));
        assert_eq!(none.load(&c6), Ok(0));
        let b = bow();
        let tri = LoadedCycle { cycle: vec![0, 1, 2], loaded: vec![(0, 1), (1, 2), (2, 0)] };
        assert_eq!(loaded_cycle_geodesic(&b, &DistanceMatrix::new(&b), &tri), Ok(true));
        assert_eq!(tri.load(&b), Ok(3));

        // C6 plus chord 0-3: the outer cycle is no longer geodesic.
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3)]).unwrap();
        let d = DistanceMatrix::new(&g);
        let outer = LoadedCycle { cycle: (0..6).collect(), loaded: (0..6).map(|i| (i, (i + 1) % 6)).collect() };
        assert_eq!(loaded_cycle_geodesic(&g, &d, &outer), Ok(false));

        let bad = LoadedCycle { cycle: vec![0, 2, 4], loaded: vec![] };
        assert_eq!(loaded_cycle_geodesic(&c6, &d, &bad), Err(LoadedCycleError::NotAdjacent(0, 2)));
        let off = LoadedCycle { cycle: (0..6).collect(), loaded: vec![(0, 3)] };
        assert_eq!(loaded_cycle_geodesic(&g, &d, &off), Err(LoadedCycleError::NotOnCycle(0, 3)));
    }

    #[test]
    fn glc_values() {
        let caps = GlcCaps::default();
        let t = path(5);
        assert_eq!(glc_oracle(&t, &DistanceMatrix::new(&t), caps).0, 0);
        let c6 = cycle(6);
        assert_eq!(glc_oracle(&c6, &DistanceMatrix::new(&c6), caps).0, 6);
        let b = bow();
        let (v, w, s) = glc_oracle(&b, &DistanceMatrix::new(&b), caps);
        assert_eq!((v, s), (3, Status::Exact));
        assert_eq!(w.unwrap().cycle, vec![0, 1, 2]);
    }
}
