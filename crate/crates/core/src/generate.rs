//! Deterministic graph families.
//!
//! Randomized families draw from a ChaCha8 stream (`rand_chacha`) seeded
//! with `ChaCha8Rng::seed_from_u64(seed)`. That generator is part of the
//! output contract: the same spec must produce the same graph forever, so
//! changing it requires a changelog entry.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, Vertex};

/// Retry budget for rejection sampling of connected random graphs.
const MAX_CONNECT_ATTEMPTS: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("invalid parameters for {family}: {reason}")]
    InvalidParams { family: &'static str, reason: String },
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("no connected sample after {0} attempts")]
    NoConnectedSample(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Family {
    Path {
        n: usize,
    },
    Cycle {
        n: usize,
    },
    Grid {
        p: usize,
        q: usize,
    },
    /// `m` edges sampled uniformly, resampled until connected.
    RandomConnected {
        n: usize,
        m: usize,
    },
    /// Each new vertex attaches to a random clique of size at most `k`.
    RandomChordal {
        n: usize,
        k: usize,
    },
    /// Two triangles sharing one vertex.
    Bow,
    /// Two induced `C_{6p}` sharing one vertex (`n = 12p − 1`).
    DoubleCycle {
        p: usize,
    },
    /// A chain of triangles glued at articulation points.
    BlockTriangles {
        blocks: usize,
    },
    RandomTree {
        n: usize,
    },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Path { .. } => "path",
            Family::Cycle { .. } => "cycle",
            Family::Grid { .. } => "grid",
            Family::RandomConnected { .. } => "random-connected",
            Family::RandomChordal { .. } => "random-chordal",
            Family::Bow => "bow",
            Family::DoubleCycle { .. } => "double-cycle",
            Family::BlockTriangles { .. } => "block-triangles",
            Family::RandomTree { .. } => "random-tree",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    #[serde(flatten)]
    pub family: Family,
    #[serde(default)]
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(family: Family) -> Self {
        GeneratorSpec { family, seed: 0 }
    }

    pub fn seeded(family: Family, seed: u64) -> Self {
        GeneratorSpec { family, seed }
    }

    /// Parses `name` plus `key=value` parameters, e.g. `("cycle", [("n", 6)])`.
    pub fn from_parts(name: &str, params: &[(&str, u64)], seed: u64) -> Result<Self, GeneratorError> {
        let get = |key: &str| params.iter().find(|(k, _)| *k == key).map(|&(_, v)| v as usize);
        let need = |family: &'static str, key: &str| {
            get(key)
                .ok_or_else(|| GeneratorError::InvalidParams { family, reason: format!("missing parameter `{key}`") })
        };
        let family = match name {
            "path" => Family::Path { n: need("path", "n")? },
            "cycle" => Family::Cycle { n: need("cycle", "n")? },
            "grid" => Family::Grid { p: need("grid", "p")?, q: need("grid", "q")? },
            "random-connected" => {
                let n = need("random-connected", "n")?;
                Family::RandomConnected { n, m: get("m").unwrap_or(n + n / 2) }
            }
            "random-chordal" => Family::RandomChordal { n: need("random-chordal", "n")?, k: get("k").unwrap_or(3) },
            "bow" => Family::Bow,
            "double-cycle" => Family::DoubleCycle { p: need("double-cycle", "p")? },
            "block-triangles" => Family::BlockTriangles { blocks: need("block-triangles", "blocks")? },
            "random-tree" => Family::RandomTree { n: need("random-tree", "n")? },
            other => return Err(GeneratorError::UnknownFamily(other.to_string())),
        };
        Ok(GeneratorSpec { family, seed })
    }

    fn validate(&self) -> Result<(), GeneratorError> {
        let family = self.family.name();
        let bad = |reason: &str| Err(GeneratorError::InvalidParams { family, reason: reason.to_string() });
        match self.family {
            Family::Path { n } | Family::RandomTree { n } if n < 1 => bad("n must be at least 1"),
            Family::Cycle { n } if n < 3 => bad("n must be at least 3"),
            Family::Grid { p, q } if p < 1 || q < 1 => bad("p and q must be at least 1"),
            Family::RandomConnected { n, m } => {
                if n < 1 {
                    bad("n must be at least 1")
                } else if m + 1 < n || m > n * (n - 1) / 2 {
                    bad("m must lie in [n-1, n(n-1)/2]")
                } else {
                    Ok(())
                }
            }
            Family::RandomChordal { n, k } if n < 1 || k < 1 => bad("n and k must be at least 1"),
            Family::DoubleCycle { p } if p < 1 => bad("p must be at least 1"),
            Family::BlockTriangles { blocks } if blocks < 1 => bad("blocks must be at least 1"),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::Path { n } | Family::Cycle { n } => write!(f, "{}(n={n})", self.family.name()),
            Family::Grid { p, q } => write!(f, "grid(p={p},q={q})"),
            Family::RandomConnected { n, m } => write!(f, "random-connected(n={n},m={m},seed={})", self.seed),
            Family::RandomChordal { n, k } => write!(f, "random-chordal(n={n},k={k},seed={})", self.seed),
            Family::Bow => write!(f, "bow"),
            Family::DoubleCycle { p } => write!(f, "double-cycle(p={p})"),
            Family::BlockTriangles { blocks } => write!(f, "block-triangles(blocks={blocks})"),
            Family::RandomTree { n } => write!(f, "random-tree(n={n},seed={})", self.seed),
        }
    }
}

impl FromStr for GeneratorSpec {
    type Err = GeneratorError;

    /// Inverse of `Display`: `name(key=value,...)` or a bare `name`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (name, rest) = match s.find('(') {
            Some(i) if s.ends_with(')') => (&s[..i], &s[i + 1..s.len() - 1]),
            _ => (s, ""),
        };
        let mut params = Vec::new();
        for part in rest.split(',').filter(|p| !p.trim().is_empty()) {
            let (k, v) = part.split_once('=').ok_or_else(|| GeneratorError::InvalidParams {
                family: "spec",
                reason: format!("expected key=value, got `{part}`"),
            })?;
            let v: u64 = v.trim().parse().map_err(|_| GeneratorError::InvalidParams {
                family: "spec",
                reason: format!("`{v}` is not an integer"),
            })?;
            params.push((k.trim(), v));
        }
        let seed = params.iter().find(|(k, _)| *k == "seed").map_or(0, |&(_, v)| v);
        GeneratorSpec::from_parts(name, &params, seed)
    }
}

/// Builds the graph described by `spec`. Identical specs give identical graphs.
pub fn generate(spec: &GeneratorSpec) -> Result<Graph, GeneratorError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (n, edges) = match spec.family {
        Family::Path { n } => (n, (1..n).map(|i| (i - 1, i)).collect()),
        Family::Cycle { n } => (n, (0..n).map(|i| (i, (i + 1) % n)).collect()),
        Family::Grid { p, q } => {
            let id = |i: usize, j: usize| i * q + j;
            let mut edges = Vec::new();
            for i in 0..p {
                for j in 0..q {
                    if j + 1 < q {
                        edges.push((id(i, j), id(i, j + 1)));
                    }
                    if i + 1 < p {
                        edges.push((id(i, j), id(i + 1, j)));
                    }
                }
            }
            (p * q, edges)
        }
        Family::Bow => (5, vec![(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)]),
        Family::BlockTriangles { blocks } => {
            let mut edges = Vec::new();
            for b in 0..blocks {
                let a = 2 * b;
                edges.extend([(a, a + 1), (a, a + 2), (a + 1, a + 2)]);
            }
            (2 * blocks + 1, edges)
        }
        Family::DoubleCycle { p } => {
            let len = 6 * p;
            let mut edges = Vec::new();
            for half in 0..2 {
                // Vertex 0 is shared; each cycle owns len - 1 further vertices.
                let ring: Vec<Vertex> = std::iter::once(0).chain((1..len).map(|i| half * (len - 1) + i)).collect();
                for i in 0..len {
                    edges.push((ring[i], ring[(i + 1) % len]));
                }
            }
            (2 * len - 1, edges)
        }
        Family::RandomTree { n } => {
            let edges = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
            (n, edges)
        }
        Family::RandomChordal { n, k } => (n, random_chordal_edges(n, k, &mut rng)),
        Family::RandomConnected { n, m } => {
            let pairs: Vec<(Vertex, Vertex)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            let mut attempt = 0;
            loop {
                attempt += 1;
                let picked = rand::seq::index::sample(&mut rng, pairs.len(), m);
                let mut edges: Vec<_> = picked.iter().map(|i| pairs[i]).collect();
                edges.sort_unstable();
                if let Ok(g) = Graph::from_edges(n, &edges) {
                    return Ok(g);
                }
                if attempt >= MAX_CONNECT_ATTEMPTS {
                    return Err(GeneratorError::NoConnectedSample(attempt));
                }
            }
        }
    };
    Ok(Graph::from_edges(n, &edges).expect("deterministic families are valid by construction"))
}

/// Vertex `v` is joined to a clique of earlier vertices, so the insertion
/// order reversed is a perfect elimination ordering.
fn random_chordal_edges(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Vec<(Vertex, Vertex)> {
    let mut adj: Vec<Vec<Vertex>> = vec![Vec::new(); n];
    let mut edges = Vec::new();
    for v in 1..n {
        let u = rng.gen_range(0..v);
        let mut clique = vec![u];
        let mut candidates = adj[u].clone();
        candidates.sort_unstable();
        candidates.shuffle(rng);
        for w in candidates {
            if clique.len() >= k {
                break;
            }
            if rng.gen_bool(0.5) && clique.iter().all(|c| adj[*c].contains(&w)) {
                clique.push(w);
            }
        }
        for &c in &clique {
            adj[c].push(v);
            adj[v].push(c);
            edges.push((c, v));
        }
    }
    edges
}

/// Edge counts drawn for corpus random graphs: `[n − 1, 2n]` up to 30
/// vertices; above that, sparser samples are almost never connected, so the
/// range starts at `⌈n ln n / 2⌉`.
pub fn random_edge_range(n: usize) -> (usize, usize) {
    let max_m = n * (n - 1) / 2;
    let lo = if n <= 30 { n.saturating_sub(1) } else { (n as f64 * (n as f64).ln() / 2.0).ceil() as usize };
    let lo = lo.min(max_m);
    (lo, (2 * n).clamp(lo, max_m.max(lo)))
}

/// Expands a corpus description into generator specs.
///
/// Parts are separated by `;`. Each part is either a single spec accepted by
/// `GeneratorSpec::from_str` or `kind:key=value,...` with kind one of
/// - `random`: `count` random connected graphs with `n` drawn from
///   `[minn, maxn]` (default minn 3) and `m` from [`random_edge_range`];
/// - `chordal`: the same for random chordal graphs (clique size `k`, default 3);
/// - `tree`: the same for random trees;
/// - `cycles`: `C_min` through `C_max`.
///
/// Per-graph parameters and seeds are drawn from a stream seeded by `seed`.
pub fn parse_corpus(text: &str) -> Result<Vec<GeneratorSpec>, GeneratorError> {
    let mut out = Vec::new();
    for part in text.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let Some((kind, rest)) = part.split_once(':') else {
            out.push(part.parse()?);
            continue;
        };
        let mut params = Vec::new();
        for kv in rest.split(',').filter(|p| !p.trim().is_empty()) {
            let bad = || GeneratorError::InvalidParams { family: "corpus", reason: format!("bad entry `{kv}`") };
            let (k, v) = kv.split_once('=').ok_or_else(bad)?;
            params.push((k.trim(), v.trim().parse::<u64>().map_err(|_| bad())?));
        }
        let get = |key: &str, default: Option<u64>| {
            params.iter().find(|(k, _)| *k == key).map(|&(_, v)| v).or(default).ok_or_else(|| {
                GeneratorError::InvalidParams { family: "corpus", reason: format!("`{kind}` needs `{key}`") }
            })
        };
        if kind == "cycles" {
            for n in get("min", Some(3))?..=get("max", None)? {
                out.push(GeneratorSpec::new(Family::Cycle { n: n as usize }));
            }
            continue;
        }
        let count = get("count", None)?;
        let maxn = get("maxn", None)? as usize;
        let minn = get("minn", Some(3))? as usize;
        if minn > maxn || minn == 0 {
            return Err(GeneratorError::InvalidParams { family: "corpus", reason: "need 1 <= minn <= maxn".into() });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(get("seed", Some(0))?);
        for _ in 0..count {
            let n = rng.gen_range(minn..=maxn);
            let seed = rng.gen::<u64>();
            let family = match kind {
                "random" => {
                    let (lo, hi) = random_edge_range(n);
                    Family::RandomConnected { n, m: rng.gen_range(lo..=hi) }
                }
                "chordal" => Family::RandomChordal { n, k: get("k", Some(3))? as usize },
                "tree" => Family::RandomTree { n },
                other => return Err(GeneratorError::UnknownFamily(other.to_string())),
            };
            out.push(GeneratorSpec::seeded(family, seed));
        }
    }
    Ok(out)
}
