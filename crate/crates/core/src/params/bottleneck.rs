//! Bottleneck constants `bnc` and `BNC`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::DiskComponents;
use crate::graph::{DistanceMatrix, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BottleneckMode {
    /// `w` is the middle vertex of an even-length shortest `u,v`-path (`bnc`).
    EvenMiddles,
    /// `w` is any vertex of a shortest `u,v`-path (`BNC`).
    AllShortestPathVertices,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Bottleneck {
    pub value: u32,
    /// The first triple `(u, v, w)` attaining `value`, if any triple qualifies.
    pub witness: Option<(Vertex, Vertex, Vertex)>,
}

/// Least `r` with `u` or `v` in `D_r(w)` or separated by it.
pub fn triple_radius(dc: &DiskComponents, dist: &DistanceMatrix, u: Vertex, v: Vertex, w: Vertex) -> u32 {
    let cap = dist.get(w, u).min(dist.get(w, v));
    (0..cap).find(|&r| dc.separates(w, r, u, v)).unwrap_or(cap)
}

/// Maximum of [`triple_radius`] over all qualifying triples.
pub fn bottleneck(dist: &DistanceMatrix, dc: &DiskComponents, mode: BottleneckMode) -> Bottleneck {
    let n = dist.n();
    let best = (0..n)
        .into_par_iter()
        .map(|u| {
            let mut best = Bottleneck { value: 0, witness: None };
            for v in u + 1..n {
                let duv = dist.get(u, v);
                for w in 0..n {
                    let (a, b) = (dist.get(u, w), dist.get(w, v));
                    let qualifies = match mode {
                        BottleneckMode::EvenMiddles => a == b && a + b == duv,
                        BottleneckMode::AllShortestPathVertices => a + b == duv,
                    };
                    if !qualifies || (best.witness.is_some() && a.min(b) <= best.value) {
                        continue;
                    }
                    let r = triple_radius(dc, dist, u, v, w);
                    if r > best.value || best.witness.is_none() {
                        best = Bottleneck { value: r, witness: Some((u, v, w)) };
                    }
                }
            }
            best
        })
        .collect::<Vec<_>>();
    best.into_iter().filter(|b| b.witness.is_some()).fold(Bottleneck { value: 0, witness: None }, |acc, b| {
        if acc.witness.is_none() || b.value > acc.value {
            b
        } else {
            acc
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::{bow, cycle, path};
    use crate::graph::Graph;

    fn both(g: &Graph) -> (u32, u32) {
        let d = DistanceMatrix::new(g);
        let dc = DiskComponents::new(g, &d);
        (
            bottleneck(&d, &dc, BottleneckMode::EvenMiddles).value,
            bottleneck(&d, &dc, BottleneckMode::AllShortestPathVertices).value,
        )
    }

    #[test]
    fn small_values() {
        assert_eq!(both(&path(6)), (0, 0));
        assert_eq!(both(&bow()), (0, 0));
        for n in 4..=7 {
            assert_eq!(both(&cycle(n)), (1, 1), "C{n}");
        }
        assert_eq!(both(&cycle(12)).0, both(&cycle(12)).1);
    }
}
