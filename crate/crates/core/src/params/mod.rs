//! Coarse parameters beyond layering partitions and tree-decompositions.

pub mod adt;
pub mod bottleneck;
pub mod cycles;
pub mod family;
pub mod fatminor;
pub mod mccarty;

use crate::graph::{component_labels, DistanceMatrix, Graph, Vertex};

/// Component labels of `G − D_r(c)` for every center `c` and every radius
/// `r < ecc(c)`; at `r ≥ ecc(c)` the disk is all of `V`.
pub struct DiskComponents {
    n: usize,
    ecc: Vec<u32>,
    /// `offset[c] + r * n + v`
    offset: Vec<usize>,
    labels: Vec<u32>,
    counts: Vec<Vec<u32>>,
}

/// Marks vertices inside the disk.
pub const IN_DISK: u32 = u32::MAX;

impl DiskComponents {
    pub fn new(g: &Graph, dist: &DistanceMatrix) -> Self {
        let n = g.n();
        let ecc: Vec<u32> = (0..n).map(|c| dist.eccentricity(c)).collect();
        let mut offset = Vec::with_capacity(n);
        let mut total = 0;
        for &e in &ecc {
            offset.push(total);
            total += e as usize * n;
        }
        let mut labels = vec![IN_DISK; total];
        let mut counts = Vec::with_capacity(n);
        for c in 0..n {
            let mut per_r = Vec::with_capacity(ecc[c] as usize);
            for r in 0..ecc[c] {
                let removed: Vec<bool> = dist.row(c).iter().map(|&d| d <= r).collect();
                let (lab, count) = component_labels(g, &removed);
                let base = offset[c] + r as usize * n;
                for (v, l) in lab.into_iter().enumerate() {
                    labels[base + v] = l.unwrap_or(IN_DISK);
                }
                per_r.push(count);
            }
            counts.push(per_r);
        }
        DiskComponents { n, ecc, offset, labels, counts }
    }

    pub fn eccentricity(&self, c: Vertex) -> u32 {
        self.ecc[c]
    }

    /// Labels of `G − D_r(c)`, [`IN_DISK`] for disk vertices; `None` once the
    /// disk covers everything.
    pub fn labels(&self, c: Vertex, r: u32) -> Option<&[u32]> {
        (r < self.ecc[c]).then(|| {
            let base = self.offset[c] + r as usize * self.n;
            &self.labels[base..base + self.n]
        })
    }

    pub fn component_count(&self, c: Vertex, r: u32) -> u32 {
        if r < self.ecc[c] {
            self.counts[c][r as usize]
        } else {
            0
        }
    }

    /// Whether `D_r(c)` meets `a` or `b`, or puts them in different
    /// components.
    pub fn separates(&self, c: Vertex, r: u32, a: Vertex, b: Vertex) -> bool {
        match self.labels(c, r) {
            None => true,
            Some(l) => l[a] == IN_DISK || l[b] == IN_DISK || l[a] != l[b],
        }
    }
}

/// True iff `D_r(c)` intercepts every `a`–`b` path.
pub fn disk_separates_all_paths(g: &Graph, dist: &DistanceMatrix, c: Vertex, r: u32, a: Vertex, b: Vertex) -> bool {
    if dist.get(c, a) <= r || dist.get(c, b) <= r {
        return true;
    }
    let removed: Vec<bool> = dist.row(c).iter().map(|&d| d <= r).collect();
    let (labels, _) = component_labels(g, &removed);
    labels[a] != labels[b]
}
