//! Library results against slow, independently written reference computations.

mod common;

use common::*;
use tlkit_core::generate::Family;
use tlkit_core::graph::is_chordal;
use tlkit_core::layering::{cluster_metrics, layering_partition};
use tlkit_core::params::adt::adt_oracle;
use tlkit_core::params::bottleneck::{bottleneck, BottleneckMode};
use tlkit_core::params::cycles::{
    bgc_from_cycles, cbc_exact, cycle_bridging_constant, enumerate_simple_cycles, CycleCaps,
};
use tlkit_core::params::mccarty::{mccarty_width, mccarty_width_k};
use tlkit_core::params::DiskComponents;
use tlkit_core::treedec::tl_tb_oracle;
use tlkit_core::{DistanceMatrix, Graph};

fn corpus(max_n: usize, count: u64) -> Vec<Graph> {
    let mut out = Vec::new();
    for seed in 0..count {
        let n = 3 + (seed as usize % (max_n - 2));
        out.push(random_graph(n, (seed as usize * 7) % (n + 2), seed));
    }
    out.push(family(Family::Bow));
    out.push(family(Family::Cycle { n: 6 }));
    out.push(family(Family::Grid { p: 2, q: 3 }));
    out
}

fn disk_mask(d: &[Vec<u32>], c: usize, r: u32) -> Vec<bool> {
    d[c].iter().map(|&x| x <= r).collect()
}

#[test]
fn distances_match_floyd() {
    for g in corpus(12, 30) {
        let dm = DistanceMatrix::new(&g);
        let f = floyd(&g);
        for (u, row) in f.iter().enumerate() {
            for (v, &x) in row.iter().enumerate() {
                assert_eq!(dm.get(u, v), x);
            }
        }
    }
}

#[test]
fn chordality_matches_induced_cycles() {
    let has_long_induced_cycle = |g: &Graph| {
        let n = g.n();
        let a = adjacency(g);
        (0u32..1 << n).filter(|s| s.count_ones() >= 4).any(|s| {
            let vs: Vec<usize> = (0..n).filter(|&v| s >> v & 1 == 1).collect();
            let deg2 = vs.iter().all(|&u| vs.iter().filter(|&&w| a[u][w]).count() == 2);
            let removed: Vec<bool> = (0..n).map(|v| s >> v & 1 == 0).collect();
            deg2 && vs.iter().all(|&v| connected_avoiding(g, &removed, vs[0], v))
        })
    };
    let mut graphs = corpus(8, 40);
    for seed in 0..10 {
        graphs.push(
            tlkit_core::generate::generate(&tlkit_core::generate::GeneratorSpec::seeded(
                Family::RandomChordal { n: 8, k: 3 },
                seed,
            ))
            .unwrap(),
        );
    }
    for g in graphs {
        assert_eq!(is_chordal(&g).is_some(), !has_long_induced_cycle(&g), "{}", g.to_edge_list());
    }
}

/// Minimum over all elimination orderings of the largest bag diameter and
/// radius, playing the elimination game on explicit adjacency sets.
fn tl_tb_by_permutations(g: &Graph) -> (u32, u32) {
    let n = g.n();
    let d = floyd(g);
    let a0 = adjacency(g);
    let (mut best_l, mut best_b) = (u32::MAX, u32::MAX);
    for_each_permutation(n, |order| {
        let mut a = a0.clone();
        let mut gone = vec![false; n];
        let (mut l, mut b) = (0, 0);
        for &v in order {
            let mut bag: Vec<usize> = (0..n).filter(|&u| !gone[u] && a[v][u]).collect();
            for i in 0..bag.len() {
                for j in 0..bag.len() {
                    a[bag[i]][bag[j]] |= i != j;
                }
            }
            bag.push(v);
            gone[v] = true;
            l = l.max(bag.iter().flat_map(|&x| bag.iter().map(move |&y| (x, y))).map(|(x, y)| d[x][y]).max().unwrap());
            b = b.max((0..n).map(|c| bag.iter().map(|&x| d[c][x]).max().unwrap()).min().unwrap());
        }
        best_l = best_l.min(l);
        best_b = best_b.min(b);
    });
    (best_l, best_b)
}

#[test]
fn tree_length_oracle_matches_permutations() {
    for g in corpus(7, 40) {
        let o = tl_tb_oracle(&g, &DistanceMatrix::new(&g), 18).unwrap();
        assert_eq!((o.tl, o.tb), tl_tb_by_permutations(&g), "{}", g.to_edge_list());
    }
}

#[test]
fn clusters_match_definition() {
    for g in corpus(12, 30) {
        let dm = DistanceMatrix::new(&g);
        let d = floyd(&g);
        for s in 0..g.n() {
            let lp = layering_partition(&g, &dm, s);
            for u in 0..g.n() {
                for v in 0..g.n() {
                    let i = d[s][u];
                    if d[s][v] != i || i == 0 {
                        continue;
                    }
                    let same = connected_avoiding(&g, &disk_mask(&d, s, i - 1), u, v);
                    assert_eq!(lp.cluster_of[u] == lp.cluster_of[v], same);
                }
            }
        }
    }
}

/// Least `r` such that every `u–v` path meets `D_r(w)`.
fn intercept(g: &Graph, d: &[Vec<u32>], w: usize, u: usize, v: usize) -> u32 {
    (0..).find(|&r| !connected_avoiding(g, &disk_mask(d, w, r), u, v)).unwrap()
}

#[test]
fn bottleneck_matches_definition() {
    for g in corpus(10, 30) {
        let n = g.n();
        let d = floyd(&g);
        let (mut bnc, mut big) = (0, 0);
        for u in 0..n {
            for v in u + 1..n {
                for w in 0..n {
                    if d[u][w] + d[w][v] != d[u][v] {
                        continue;
                    }
                    let r = intercept(&g, &d, w, u, v);
                    big = big.max(r);
                    if d[u][w] == d[w][v] {
                        bnc = bnc.max(r);
                    }
                }
            }
        }
        let dm = DistanceMatrix::new(&g);
        let dc = DiskComponents::new(&g, &dm);
        assert_eq!(bottleneck(&dm, &dc, BottleneckMode::EvenMiddles).value, bnc);
        assert_eq!(bottleneck(&dm, &dc, BottleneckMode::AllShortestPathVertices).value, big);
    }
}

/// `mcw_k` from its definition: for every `k`-set some disk leaves every
/// component with at most `k/2` of it.
fn mcw_k_brute(g: &Graph, k: usize) -> u32 {
    let n = g.n();
    let d = floyd(g);
    let mut worst = 0;
    for mask in 0u32..1 << n {
        if mask.count_ones() as usize != k {
            continue;
        }
        let x: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        let need = (0..)
            .find(|&r| {
                (0..n).any(|c| {
                    let removed = disk_mask(&d, c, r);
                    x.iter().all(|&a| 2 * x.iter().filter(|&&b| connected_avoiding(g, &removed, a, b)).count() <= k)
                })
            })
            .unwrap();
        worst = worst.max(need);
    }
    worst
}

#[test]
fn mccarty_matches_definition() {
    for g in corpus(9, 20) {
        let dm = DistanceMatrix::new(&g);
        let dc = DiskComponents::new(&g, &dm);
        assert_eq!(mccarty_width(&dm, &dc).value, mcw_k_brute(&g, 3));
        for k in 4..=g.n().min(6) {
            assert_eq!(mccarty_width_k(&dm, &dc, k, 1 << 20).unwrap().value, mcw_k_brute(&g, k));
        }
    }
}

#[test]
fn cycle_enumeration_is_complete() {
    for g in corpus(8, 30) {
        let expect: Vec<Vec<usize>> = all_cycles(&g).into_iter().collect();
        let mut got = enumerate_simple_cycles(&g, CycleCaps::default());
        assert!(!got.truncated);
        got.cycles.sort();
        assert_eq!(got.cycles, expect);
    }
}

/// `cbc` read off its definition over the reference cycle list.
fn cbc_brute(d: &[Vec<u32>], cycles: &[Vec<usize>]) -> u32 {
    (1..)
        .find(|&k: &u32| {
            cycles.iter().all(|c| {
                let l = c.len();
                let k = k as usize;
                if l < 2 * k + 1 {
                    return true;
                }
                (0..l).all(|i| {
                    let (x, v, y) = (c[(i + l - k) % l], c[i], c[(i + k) % l]);
                    d[x][y] as usize != 2 * k
                        || (0..l).any(|j| {
                            let dc = (j + l - i) % l;
                            let dc = dc.min(l - dc);
                            (d[v][c[j]] as usize) <= k && k < dc
                        })
                })
            })
        })
        .unwrap()
}

#[test]
fn cbc_matches_definition() {
    for g in corpus(9, 40) {
        let d = floyd(&g);
        let cycles: Vec<Vec<usize>> = all_cycles(&g).into_iter().collect();
        let dm = DistanceMatrix::new(&g);
        let expect = cbc_brute(&d, &cycles);
        assert_eq!(cbc_exact(&g, &dm), expect, "{}", g.to_edge_list());
        assert_eq!(cycle_bridging_constant(&g, &dm, CycleCaps::default()).0, expect);
    }
    for n in 4..=13 {
        let g = family(Family::Cycle { n });
        let d = floyd(&g);
        let cycles: Vec<Vec<usize>> = all_cycles(&g).into_iter().collect();
        assert_eq!(cbc_exact(&g, &DistanceMatrix::new(&g)), cbc_brute(&d, &cycles));
    }
}

#[test]
fn bgc_sandwiched_by_cbc() {
    for g in corpus(9, 40) {
        let dm = DistanceMatrix::new(&g);
        let e = enumerate_simple_cycles(&g, CycleCaps::default());
        let (bgc, cbc) = (bgc_from_cycles(&dm, &e.cycles), cbc_exact(&g, &dm));
        assert!(cbc <= bgc + 1 && bgc < 2 * cbc, "bgc {bgc} cbc {cbc}\n{}", g.to_edge_list());
    }
}

/// `adt` over every spanning tree of the complete graph, enumerated as
/// `(n−1)`-edge subsets that connect all vertices.
fn adt_brute(g: &Graph) -> u32 {
    let n = g.n();
    if n == 1 {
        return 0;
    }
    let d = floyd(g);
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut best = u32::MAX;
    let mut pick = vec![0usize; n - 1];
    fn rec(
        i: usize,
        start: usize,
        pick: &mut Vec<usize>,
        pairs: &[(usize, usize)],
        n: usize,
        d: &[Vec<u32>],
        best: &mut u32,
    ) {
        if i == pick.len() {
            let mut t = vec![vec![u32::MAX / 4; n]; n];
            for (v, row) in t.iter_mut().enumerate() {
                row[v] = 0;
            }
            for &p in pick.iter() {
                let (a, b) = pairs[p];
                t[a][b] = 1;
                t[b][a] = 1;
            }
            for k in 0..n {
                for a in 0..n {
                    for b in 0..n {
                        t[a][b] = t[a][b].min(t[a][k] + t[k][b]);
                    }
                }
            }
            if t[0].iter().any(|&x| x >= u32::MAX / 4) {
                return;
            }
            let dev = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).map(|(a, b)| t[a][b].abs_diff(d[a][b])).max();
            *best = (*best).min(dev.unwrap());
            return;
        }
        for p in start..pairs.len() {
            pick[i] = p;
            rec(i + 1, p + 1, pick, pairs, n, d, best);
        }
    }
    rec(0, 0, &mut pick, &pairs, n, &d, &mut best);
    best
}

#[test]
fn adt_matches_spanning_tree_search() {
    for g in corpus(6, 25) {
        let dm = DistanceMatrix::new(&g);
        assert_eq!(adt_oracle(&g, &dm, 8).unwrap().value, adt_brute(&g), "{}", g.to_edge_list());
    }
}

#[test]
fn cluster_metrics_match_definition() {
    for g in corpus(12, 20) {
        let dm = DistanceMatrix::new(&g);
        let d = floyd(&g);
        for s in 0..g.n() {
            let lp = layering_partition(&g, &dm, s);
            let m = cluster_metrics(&dm, &lp);
            let (mut diam, mut rad) = (0, 0);
            for c in &lp.clusters {
                for &u in &c.members {
                    for &v in &c.members {
                        diam = diam.max(d[u][v]);
                    }
                }
                rad = rad.max((0..g.n()).map(|x| c.members.iter().map(|&u| d[x][u]).max().unwrap()).min().unwrap());
            }
            assert_eq!((m.diameter, m.radius), (diam, rad));
        }
    }
}
