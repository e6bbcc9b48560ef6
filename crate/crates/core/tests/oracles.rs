//! Library results checked against independent, deliberately naive
//! reimplementations.

#![allow(clippy::needless_range_loop)]

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ssc_core::constructions::{build_g1_bar, build_g2_bar, build_g3_bar};
use ssc_core::robustness::{spectrum, symmetric_eigenvalues, DEFAULT_MAX_SWEEPS, DEFAULT_TOL};
use ssc_core::zero_forcing::{derived_set, is_maximal_for_zfs};
use ssc_core::{Graph, LeaderSet, Matrix};

/// Number of eigenvalues of `a` below `x`: negative pivots of `LDLᵀ = a − xI`.
fn count_below(a: &[Vec<f64>], x: f64) -> usize {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] -= x;
    }
    let mut negatives = 0;
    for k in 0..n {
        let mut pivot = m[k][k];
        if pivot == 0.0 {
            pivot = -f64::EPSILON;
        }
        if pivot < 0.0 {
            negatives += 1;
        }
        for i in k + 1..n {
            let f = m[i][k] / pivot;
            for j in k + 1..n {
                m[i][j] -= f * m[k][j];
            }
        }
    }
    negatives
}

/// Eigenvalues by Sylvester-inertia bisection.
fn bisection_eigenvalues(a: &[Vec<f64>]) -> Vec<f64> {
    let n = a.len();
    let radius = (0..n)
        .map(|i| a[i].iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
        + 1.0;
    (0..n)
        .map(|k| {
            let (mut lo, mut hi) = (-radius, radius);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if count_below(a, mid) > k {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

#[test]
fn jacobi_matches_inertia_bisection() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..60 {
        let n = rng.gen_range(1..=12);
        let mut a = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in i..n {
                let x = rng.gen_range(-3.0..3.0);
                a[i][j] = x;
                a[j][i] = x;
            }
        }
        let got =
            symmetric_eigenvalues(&Matrix::from_rows(&a), DEFAULT_TOL, DEFAULT_MAX_SWEEPS).unwrap();
        let want = bisection_eigenvalues(&a);
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-8, "{got:?} vs {want:?}");
        }
    }
}

fn random_connected(rng: &mut ChaCha8Rng, n: usize, extra: f64) -> Graph {
    let mut g = Graph::new(n).unwrap();
    for v in 1..n {
        g.add_edge(rng.gen_range(0..v), v).unwrap();
    }
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(extra) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

/// Inverse by Gauss-Jordan elimination with partial pivoting.
fn invert(mut a: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut inv: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    for c in 0..n {
        let p = (c..n)
            .max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs()))
            .unwrap();
        a.swap(c, p);
        inv.swap(c, p);
        let d = a[c][c];
        for j in 0..n {
            a[c][j] /= d;
            inv[c][j] /= d;
        }
        for r in 0..n {
            if r != c {
                let f = a[r][c];
                for j in 0..n {
                    a[r][j] -= f * a[c][j];
                    inv[r][j] -= f * inv[c][j];
                }
            }
        }
    }
    inv
}

/// Kirchhoff index as the sum of pairwise effective resistances, from the
/// inverse of the Laplacian grounded at node 0.
fn kirchhoff_by_resistance(g: &Graph) -> f64 {
    let n = g.node_count();
    let l = g.laplacian();
    let reduced: Vec<Vec<f64>> = (1..n)
        .map(|i| (1..n).map(|j| l[(i, j)]).collect())
        .collect();
    let inv = invert(reduced);
    let green = |i: usize, j: usize| {
        if i == 0 || j == 0 {
            0.0
        } else {
            inv[i - 1][j - 1]
        }
    };
    let mut total = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            total += green(i, i) + green(j, j) - 2.0 * green(i, j);
        }
    }
    total
}

#[test]
fn kirchhoff_matches_effective_resistance() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..80 {
        let n = rng.gen_range(2..=20);
        let p = rng.gen_range(0.0..0.5);
        let g = random_connected(&mut rng, n, p);
        let kf = spectrum(&g, DEFAULT_TOL).unwrap().kirchhoff.unwrap();
        let want = kirchhoff_by_resistance(&g);
        assert!((kf - want).abs() <= 1e-8 * want.max(1.0), "{kf} vs {want}");
    }
    let net = build_g2_bar(12, 3).unwrap();
    let kf = spectrum(&net.graph, DEFAULT_TOL)
        .unwrap()
        .kirchhoff
        .unwrap();
    assert!((kf - kirchhoff_by_resistance(&net.graph)).abs() < 1e-8);
}

/// Derived set by synchronous rounds: every node that can force does so.
fn closure(g: &Graph, black: &BTreeSet<usize>) -> BTreeSet<usize> {
    let mut black = black.clone();
    loop {
        let forced: BTreeSet<usize> = black
            .iter()
            .filter_map(|&u| {
                let white: Vec<usize> = g.neighbors(u).filter(|v| !black.contains(v)).collect();
                (white.len() == 1).then(|| white[0])
            })
            .collect();
        if forced.is_empty() {
            return black;
        }
        black.extend(forced);
    }
}

#[test]
fn derived_set_matches_synchronous_closure() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..300 {
        let n = rng.gen_range(1..=16);
        let mut g = Graph::new(n).unwrap();
        let p = rng.gen_range(0.05..0.6);
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    g.add_edge(u, v).unwrap();
                }
            }
        }
        let black: BTreeSet<usize> = (0..n).filter(|_| rng.gen_bool(0.3)).collect();
        assert_eq!(
            derived_set(&g, &black).unwrap().derived,
            closure(&g, &black)
        );
    }
}

/// Direct pair loop over the complement, with the closure oracle.
fn naive_violations(g: &Graph, leaders: &[usize]) -> Vec<(usize, usize)> {
    let black: BTreeSet<usize> = leaders.iter().copied().collect();
    let n = g.node_count();
    let mut out = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if g.has_edge(u, v) {
                continue;
            }
            let mut h = g.clone();
            h.add_edge(u, v).unwrap();
            if closure(&h, &black).len() == n {
                out.push((u, v));
            }
        }
    }
    out
}

#[test]
fn maximality_matches_naive_scan() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut checked = 0;
    while checked < 100 {
        let n = rng.gen_range(2..=10);
        let g = random_connected(&mut rng, n, 0.2);
        let k = rng.gen_range(1..=n);
        let mut ids: Vec<usize> = (0..n).collect();
        for i in 0..k {
            let j = rng.gen_range(i..n);
            ids.swap(i, j);
        }
        ids.truncate(k);
        if closure(&g, &ids.iter().copied().collect()).len() != n {
            continue;
        }
        let leaders = LeaderSet::new(ids.clone(), n).unwrap();
        let report = is_maximal_for_zfs(&g, &leaders).unwrap();
        assert_eq!(report.violations, naive_violations(&g, &ids));
        checked += 1;
    }
}

fn edge_set(g: &Graph) -> BTreeSet<(usize, usize)> {
    g.edges().collect()
}

fn norm(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

/// Layered edges on layers `0..layers` (layer 0 = leaders), id `layer·k + i`
/// for chain `i` in `0..k`: within-layer cliques, and `u_{i,j} — u_{q,j+1}`
/// for every `q ≤ i`.
fn layered_edges(k: usize, layers: usize) -> BTreeSet<(usize, usize)> {
    let id = |chain: usize, layer: usize| layer * k + chain;
    let mut e = BTreeSet::new();
    for layer in 0..layers {
        for a in 0..k {
            for b in a + 1..k {
                e.insert(norm(id(a, layer), id(b, layer)));
            }
            if layer + 1 < layers {
                for q in 0..=a {
                    e.insert(norm(id(a, layer), id(q, layer + 1)));
                }
            }
        }
    }
    e
}

/// Leaders `0..k` on a clique, pseudo-leaders `anchors`, tail ids
/// `first..first+len`: path from `anchors[0]`, remaining anchors to all tail
/// nodes.
fn star_path_edges(
    anchors: &[usize],
    first: usize,
) -> impl Fn(usize) -> BTreeSet<(usize, usize)> + '_ {
    move |len| {
        let mut e = BTreeSet::new();
        let mut prev = anchors[0];
        for t in first..first + len {
            e.insert(norm(prev, t));
            prev = t;
            for &a in &anchors[1..] {
                e.insert(norm(a, t));
            }
        }
        e
    }
}

#[test]
fn constructions_match_role_enumeration() {
    for n in 2..=30usize {
        for k in 1..=6 {
            if n.is_multiple_of(k) && n / k >= 2 {
                let net = build_g1_bar(n, k, n / k).unwrap();
                assert_eq!(
                    edge_set(&net.graph),
                    layered_edges(k, n / k),
                    "G1_BAR n={n} k={k}"
                );
                assert_eq!(
                    net.leaders.as_slice(),
                    (0..k).collect::<Vec<_>>().as_slice()
                );
            }
            if k < 2 || n <= k {
                continue;
            }
            let leaders: Vec<usize> = (0..k).collect();
            let mut g2 = layered_edges(k, 1);
            g2.extend(star_path_edges(&leaders, k)(n - k));
            assert_eq!(
                edge_set(&build_g2_bar(n, k).unwrap().graph),
                g2,
                "G2_BAR n={n} k={k}"
            );

            for d in 2..=n / k {
                let net = build_g3_bar(n, k, d).unwrap();
                let want = if n.is_multiple_of(k) && d == n / k && d > 2 {
                    layered_edges(k, d)
                } else {
                    let anchors: Vec<usize> = (0..k).map(|i| (d - 2) * k + i).collect();
                    let mut e = layered_edges(k, d - 1);
                    e.extend(star_path_edges(&anchors, k * (d - 1))(n - k * (d - 1)));
                    e
                };
                assert_eq!(edge_set(&net.graph), want, "G3_BAR n={n} k={k} d={d}");
            }
        }
    }
}
