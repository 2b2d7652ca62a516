//! Independent reference implementations shared by the integration and
//! acceptance tests. None of them call into the library's statistics.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use verbal_certainty::network::CoauthorGraph;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Rank of each value counted directly: 1 + smaller values + half the other ties.
pub fn brute_ranks(xs: &[f64]) -> Vec<f64> {
    xs.iter()
        .map(|&x| {
            let below = xs.iter().filter(|&&y| y < x).count() as f64;
            let equal = xs.iter().filter(|&&y| y == x).count() as f64;
            1.0 + below + (equal - 1.0) / 2.0
        })
        .collect()
}

/// Textbook two-pass Pearson correlation.
pub fn naive_pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    sxy / (sxx.sqrt() * syy.sqrt())
}

pub fn oracle_spearman(x: &[f64], y: &[f64]) -> f64 {
    naive_pearson(&brute_ranks(x), &brute_ranks(y))
}

/// Solves `a·x = b` by Gaussian elimination with partial pivoting.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x
}

/// Residuals of the least-squares fit of `y` on an intercept plus `controls`,
/// from the normal equations.
pub fn residuals(y: &[f64], controls: &[Vec<f64>]) -> Vec<f64> {
    let n = y.len();
    let cols: Vec<Vec<f64>> = std::iter::once(vec![1.0; n]).chain(controls.iter().cloned()).collect();
    let p = cols.len();
    let xtx: Vec<Vec<f64>> =
        (0..p).map(|i| (0..p).map(|j| (0..n).map(|r| cols[i][r] * cols[j][r]).sum()).collect()).collect();
    let xty: Vec<f64> = (0..p).map(|i| (0..n).map(|r| cols[i][r] * y[r]).sum()).collect();
    let beta = solve(xtx, xty);
    (0..n).map(|r| y[r] - (0..p).map(|i| beta[i] * cols[i][r]).sum::<f64>()).collect()
}

/// Partial correlation as the correlation of two regressions' residuals.
pub fn oracle_partial(x: &[f64], y: &[f64], controls: &[Vec<f64>]) -> f64 {
    naive_pearson(&residuals(x, controls), &residuals(y, controls))
}

/// Doubled U statistic of `a` against `b`: 2 per pair with a > b, 1 per tie.
fn doubled_u(a: &[f64], b: &[f64]) -> i64 {
    a.iter()
        .map(|x| b.iter().map(|y| if x > y { 2 } else if x == y { 1 } else { 0 }).sum::<i64>())
        .sum()
}

/// U statistic and exact two-sided p-value by enumerating every split of the
/// pooled sample into groups of the original sizes.
pub fn oracle_mann_whitney(a: &[f64], b: &[f64]) -> (f64, f64) {
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let (na, nb) = (a.len(), b.len());
    let n = na + nb;
    assert!(n <= 24, "enumeration oracle limited to small samples");
    let centre = (na * nb) as i64;
    let observed = doubled_u(a, b);
    let obs_dev = (observed - centre).abs();
    let mut extreme: u64 = 0;
    let mut total: u64 = 0;
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != na {
            continue;
        }
        let (ga, gb): (Vec<f64>, Vec<f64>) = {
            let mut ga = Vec::with_capacity(na);
            let mut gb = Vec::with_capacity(nb);
            for (i, &v) in pooled.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    ga.push(v);
                } else {
                    gb.push(v);
                }
            }
            (ga, gb)
        };
        total += 1;
        if (doubled_u(&ga, &gb) - centre).abs() >= obs_dev {
            extreme += 1;
        }
    }
    (observed as f64 / 2.0, extreme as f64 / total as f64)
}

/// Mean-difference Gini: Σᵢ Σⱼ |dᵢ − dⱼ| / (2 n² mean).
pub fn pairwise_gini(d: &[f64]) -> f64 {
    let n = d.len() as f64;
    let mean = d.iter().sum::<f64>() / n;
    if mean == 0.0 {
        return 0.0;
    }
    let diff: f64 = d.iter().flat_map(|a| d.iter().map(move |b| (a - b).abs())).sum();
    diff / (2.0 * n * n * mean)
}

/// Member degrees over member-member edges, counted from the edge list.
pub fn oracle_degrees(members: &BTreeSet<String>, edges: &[(String, String, u32)]) -> Vec<f64> {
    members
        .iter()
        .map(|m| {
            edges
                .iter()
                .filter(|(a, b, _)| members.contains(a) && members.contains(b) && (a == m || b == m))
                .map(|(_, _, w)| f64::from(*w))
                .sum()
        })
        .collect()
}

/// Random weighted graph: `n_members` community nodes, some outside
/// neighbors, distinct pairs only.
pub fn random_graph(rng: &mut ChaCha8Rng, max_nodes: usize) -> (BTreeSet<String>, Vec<(String, String, u32)>) {
    let n_members = rng.random_range(2..=max_nodes.max(2) * 3 / 4);
    let n_outside = rng.random_range(0..=max_nodes - n_members);
    let members: BTreeSet<String> = (0..n_members).map(|i| format!("m{i:03}")).collect();
    let node = |i: usize| if i < n_members { format!("m{i:03}") } else { format!("x{:03}", i - n_members) };
    let total = n_members + n_outside;
    let n_edges = rng.random_range(1..=3 * total);
    let mut seen = BTreeSet::new();
    let mut edges = Vec::new();
    for _ in 0..n_edges {
        let i = rng.random_range(0..total);
        let j = rng.random_range(0..total);
        if i == j || (i >= n_members && j >= n_members) {
            continue;
        }
        let key = (i.min(j), i.max(j));
        if seen.insert(key) {
            edges.push((node(key.0), node(key.1), rng.random_range(1..=5)));
        }
    }
    (members, edges)
}

/// Five members on a path, two of them with one outside coauthor each.
pub fn echo_fixture() -> CoauthorGraph {
    let members: BTreeSet<String> = ["m1", "m2", "m3", "m4", "m5"].iter().map(|s| s.to_string()).collect();
    let e = |a: &str, b: &str| (a.to_owned(), b.to_owned(), 1);
    let edges = vec![e("m1", "m2"), e("m2", "m3"), e("m3", "m4"), e("m4", "m5"), e("m1", "n1"), e("m3", "n2")];
    CoauthorGraph::from_parts("fixture", (2000, 2009), members, edges, 1).unwrap()
}

pub fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

/// Every file under `root` with its contents, sorted by relative path.
pub fn read_tree(root: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    fn walk(dir: &Path, root: &Path, out: &mut Vec<(PathBuf, Vec<u8>)>) {
        let mut entries: Vec<_> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
        entries.sort();
        for p in entries {
            if p.is_dir() {
                walk(&p, root, out);
            } else {
                out.push((p.strip_prefix(root).unwrap().to_owned(), std::fs::read(&p).unwrap()));
            }
        }
    }
    let mut out = Vec::new();
    walk(root, root, &mut out);
    out
}
