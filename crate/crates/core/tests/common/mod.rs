//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use imbalforest::{Dataset, TreeNode};
use rand::Rng;

/// Weighted child impurity times `n_l * n_r`, as an exact integer.
/// `n * (n_l*n_r) - (l0^2 + l1^2) * n_r - (r0^2 + r1^2) * n_l`, all over
/// `n * n_l * n_r`, so comparing two candidates needs their denominators.
fn scaled_impurity(l: [i128; 2], r: [i128; 2]) -> (i128, i128) {
    let (nl, nr) = (l[0] + l[1], r[0] + r[1]);
    let n = nl + nr;
    let num = n * nl * nr - (l[0] * l[0] + l[1] * l[1]) * nr - (r[0] * r[0] + r[1] * r[1]) * nl;
    (num, n * nl * nr)
}

fn less(a: (i128, i128), b: (i128, i128)) -> bool {
    a.0 * b.1 < b.0 * a.1
}

/// Exhaustive CART: every feature, every midpoint of consecutive distinct
/// values, child impurity recomputed from the routed rows. Lowest impurity
/// wins; ties keep the earlier (feature, threshold).
pub fn oracle_tree(ds: &Dataset, rows: &[usize]) -> TreeNode {
    let ones = rows.iter().filter(|&&i| ds.label(i) == 1).count() as i128;
    let counts = [rows.len() as i128 - ones, ones];
    let leaf = TreeNode::Leaf {
        class_counts: [counts[0] as usize, counts[1] as usize],
    };
    if counts[0] == 0 || counts[1] == 0 {
        return leaf;
    }
    // Parent impurity on the same scale as a split with an empty side:
    // n * gini * n = n^2 - (c0^2 + c1^2), over n^2.
    let n = rows.len() as i128;
    let parent = (n * n - counts[0] * counts[0] - counts[1] * counts[1], n * n);

    let mut best: Option<((i128, i128), usize, f64)> = None;
    for f in 0..ds.n_features() {
        let mut values: Vec<f64> = rows.iter().map(|&i| ds.value(i, f)).collect();
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        values.dedup();
        for w in values.windows(2) {
            let mut t = (w[0] + w[1]) / 2.0;
            if t >= w[1] {
                t = w[0];
            }
            let mut l = [0i128; 2];
            let mut r = [0i128; 2];
            for &i in rows {
                let side = if ds.value(i, f) <= t { &mut l } else { &mut r };
                side[ds.label(i) as usize] += 1;
            }
            let score = scaled_impurity(l, r);
            let bar = best.map_or(parent, |b| b.0);
            if less(score, bar) {
                best = Some((score, f, t));
            }
        }
    }
    let Some((_, f, t)) = best else {
        return leaf;
    };
    let (l, r): (Vec<usize>, Vec<usize>) = rows.iter().partition(|&&i| ds.value(i, f) <= t);
    TreeNode::Split {
        feature_index: f,
        threshold: t,
        left: Box::new(oracle_tree(ds, &l)),
        right: Box::new(oracle_tree(ds, &r)),
    }
}

/// Small dataset with coarse values so that ties and constant columns occur.
pub fn random_small_dataset(rng: &mut impl Rng) -> Dataset {
    let n = rng.random_range(1..=50);
    let p = rng.random_range(1..=4);
    let levels = rng.random_range(2..=8);
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..p).map(|_| rng.random_range(0..levels) as f64 * 0.5).collect())
        .collect();
    let labels = (0..n).map(|_| rng.random_range(0..2u8)).collect();
    let names = (0..p).map(|j| format!("f{j}")).collect();
    Dataset::from_rows(names, &rows, labels).unwrap()
}

/// Probability that a random positive outscores a random negative, ties
/// counting one half.
pub fn mann_whitney_auc(labels: &[u8], scores: &[f64]) -> f64 {
    let (mut wins, mut pairs) = (0.0, 0.0);
    for (i, &li) in labels.iter().enumerate() {
        if li != 1 {
            continue;
        }
        for (j, &lj) in labels.iter().enumerate() {
            if lj != 0 {
                continue;
            }
            pairs += 1.0;
            if scores[i] > scores[j] {
                wins += 1.0;
            } else if scores[i] == scores[j] {
                wins += 0.5;
            }
        }
    }
    wins / pairs
}

/// Random labels with both classes and scores drawn from a small grid so
/// ties are common.
pub fn random_scored_labels(rng: &mut impl Rng) -> (Vec<u8>, Vec<f64>) {
    let n = rng.random_range(2..=60);
    let mut labels: Vec<u8> = (0..n).map(|_| rng.random_range(0..2u8)).collect();
    labels[0] = 0;
    labels[1] = 1;
    let grid = rng.random_range(2..=20);
    let scores = (0..n)
        .map(|_| rng.random_range(0..=grid) as f64 / grid as f64)
        .collect();
    (labels, scores)
}

/// Brute-force k nearest neighbours by squared distance, ties by index.
pub fn brute_knn(points: &[Vec<f64>], q: usize, k: usize) -> Vec<usize> {
    let mut d: Vec<(f64, usize)> = points
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != q)
        .map(|(i, p)| {
            let s: f64 = p.iter().zip(&points[q]).map(|(a, b)| (a - b).powi(2)).sum();
            (s, i)
        })
        .collect();
    d.sort_by(|a, b| a.partial_cmp(b).unwrap());
    d.into_iter().take(k).map(|(_, i)| i).collect()
}

/// Some `u` in [0, 1) and neighbour pair (x, z) with `s = x + u (z - x)` to
/// 1e-9 in every coordinate, searching all minority bases and their k
/// nearest minority neighbours.
pub fn segment_witness(minority: &[Vec<f64>], k: usize, s: &[f64]) -> Option<f64> {
    for (xi, x) in minority.iter().enumerate() {
        for zi in brute_knn(minority, xi, k) {
            let z = &minority[zi];
            let u = match (0..x.len()).find(|&c| x[c] != z[c]) {
                Some(c) => (s[c] - x[c]) / (z[c] - x[c]),
                None => 0.0,
            };
            if !(0.0..1.0).contains(&u) {
                continue;
            }
            if (0..x.len()).all(|c| (x[c] + u * (z[c] - x[c]) - s[c]).abs() <= 1e-9) {
                return Some(u);
            }
        }
    }
    None
}
