//! SMOTE oversampling of the minority class.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataio::Dataset;
use crate::error::{Error, Result};
use crate::rng::RandomSource;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SmoteConfig {
    /// Minority neighbours considered per base row.
    #[serde(default = "default_k")]
    pub k: usize,
    /// Desired minority/majority ratio after resampling.
    #[serde(default = "default_target_ratio")]
    pub target_ratio: f64,
}

fn default_k() -> usize {
    5
}

fn default_target_ratio() -> f64 {
    1.0
}

impl Default for SmoteConfig {
    fn default() -> Self {
        Self {
            k: default_k(),
            target_ratio: default_target_ratio(),
        }
    }
}

impl SmoteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidParam("smote k must be at least 1".into()));
        }
        if !(self.target_ratio > 0.0 && self.target_ratio <= 1.0) {
            return Err(Error::InvalidParam(format!(
                "smote target_ratio {} outside (0, 1]",
                self.target_ratio
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResampleReport {
    pub minority_class: u8,
    /// `(majority, minority)` before resampling.
    pub original_counts: (usize, usize),
    /// `(majority, minority)` after resampling.
    pub final_counts: (usize, usize),
    pub synthetic_rows_added: usize,
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// The `k` rows nearest to `points[query_index]` by Euclidean distance,
/// excluding the query itself, ordered by `(distance, index)`.
pub fn knn_indices<R: AsRef<[f64]>>(points: &[R], query_index: usize, k: usize) -> Result<Vec<usize>> {
    if k == 0 || k >= points.len() {
        return Err(Error::InvalidParam(format!(
            "k = {k} needs 1 <= k < number of points ({})",
            points.len()
        )));
    }
    if query_index >= points.len() {
        return Err(Error::InvalidParam(format!(
            "query index {query_index} out of range"
        )));
    }
    let q = points[query_index].as_ref();
    let mut dists: Vec<(f64, usize)> = points
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != query_index)
        .map(|(i, p)| (squared_distance(q, p.as_ref()), i))
        .collect();
    let by_key = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
    if k < dists.len() {
        dists.select_nth_unstable_by(k - 1, by_key);
        dists.truncate(k);
    }
    dists.sort_unstable_by(by_key);
    Ok(dists.into_iter().map(|(_, i)| i).collect())
}

/// Oversamples the minority class up to `ceil(target_ratio * majority)`.
///
/// Base rows are taken round-robin over the minority rows in index order.
/// For each base row `x` a neighbour `z` is drawn uniformly from its `k`
/// nearest minority rows and `x + u * (z - x)` is appended with `u` drawn
/// from `[0, 1)`. Original rows keep their positions; synthetic rows follow.
pub fn smote(ds: &Dataset, cfg: &SmoteConfig, rng: &RandomSource) -> Result<(Dataset, ResampleReport)> {
    cfg.validate()?;
    let counts = ds.class_counts();
    if counts[0] == 0 || counts[1] == 0 {
        return Err(Error::InsufficientData(
            "smote needs both classes present".into(),
        ));
    }
    let minority_class: u8 = if counts[1] <= counts[0] { 1 } else { 0 };
    let n_min = counts[minority_class as usize];
    let n_maj = counts[1 - minority_class as usize];

    let target = (cfg.target_ratio * n_maj as f64).ceil() as usize;
    let no_op = ResampleReport {
        minority_class,
        original_counts: (n_maj, n_min),
        final_counts: (n_maj, n_min),
        synthetic_rows_added: 0,
    };
    if n_min as f64 / n_maj as f64 > cfg.target_ratio || target <= n_min {
        return Ok((ds.clone(), no_op));
    }
    if n_min <= cfg.k {
        return Err(Error::InsufficientData(format!(
            "minority class has {n_min} rows but smote k = {}; lower k or supply more minority rows",
            cfg.k
        )));
    }

    let minority = ds.class_indices(minority_class);
    let points: Vec<&[f64]> = minority.iter().map(|&i| ds.row(i)).collect();
    let neighbours: Vec<Vec<usize>> = (0..points.len())
        .into_par_iter()
        .map(|q| knn_indices(&points, q, cfg.k))
        .collect::<Result<_>>()?;

    let n_syn = target - n_min;
    let mut out = ds.clone();
    let mut stream = rng.stream();
    let mut synthetic = vec![0.0; ds.n_features()];
    for s in 0..n_syn {
        let base = s % n_min;
        let z = neighbours[base][stream.random_range(0..cfg.k)];
        let u: f64 = stream.random();
        let (x, z) = (points[base], points[z]);
        for ((out, &xi), &zi) in synthetic.iter_mut().zip(x).zip(z) {
            *out = xi + u * (zi - xi);
        }
        out.push_row(&synthetic, minority_class);
    }
    let report = ResampleReport {
        final_counts: (n_maj, target),
        synthetic_rows_added: n_syn,
        ..no_op
    };
    Ok((out, report))
}
