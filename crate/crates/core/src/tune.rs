//! Grid search over forest parameters with stratified k-fold
//! cross-validation, selecting by fraud-class F1.

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataio::Dataset;
use crate::error::{Error, Result};
use crate::eval::{class_report, confusion};
use crate::forest::{fit_forest, ForestParams, MaxDepth, MaxFeatures};
use crate::resample::{smote, SmoteConfig};
use crate::rng::RandomSource;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamGrid {
    pub n_trees: Vec<usize>,
    pub max_depth: Vec<MaxDepth>,
    pub min_samples_split: Vec<usize>,
    pub max_features: Vec<MaxFeatures>,
}

impl Default for ParamGrid {
    fn default() -> Self {
        Self {
            n_trees: vec![50, 100, 200],
            max_depth: vec![MaxDepth::Limited(8), MaxDepth::Limited(16), MaxDepth::Unlimited],
            min_samples_split: vec![2, 10],
            max_features: vec![MaxFeatures::Sqrt],
        }
    }
}

impl ParamGrid {
    pub fn len(&self) -> usize {
        self.n_trees.len() * self.max_depth.len() * self.min_samples_split.len() * self.max_features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Cartesian product, `n_trees` outermost and `max_features` innermost.
    /// Every combination bootstraps.
    pub fn combinations(&self) -> Vec<ForestParams> {
        let mut out = Vec::with_capacity(self.len());
        for &n_trees in &self.n_trees {
            for &max_depth in &self.max_depth {
                for &min_samples_split in &self.min_samples_split {
                    for &max_features in &self.max_features {
                        out.push(ForestParams {
                            n_trees,
                            max_depth,
                            min_samples_split,
                            max_features,
                            bootstrap: true,
                        });
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuningRow {
    pub params: ForestParams,
    pub mean_f1: f64,
    pub fold_f1s: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuningResult {
    pub best_params: ForestParams,
    pub best_score: f64,
    pub folds: usize,
    pub table: Vec<TuningRow>,
}

impl TuningResult {
    /// One CSV row per combination and fold.
    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("combination,n_trees,max_depth,min_samples_split,max_features,fold,f1,mean_f1\n");
        for (c, row) in self.table.iter().enumerate() {
            let p = &row.params;
            let depth = match p.max_depth {
                MaxDepth::Limited(d) => d.to_string(),
                MaxDepth::Unlimited => "unlimited".into(),
            };
            let feats = match p.max_features {
                MaxFeatures::Sqrt => "sqrt".into(),
                MaxFeatures::All => "all".into(),
                MaxFeatures::Count(n) => n.to_string(),
            };
            for (f, f1) in row.fold_f1s.iter().enumerate() {
                out.push_str(&format!(
                    "{c},{},{depth},{},{feats},{f},{f1},{}\n",
                    p.n_trees, p.min_samples_split, row.mean_f1
                ));
            }
        }
        out
    }
}

/// Splits row indices into `k` disjoint validation folds. Each class is
/// shuffled and dealt round-robin, continuing the deal across classes, so
/// per-class fold sizes differ by at most one.
pub fn stratified_kfold(ds: &Dataset, k: usize, rng: &RandomSource) -> Result<Vec<Vec<usize>>> {
    if k < 2 {
        return Err(Error::InvalidParam(format!("need at least 2 folds, got {k}")));
    }
    let counts = ds.class_counts();
    for (class, &c) in counts.iter().enumerate() {
        if c < k {
            return Err(Error::InsufficientData(format!(
                "class {class} has {c} rows, fewer than {k} folds"
            )));
        }
    }
    let mut folds = vec![Vec::new(); k];
    let mut next = 0;
    for class in 0..2u8 {
        let mut members = ds.class_indices(class);
        members.shuffle(&mut rng.child(format!("class{class}")).stream());
        for i in members {
            folds[next % k].push(i);
            next += 1;
        }
    }
    for f in &mut folds {
        f.sort_unstable();
    }
    Ok(folds)
}

/// Training and validation row indices of one fold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldSplit {
    pub train: Vec<usize>,
    pub validation: Vec<usize>,
}

pub fn fold_splits(ds: &Dataset, k: usize, rng: &RandomSource) -> Result<Vec<FoldSplit>> {
    let folds = stratified_kfold(ds, k, rng)?;
    let mut fold_of = vec![0usize; ds.n_rows()];
    for (f, rows) in folds.iter().enumerate() {
        for &i in rows {
            fold_of[i] = f;
        }
    }
    Ok(folds
        .into_iter()
        .enumerate()
        .map(|(f, validation)| FoldSplit {
            train: (0..ds.n_rows()).filter(|&i| fold_of[i] != f).collect(),
            validation,
        })
        .collect())
}

/// Class-1 F1 of `votes / n_trees > 0.5`; undefined counts as 0.
fn fraud_f1(labels: &[u8], votes: &[usize], n_trees: usize) -> Result<f64> {
    let preds: Vec<u8> = votes
        .iter()
        .map(|&v| u8::from(v as f64 / n_trees as f64 > 0.5))
        .collect();
    Ok(class_report(&confusion(labels, &preds)?).classes[1].f1.unwrap_or(0.0))
}

/// Resamples the training rows with `rng/smote`, fits with `rng/fit`, and
/// returns class-1 F1 on the untouched validation rows. An undefined F1 (no
/// fraud predicted or present) counts as 0.
pub fn evaluate_fold(
    ds: &Dataset,
    split: &FoldSplit,
    params: &ForestParams,
    smote_cfg: &SmoteConfig,
    rng: &RandomSource,
) -> Result<f64> {
    let (train, _) = smote(&ds.subset(&split.train), smote_cfg, &rng.child("smote"))?;
    let model = fit_forest(&train, params, &rng.child("fit"))?;
    let validation = ds.subset(&split.validation);
    let votes: Vec<usize> = (0..validation.n_rows())
        .map(|i| model.trees.iter().map(|t| t.vote(validation.row(i)) as usize).sum())
        .collect();
    fraud_f1(validation.labels(), &votes, params.n_trees)
}

fn depth_rank(d: MaxDepth) -> usize {
    match d {
        MaxDepth::Limited(n) => n,
        MaxDepth::Unlimited => usize::MAX,
    }
}

/// Evaluates every grid combination on every fold and picks the best mean
/// F1. Ties go to fewer trees, then shallower depth, then earlier grid
/// position.
///
/// Fold `f` uses the stream `rng/fold/{f}` exactly as [`evaluate_fold`]
/// does, so each table cell equals `evaluate_fold` on that fold. Because
/// tree `t` depends only on its index, combinations that differ only in
/// `n_trees` share one fitted forest per fold and are scored on its prefixes.
pub fn grid_search(
    train: &Dataset,
    grid: &ParamGrid,
    k: usize,
    smote_cfg: &SmoteConfig,
    rng: &RandomSource,
) -> Result<TuningResult> {
    let combos = grid.combinations();
    if combos.is_empty() {
        return Err(Error::InvalidParam("parameter grid is empty".into()));
    }
    for p in &combos {
        p.validate(train.n_features())?;
    }
    let splits = fold_splits(train, k, &rng.child("folds"))?;

    // Combinations grouped by everything except n_trees, in grid order.
    let mut groups: Vec<(ForestParams, Vec<usize>)> = Vec::new();
    for (c, p) in combos.iter().enumerate() {
        let key = ForestParams {
            n_trees: 0,
            ..p.clone()
        };
        match groups.iter_mut().find(|(g, _)| *g == key) {
            Some((_, members)) => members.push(c),
            None => groups.push((key, vec![c])),
        }
    }

    let folds: Vec<(Dataset, Dataset, RandomSource)> = splits
        .par_iter()
        .enumerate()
        .map(|(f, split)| {
            let fold_rng = rng.child(format!("fold/{f}"));
            let (resampled, _) =
                smote(&train.subset(&split.train), smote_cfg, &fold_rng.child("smote"))?;
            Ok((resampled, train.subset(&split.validation), fold_rng))
        })
        .collect::<Result<_>>()?;

    let cells: Vec<(usize, usize)> = (0..groups.len())
        .flat_map(|g| (0..k).map(move |f| (g, f)))
        .collect();
    let cell_scores = cells
        .par_iter()
        .map(|&(g, f)| {
            let (shape, members) = &groups[g];
            let (fit_data, validation, fold_rng) = &folds[f];
            let max_trees = members.iter().map(|&c| combos[c].n_trees).max().unwrap_or(0);
            let params = ForestParams {
                n_trees: max_trees,
                ..shape.clone()
            };
            let model = fit_forest(fit_data, &params, &fold_rng.child("fit"))?;
            // Running vote totals for every member's tree count.
            let mut checkpoints: Vec<usize> = members.iter().map(|&c| combos[c].n_trees).collect();
            checkpoints.sort_unstable();
            checkpoints.dedup();
            let mut votes = vec![vec![0usize; validation.n_rows()]; checkpoints.len()];
            for i in 0..validation.n_rows() {
                let row = validation.row(i);
                let mut acc = 0;
                let mut next = 0;
                for (t, tree) in model.trees.iter().enumerate() {
                    acc += tree.vote(row) as usize;
                    while next < checkpoints.len() && checkpoints[next] == t + 1 {
                        votes[next][i] = acc;
                        next += 1;
                    }
                }
            }
            members
                .iter()
                .map(|&c| {
                    let n = combos[c].n_trees;
                    let slot = checkpoints.binary_search(&n).expect("checkpoint present");
                    Ok((c, fraud_f1(validation.labels(), &votes[slot], n)?))
                })
                .collect::<Result<Vec<(usize, f64)>>>()
                .map(|scores| (f, scores))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut scores = vec![vec![0.0; k]; combos.len()];
    for (f, cell) in cell_scores {
        for (c, f1) in cell {
            scores[c][f] = f1;
        }
    }

    let table: Vec<TuningRow> = combos
        .into_iter()
        .zip(scores)
        .map(|(params, f1s)| TuningRow {
            params,
            mean_f1: f1s.iter().sum::<f64>() / k as f64,
            fold_f1s: f1s,
        })
        .collect();

    let mut best = 0;
    for (i, row) in table.iter().enumerate().skip(1) {
        let b = &table[best];
        let better = row.mean_f1 > b.mean_f1
            || (row.mean_f1 == b.mean_f1
                && (row.params.n_trees, depth_rank(row.params.max_depth))
                    < (b.params.n_trees, depth_rank(b.params.max_depth)));
        if better {
            best = i;
        }
    }
    Ok(TuningResult {
        best_params: table[best].params.clone(),
        best_score: table[best].mean_f1,
        folds: k,
        table,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataio::{generate_synthetic, SynthSpec};
    use std::collections::HashSet;

    fn balanced(n_per_class: usize) -> Dataset {
        let rows: Vec<Vec<f64>> = (0..2 * n_per_class).map(|i| vec![i as f64]).collect();
        let labels = (0..2 * n_per_class).map(|i| (i % 2) as u8).collect();
        Dataset::from_rows(vec!["a".into()], &rows, labels).unwrap()
    }

    #[test]
    fn kfold_balanced_one_per_class() {
        let ds = balanced(5);
        let folds = stratified_kfold(&ds, 5, &RandomSource::root(1)).unwrap();
        for f in &folds {
            let labels: Vec<u8> = f.iter().map(|&i| ds.label(i)).collect();
            assert_eq!(labels.iter().filter(|&&l| l == 1).count(), 1);
            assert_eq!(labels.len(), 2);
        }
    }

    #[test]
    fn kfold_partitions_and_is_deterministic() {
        let spec = SynthSpec {
            n_rows: 503,
            fraud_rate: 0.07,
            n_features: 2,
            class_separation: 1.0,
            include_redundant_pair: false,
        };
        let ds = generate_synthetic(&spec, &RandomSource::root(5)).unwrap();
        let rng = RandomSource::root(6);
        let folds = stratified_kfold(&ds, 4, &rng).unwrap();
        assert_eq!(folds, stratified_kfold(&ds, 4, &rng).unwrap());
        let mut seen = HashSet::new();
        for f in &folds {
            for &i in f {
                assert!(seen.insert(i));
            }
        }
        assert_eq!(seen.len(), ds.n_rows());
        for class in 0..2 {
            let sizes: Vec<usize> = folds
                .iter()
                .map(|f| f.iter().filter(|&&i| ds.label(i) == class).count())
                .collect();
            assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
        }
    }

    #[test]
    fn kfold_errors() {
        let ds = balanced(3);
        assert!(stratified_kfold(&ds, 1, &RandomSource::root(1)).is_err());
        assert!(matches!(
            stratified_kfold(&ds, 4, &RandomSource::root(1)),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn grid_cells_match_independent_fold_evaluation() {
        let spec = SynthSpec {
            n_rows: 600,
            fraud_rate: 0.1,
            n_features: 4,
            class_separation: 1.0,
            include_redundant_pair: false,
        };
        let ds = generate_synthetic(&spec, &RandomSource::root(2)).unwrap();
        let grid = ParamGrid {
            n_trees: vec![3, 7],
            max_depth: vec![MaxDepth::Limited(2), MaxDepth::Unlimited],
            min_samples_split: vec![2],
            max_features: vec![MaxFeatures::Sqrt],
        };
        let rng = RandomSource::root(3);
        let cfg = SmoteConfig::default();
        let result = grid_search(&ds, &grid, 3, &cfg, &rng).unwrap();
        let splits = fold_splits(&ds, 3, &rng.child("folds")).unwrap();
        for row in &result.table {
            for (f, &f1) in row.fold_f1s.iter().enumerate() {
                let direct =
                    evaluate_fold(&ds, &splits[f], &row.params, &cfg, &rng.child(format!("fold/{f}"))).unwrap();
                assert_eq!(f1, direct);
            }
        }
        let max = result.table.iter().map(|r| r.mean_f1).fold(f64::MIN, f64::max);
        assert_eq!(result.best_score, max);
        assert_eq!(result, grid_search(&ds, &grid, 3, &cfg, &rng).unwrap());
    }

    #[test]
    fn grid_len_and_order() {
        let g = ParamGrid::default();
        assert_eq!(g.len(), 18);
        let c = g.combinations();
        assert_eq!(c.len(), 18);
        assert_eq!(c[0].n_trees, 50);
        assert_eq!(c[0].max_depth, MaxDepth::Limited(8));
        assert_eq!(c[1].min_samples_split, 10);
        assert_eq!(c[17].n_trees, 200);
    }

    #[test]
    fn tuning_csv_has_row_per_cell() {
        let r = TuningResult {
            best_params: ForestParams::default(),
            best_score: 0.5,
            folds: 2,
            table: vec![TuningRow {
                params: ForestParams::default(),
                mean_f1: 0.5,
                fold_f1s: vec![0.25, 0.75],
            }],
        };
        assert_eq!(
            r.to_csv(),
            "combination,n_trees,max_depth,min_samples_split,max_features,fold,f1,mean_f1\n\
             0,100,unlimited,2,sqrt,0,0.25,0.5\n0,100,unlimited,2,sqrt,1,0.75,0.5\n"
        );
    }
}
