//! Cleaning steps: correlation analysis, column dropping, label encoding,
//! duplicate removal and stratified splitting.

use std::collections::HashSet;
use std::fmt::Write as _;

use rand::seq::index;
use serde::Serialize;

use crate::dataio::{round_half_up, ColumnKind, Dataset, RawCell, RawDataset, FRAUD, LEGIT};
use crate::error::{Error, Result};
use crate::rng::RandomSource;

/// Columns removed by the default pipeline before modelling.
pub const DEFAULT_DROP: [&str; 3] = ["DOMAIN", "STATE", "TOTAL_TRN_AMT"];

/// Features inspected by the default correlation heatmap.
pub const HEATMAP_FEATURES: [&str; 4] = ["Time1", "Time2", "TRN_AMT", "TOTAL_TRN_AMT"];

/// Symmetric Pearson correlation matrix with unit diagonal.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrMatrix {
    pub names: Vec<String>,
    pub values: Vec<Vec<f64>>,
    /// Columns with zero variance; their off-diagonal entries are 0.
    pub zero_variance: Vec<String>,
}

impl CorrMatrix {
    pub fn get(&self, a: &str, b: &str) -> Option<f64> {
        let i = self.names.iter().position(|n| n == a)?;
        let j = self.names.iter().position(|n| n == b)?;
        Some(self.values[i][j])
    }

    /// Square CSV with the names as header row and first column.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for n in &self.names {
            out.push(',');
            out.push_str(n);
        }
        out.push('\n');
        for (name, row) in self.names.iter().zip(&self.values) {
            out.push_str(name);
            for v in row {
                let _ = write!(out, ",{v}");
            }
            out.push('\n');
        }
        out
    }
}

pub fn pearson_corr<S: AsRef<str>>(ds: &Dataset, feature_subset: &[S]) -> Result<CorrMatrix> {
    if feature_subset.is_empty() {
        return Err(Error::InvalidParam("empty feature subset".into()));
    }
    let n = ds.n_rows();
    if n < 2 {
        return Err(Error::InsufficientData(format!(
            "correlation needs at least 2 rows, got {n}"
        )));
    }
    let mut names = Vec::with_capacity(feature_subset.len());
    let mut centered = Vec::with_capacity(feature_subset.len());
    let mut sums_sq = Vec::with_capacity(feature_subset.len());
    for name in feature_subset {
        let name = name.as_ref();
        let idx = ds
            .feature_index(name)
            .ok_or_else(|| Error::UnknownFeature(name.to_string()))?;
        let col = ds.column(idx);
        let mean = col.iter().sum::<f64>() / n as f64;
        let c: Vec<f64> = col.iter().map(|v| v - mean).collect();
        sums_sq.push(c.iter().map(|v| v * v).sum::<f64>());
        centered.push(c);
        names.push(name.to_string());
    }

    let m = names.len();
    let zero: Vec<bool> = sums_sq.iter().map(|&s| s == 0.0).collect();
    let mut values = vec![vec![0.0; m]; m];
    for i in 0..m {
        values[i][i] = 1.0;
        for j in (i + 1)..m {
            let r = if zero[i] || zero[j] {
                0.0
            } else {
                let dot: f64 = centered[i]
                    .iter()
                    .zip(&centered[j])
                    .map(|(a, b)| a * b)
                    .sum();
                (dot / (sums_sq[i] * sums_sq[j]).sqrt()).clamp(-1.0, 1.0)
            };
            values[i][j] = r;
            values[j][i] = r;
        }
    }
    let zero_variance = names
        .iter()
        .zip(&zero)
        .filter(|(_, &z)| z)
        .map(|(n, _)| n.clone())
        .collect();
    Ok(CorrMatrix {
        names,
        values,
        zero_variance,
    })
}

/// Maps `LEGIT` to 0 and `FRAUD` to 1 and keeps numeric columns in order.
/// Categorical columns must have been dropped already.
pub fn encode_labels(raw: &RawDataset) -> Result<Dataset> {
    let schema = &raw.schema;
    if let Some(c) = schema
        .columns()
        .iter()
        .find(|c| c.kind == ColumnKind::Categorical)
    {
        return Err(Error::Schema(format!(
            "categorical column `{}` must be dropped before encoding",
            c.name
        )));
    }
    let label_idx = schema.label_index();
    let names: Vec<String> = schema
        .columns()
        .iter()
        .filter(|c| c.kind == ColumnKind::Numeric)
        .map(|c| c.name.clone())
        .collect();
    let mut features = Vec::with_capacity(raw.n_rows() * names.len());
    let mut labels = Vec::with_capacity(raw.n_rows());
    for (r, row) in raw.rows.iter().enumerate() {
        let label = match &row[label_idx] {
            RawCell::Text(s) if s == LEGIT => 0,
            RawCell::Text(s) if s == FRAUD => 1,
            RawCell::Text(s) => {
                return Err(Error::InvalidLabel {
                    row: r + 1,
                    value: s.clone(),
                })
            }
            RawCell::Number(v) => {
                return Err(Error::InvalidLabel {
                    row: r + 1,
                    value: v.to_string(),
                })
            }
        };
        labels.push(label);
        for (cell, col) in row.iter().zip(schema.columns()) {
            if col.kind == ColumnKind::Numeric {
                features.push(cell.as_number().ok_or_else(|| Error::UnparseableCell {
                    row: r + 1,
                    column: col.name.clone(),
                    value: cell.as_text().unwrap_or_default().to_string(),
                })?);
            }
        }
    }
    Dataset::new(names, features, labels)
}

pub fn drop_features<S: AsRef<str>>(ds: &Dataset, names: &[S]) -> Result<Dataset> {
    let mut drop = HashSet::new();
    for n in names {
        let n = n.as_ref();
        let idx = ds
            .feature_index(n)
            .ok_or_else(|| Error::UnknownFeature(n.to_string()))?;
        if !drop.insert(idx) {
            return Err(Error::DuplicateDropName(n.to_string()));
        }
    }
    if drop.is_empty() {
        return Ok(ds.clone());
    }
    let keep: Vec<usize> = (0..ds.n_features()).filter(|i| !drop.contains(i)).collect();
    let kept_names = keep.iter().map(|&i| ds.feature_names()[i].clone()).collect();
    let mut features = Vec::with_capacity(ds.n_rows() * keep.len());
    for row in ds.rows() {
        features.extend(keep.iter().map(|&i| row[i]));
    }
    Dataset::new(kept_names, features, ds.labels().to_vec())
}

/// Collapses rows equal in every feature (bitwise) and label to their first
/// occurrence. Returns the deduplicated data and the number removed.
pub fn dedup(ds: &Dataset) -> (Dataset, usize) {
    let keep = dedup_indices(ds);
    let removed = ds.n_rows() - keep.len();
    (ds.subset(&keep), removed)
}

/// Indices of the rows [`dedup`] keeps, ascending.
pub fn dedup_indices(ds: &Dataset) -> Vec<usize> {
    let mut seen: HashSet<(Vec<u64>, u8)> = HashSet::with_capacity(ds.n_rows());
    (0..ds.n_rows())
        .filter(|&i| {
            let key = (
                ds.row(i).iter().map(|v| v.to_bits()).collect(),
                ds.label(i),
            );
            seen.insert(key)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplitResult {
    pub train: Dataset,
    pub test: Dataset,
    /// Source row indices of `train`, ascending.
    pub train_indices: Vec<usize>,
    /// Source row indices of `test`, ascending.
    pub test_indices: Vec<usize>,
    pub test_fraction: f64,
}

/// Per-class test allocation: round-half-up for the minority class, the
/// rest of `round(n * fraction)` goes to the majority. Each class keeps at
/// least one row on each side.
fn test_allocation(counts: [usize; 2], fraction: f64) -> [usize; 2] {
    let minority = if counts[1] <= counts[0] { 1 } else { 0 };
    let majority = 1 - minority;
    let clamp = |x: usize, c: usize| x.clamp(1, c - 1);

    let min_test = clamp(round_half_up(counts[minority] as f64 * fraction), counts[minority]);
    let total = round_half_up((counts[0] + counts[1]) as f64 * fraction);
    let exact = counts[majority] as f64 * fraction;
    let mut maj_test = clamp(total.saturating_sub(min_test), counts[majority]);
    if (maj_test as f64 - exact).abs() >= 1.0 {
        maj_test = clamp(round_half_up(exact), counts[majority]);
    }
    let mut out = [0; 2];
    out[minority] = min_test;
    out[majority] = maj_test;
    out
}

pub fn stratified_split(ds: &Dataset, test_fraction: f64, rng: &RandomSource) -> Result<SplitResult> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::InvalidParam(format!(
            "test_fraction {test_fraction} outside (0, 1)"
        )));
    }
    let counts = ds.class_counts();
    for (class, &c) in counts.iter().enumerate() {
        if c < 2 {
            return Err(Error::InsufficientData(format!(
                "class {class} has {c} rows; a split needs at least 2"
            )));
        }
    }
    let alloc = test_allocation(counts, test_fraction);
    let mut in_test = vec![false; ds.n_rows()];
    for class in 0..2u8 {
        let members = ds.class_indices(class);
        let mut stream = rng.child(format!("class{class}")).stream();
        for k in index::sample(&mut stream, members.len(), alloc[class as usize]) {
            in_test[members[k]] = true;
        }
    }
    let (test_indices, train_indices): (Vec<usize>, Vec<usize>) =
        (0..ds.n_rows()).partition(|&i| in_test[i]);
    Ok(SplitResult {
        train: ds.subset(&train_indices),
        test: ds.subset(&test_indices),
        train_indices,
        test_indices,
        test_fraction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataio::{Column, RawSchema};
    use proptest::prelude::*;

    fn ds(cols: &[(&str, &[f64])], labels: &[u8]) -> Dataset {
        let names = cols.iter().map(|(n, _)| n.to_string()).collect();
        let n = labels.len();
        let mut features = Vec::new();
        for r in 0..n {
            for (_, c) in cols {
                features.push(c[r]);
            }
        }
        Dataset::new(names, features, labels.to_vec()).unwrap()
    }

    /// Covariance over product of standard deviations, straight from the
    /// textbook definition.
    fn pearson_by_definition(x: &[f64], y: &[f64]) -> f64 {
        let n = x.len() as f64;
        let mx = x.iter().sum::<f64>() / n;
        let my = y.iter().sum::<f64>() / n;
        let cov = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum::<f64>() / n;
        let sx = (x.iter().map(|a| (a - mx).powi(2)).sum::<f64>() / n).sqrt();
        let sy = (y.iter().map(|b| (b - my).powi(2)).sum::<f64>() / n).sqrt();
        cov / (sx * sy)
    }

    #[test]
    fn pearson_hand_example() {
        let x = [1.0, 2.0, 3.0];
        let y = [2.0, 4.0, 7.0];
        let oracle = pearson_by_definition(&x, &y);
        // 15 / sqrt(228)
        assert!((oracle - 0.993399).abs() < 1e-6);
        let d = ds(&[("x", &x), ("y", &y)], &[0, 1, 0]);
        let c = pearson_corr(&d, &["x", "y"]).unwrap();
        assert!((c.get("x", "y").unwrap() - oracle).abs() < 1e-12);
    }

    #[test]
    fn pearson_copy_and_negation() {
        let x = [0.3, -1.2, 5.0, 2.2];
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        let d = ds(&[("a", &x), ("b", &x), ("c", &neg)], &[0, 1, 0, 1]);
        let c = pearson_corr(&d, &["a", "b", "c"]).unwrap();
        assert!((c.get("a", "b").unwrap() - 1.0).abs() < 1e-12);
        assert!((c.get("a", "c").unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn pearson_zero_variance_is_zero_with_warning() {
        let d = ds(&[("a", &[1.0, 2.0, 3.0]), ("k", &[4.0, 4.0, 4.0])], &[0, 0, 1]);
        let c = pearson_corr(&d, &["a", "k"]).unwrap();
        assert_eq!(c.get("a", "k"), Some(0.0));
        assert_eq!(c.get("k", "k"), Some(1.0));
        assert_eq!(c.zero_variance, vec!["k".to_string()]);
    }

    #[test]
    fn pearson_errors() {
        let d = ds(&[("a", &[1.0, 2.0])], &[0, 1]);
        assert!(matches!(pearson_corr(&d, &["zz"]), Err(Error::UnknownFeature(_))));
        let one = ds(&[("a", &[1.0])], &[0]);
        assert!(matches!(pearson_corr(&one, &["a"]), Err(Error::InsufficientData(_))));
        assert!(pearson_corr::<&str>(&d, &[]).is_err());
    }

    #[test]
    fn corr_csv_layout() {
        let d = ds(&[("a", &[1.0, 2.0]), ("b", &[2.0, 1.0])], &[0, 1]);
        let c = pearson_corr(&d, &["a", "b"]).unwrap();
        assert_eq!(c.to_csv(), ",a,b\na,1,-1\nb,-1,1\n");
    }

    fn raw(labels: &[&str]) -> RawDataset {
        let schema = RawSchema::new(vec![
            Column { name: "DOMAIN".into(), kind: ColumnKind::Categorical },
            Column { name: "A".into(), kind: ColumnKind::Numeric },
            Column { name: "B".into(), kind: ColumnKind::Numeric },
            Column { name: "TRN_TYPE".into(), kind: ColumnKind::Label },
        ])
        .unwrap();
        let rows = labels
            .iter()
            .enumerate()
            .map(|(i, l)| {
                vec![
                    RawCell::Text("X.COM".into()),
                    RawCell::Number(i as f64),
                    RawCell::Number(2.0 * i as f64),
                    RawCell::Text(l.to_string()),
                ]
            })
            .collect();
        RawDataset { schema, rows }
    }

    #[test]
    fn encode_maps_labels() {
        let r = raw(&["LEGIT", "FRAUD", "LEGIT"]).drop_columns(&["DOMAIN"]).unwrap();
        let d = encode_labels(&r).unwrap();
        assert_eq!(d.labels(), &[0, 1, 0]);
        assert_eq!(d.feature_names(), &["A".to_string(), "B".to_string()]);
        assert_eq!(d.row(2), &[2.0, 4.0]);
    }

    #[test]
    fn encode_is_case_sensitive() {
        let r = raw(&["LEGIT", "Fraud"]).drop_columns(&["DOMAIN"]).unwrap();
        assert!(matches!(
            encode_labels(&r),
            Err(Error::InvalidLabel { row: 2, .. })
        ));
    }

    #[test]
    fn encode_requires_categoricals_dropped() {
        assert!(matches!(encode_labels(&raw(&["LEGIT"])), Err(Error::Schema(_))));
    }

    #[test]
    fn drop_rules() {
        let d = ds(&[("a", &[1.0]), ("b", &[2.0]), ("c", &[3.0])], &[0]);
        assert_eq!(drop_features::<&str>(&d, &[]).unwrap(), d);
        let dropped = drop_features(&d, &["b"]).unwrap();
        assert_eq!(dropped.feature_names(), &["a".to_string(), "c".to_string()]);
        assert_eq!(dropped.row(0), &[1.0, 3.0]);
        assert!(matches!(
            drop_features(&d, &["b", "b"]),
            Err(Error::DuplicateDropName(_))
        ));
        assert!(matches!(drop_features(&d, &["q"]), Err(Error::UnknownFeature(_))));
    }

    #[test]
    fn drop_total_amount_from_seventeen_numeric_columns() {
        let names: Vec<String> = crate::dataio::TRANSACTION_COLUMNS[2..19]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(names.len(), 17);
        let d = Dataset::new(names, vec![0.5; 17], vec![0]).unwrap();
        let out = drop_features(&d, &["TOTAL_TRN_AMT"]).unwrap();
        assert_eq!(out.n_features(), 16);
    }

    #[test]
    fn dedup_cases() {
        let d = ds(&[("a", &[1.0, 2.0, 3.0])], &[0, 0, 1]);
        assert_eq!(dedup(&d).1, 0);

        let d = ds(&[("a", &[5.0, 1.0, 5.0, 5.0])], &[1, 0, 1, 1]);
        let (out, removed) = dedup(&d);
        assert_eq!(removed, 2);
        assert_eq!(out.column(0), vec![5.0, 1.0]);

        let d = ds(&[("a", &[5.0, 5.0])], &[0, 1]);
        assert_eq!(dedup(&d).1, 0);
    }

    fn imbalanced(n0: usize, n1: usize) -> Dataset {
        let n = n0 + n1;
        let col: Vec<f64> = (0..n).map(|i| i as f64).collect();
        let mut labels = vec![0u8; n0];
        labels.extend(vec![1u8; n1]);
        ds(&[("a", &col)], &labels)
    }

    #[test]
    fn split_rounding_examples() {
        let d = imbalanced(98, 2);
        let s = stratified_split(&d, 0.5, &RandomSource::root(4)).unwrap();
        assert_eq!(s.test.class_counts(), [49, 1]);
        assert_eq!(s.train.class_counts(), [49, 1]);

        let d = imbalanced(5, 5);
        let s = stratified_split(&d, 0.5, &RandomSource::root(4)).unwrap();
        assert_eq!(s.test.n_rows(), 5);
        assert_eq!(s.train.n_rows(), 5);
        // 2.5 rows per class cannot split evenly: minority rounds up, majority absorbs.
        assert_eq!(s.test.class_counts(), [2, 3]);
        assert_eq!(s.train.class_counts(), [3, 2]);
    }

    #[test]
    fn split_is_deterministic_and_partitions() {
        let d = imbalanced(300, 17);
        let a = stratified_split(&d, 0.3, &RandomSource::root(8)).unwrap();
        let b = stratified_split(&d, 0.3, &RandomSource::root(8)).unwrap();
        assert_eq!(a.test_indices, b.test_indices);
        let mut all: Vec<usize> = a.train_indices.iter().chain(&a.test_indices).copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..317).collect::<Vec<_>>());
    }

    #[test]
    fn split_needs_two_per_class() {
        let d = imbalanced(10, 1);
        assert!(matches!(
            stratified_split(&d, 0.3, &RandomSource::root(1)),
            Err(Error::InsufficientData(_))
        ));
        assert!(stratified_split(&imbalanced(5, 5), 1.0, &RandomSource::root(1)).is_err());
    }

    proptest! {
        #[test]
        fn corr_is_symmetric_unit_diagonal(
            rows in prop::collection::vec(prop::collection::vec(-100.0f64..100.0, 3), 2..40)
        ) {
            let labels = vec![0u8; rows.len()];
            let d = Dataset::from_rows(vec!["a".into(), "b".into(), "c".into()], &rows, labels).unwrap();
            let c = pearson_corr(&d, &["a", "b", "c"]).unwrap();
            for i in 0..3 {
                prop_assert_eq!(c.values[i][i], 1.0);
                for j in 0..3 {
                    prop_assert_eq!(c.values[i][j], c.values[j][i]);
                    prop_assert!(c.values[i][j].abs() <= 1.0 + 1e-12);
                }
            }
        }

        #[test]
        fn dedup_is_idempotent(
            rows in prop::collection::vec(prop::collection::vec(0u8..3, 2), 0..60),
            labels in prop::collection::vec(0u8..2, 60)
        ) {
            let rows: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|&v| v as f64).collect()).collect();
            let labels = labels[..rows.len()].to_vec();
            let d = Dataset::from_rows(vec!["a".into(), "b".into()], &rows, labels).unwrap();
            let (once, removed) = dedup(&d);
            prop_assert_eq!(once.n_rows() + removed, d.n_rows());
            prop_assert_eq!(dedup(&once).1, 0);
        }

        #[test]
        fn split_preserves_class_proportions(
            n0 in 2usize..400, n1 in 2usize..60, frac in 0.05f64..0.95, seed in any::<u64>()
        ) {
            let d = imbalanced(n0, n1);
            let s = stratified_split(&d, frac, &RandomSource::root(seed)).unwrap();
            prop_assert_eq!(s.train.n_rows() + s.test.n_rows(), d.n_rows());
            let tc = s.test.class_counts();
            for (c, &count) in [n0, n1].iter().enumerate() {
                prop_assert!((tc[c] as f64 - count as f64 * frac).abs() < 1.0);
            }
            let train: HashSet<_> = s.train_indices.iter().collect();
            prop_assert!(s.test_indices.iter().all(|i| !train.contains(i)));
        }

        #[test]
        fn encode_and_drop_commute(
            values in prop::collection::vec(-50.0f64..50.0, 3 * 12),
            fraud in prop::collection::vec(any::<bool>(), 12),
            which in 0usize..3
        ) {
            let schema = RawSchema::new(vec![
                Column { name: "A".into(), kind: ColumnKind::Numeric },
                Column { name: "B".into(), kind: ColumnKind::Numeric },
                Column { name: "C".into(), kind: ColumnKind::Numeric },
                Column { name: "TRN_TYPE".into(), kind: ColumnKind::Label },
            ]).unwrap();
            let rows = (0..12).map(|r| {
                let mut row: Vec<RawCell> = values[3 * r..3 * r + 3].iter().map(|&v| RawCell::Number(v)).collect();
                row.push(RawCell::Text(if fraud[r] { FRAUD } else { LEGIT }.into()));
                row
            }).collect();
            let raw = RawDataset { schema, rows };
            let name = ["A", "B", "C"][which];
            let left = encode_labels(&raw.drop_columns(&[name]).unwrap()).unwrap();
            let right = drop_features(&encode_labels(&raw).unwrap(), &[name]).unwrap();
            prop_assert_eq!(left, right);
        }
    }
}
