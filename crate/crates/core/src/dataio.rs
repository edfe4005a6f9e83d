//! Raw transaction ingest, the processed dataset format, and a synthetic
//! imbalanced data generator.

use std::collections::HashSet;
use std::fs::File;
use std::path::Path;

use rand::seq::index;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RandomSource;

/// Kind of a raw input column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColumnKind {
    /// Free text that is never numerically encoded (e.g. DOMAIN, STATE).
    Categorical,
    Numeric,
    /// The `LEGIT` / `FRAUD` target column.
    Label,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Column {
    pub name: String,
    pub kind: ColumnKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawSchema {
    columns: Vec<Column>,
}

/// Column names of the credit card transaction export, in file order.
pub const TRANSACTION_COLUMNS: [&str; 20] = [
    "DOMAIN",
    "STATE",
    "ZIP CODE",
    "Time1",
    "Time2",
    "VIS1",
    "VIS2",
    "XRN1",
    "XRN2",
    "XRN3",
    "XRN4",
    "XRN5",
    "VAR1",
    "VAR2",
    "VAR3",
    "VAR4",
    "VAR5",
    "TRN_AMT",
    "TOTAL_TRN_AMT",
    "TRN_TYPE",
];

/// Label value for legitimate transactions.
pub const LEGIT: &str = "LEGIT";
/// Label value for fraudulent transactions.
pub const FRAUD: &str = "FRAUD";

impl RawSchema {
    pub fn new(columns: Vec<Column>) -> Result<Self> {
        if columns.is_empty() {
            return Err(Error::Schema("schema has no columns".into()));
        }
        let labels = columns
            .iter()
            .filter(|c| c.kind == ColumnKind::Label)
            .count();
        if labels != 1 {
            return Err(Error::Schema(format!(
                "expected exactly one label column, found {labels}"
            )));
        }
        let mut seen = HashSet::new();
        for c in &columns {
            if !seen.insert(c.name.as_str()) {
                return Err(Error::Schema(format!("duplicate column `{}`", c.name)));
            }
        }
        Ok(Self { columns })
    }

    /// The 20-column transaction schema: DOMAIN and STATE categorical,
    /// TRN_TYPE the label, everything else numeric.
    pub fn transactions() -> Self {
        let columns = TRANSACTION_COLUMNS
            .iter()
            .map(|&name| Column {
                name: name.to_string(),
                kind: match name {
                    "DOMAIN" | "STATE" => ColumnKind::Categorical,
                    "TRN_TYPE" => ColumnKind::Label,
                    _ => ColumnKind::Numeric,
                },
            })
            .collect();
        Self::new(columns).expect("built-in schema is valid")
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    pub fn label_index(&self) -> usize {
        self.columns
            .iter()
            .position(|c| c.kind == ColumnKind::Label)
            .expect("schema invariant: one label column")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RawCell {
    Text(String),
    Number(f64),
}

impl RawCell {
    pub fn as_number(&self) -> Option<f64> {
        match self {
            RawCell::Number(v) => Some(*v),
            RawCell::Text(_) => None,
        }
    }

    pub fn as_text(&self) -> Option<&str> {
        match self {
            RawCell::Text(s) => Some(s),
            RawCell::Number(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawDataset {
    pub schema: RawSchema,
    pub rows: Vec<Vec<RawCell>>,
}

impl RawDataset {
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    /// Removes the named columns. Unknown or repeated names are errors;
    /// the label column cannot be dropped.
    pub fn drop_columns<S: AsRef<str>>(&self, names: &[S]) -> Result<RawDataset> {
        let mut drop = HashSet::new();
        for n in names {
            let n = n.as_ref();
            let idx = self
                .schema
                .position(n)
                .ok_or_else(|| Error::UnknownFeature(n.to_string()))?;
            if self.schema.columns[idx].kind == ColumnKind::Label {
                return Err(Error::Schema(format!("cannot drop label column `{n}`")));
            }
            if !drop.insert(idx) {
                return Err(Error::DuplicateDropName(n.to_string()));
            }
        }
        let keep: Vec<usize> = (0..self.schema.len())
            .filter(|i| !drop.contains(i))
            .collect();
        let schema = RawSchema::new(
            keep.iter()
                .map(|&i| self.schema.columns[i].clone())
                .collect(),
        )?;
        let rows = self
            .rows
            .iter()
            .map(|r| keep.iter().map(|&i| r[i].clone()).collect())
            .collect();
        Ok(RawDataset { schema, rows })
    }
}

/// Reads a raw CSV whose header must match `schema` exactly, in order.
pub fn load_csv(path: impl AsRef<Path>, schema: &RawSchema) -> Result<RawDataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(file);
    let mut records = reader.records();

    let header = match records.next() {
        Some(h) => h?,
        None => return Err(Error::Schema(format!("{} has no header line", path.display()))),
    };
    for (i, col) in schema.columns().iter().enumerate() {
        let found = header.get(i).unwrap_or("");
        if found != col.name {
            return Err(Error::HeaderMismatch {
                index: i,
                expected: col.name.clone(),
                found: found.to_string(),
            });
        }
    }
    if header.len() > schema.len() {
        return Err(Error::HeaderMismatch {
            index: schema.len(),
            expected: String::new(),
            found: header[schema.len()].to_string(),
        });
    }

    let mut rows = Vec::new();
    for (r, record) in records.enumerate() {
        let record = record?;
        let row_no = r + 1;
        if record.len() != schema.len() {
            return Err(Error::RaggedRow {
                row: row_no,
                expected: schema.len(),
                found: record.len(),
            });
        }
        let mut cells = Vec::with_capacity(schema.len());
        for (value, col) in record.iter().zip(schema.columns()) {
            let cell = match col.kind {
                ColumnKind::Numeric => match value.trim().parse::<f64>() {
                    Ok(v) if v.is_finite() => RawCell::Number(v),
                    _ => {
                        return Err(Error::UnparseableCell {
                            row: row_no,
                            column: col.name.clone(),
                            value: value.to_string(),
                        })
                    }
                },
                ColumnKind::Categorical | ColumnKind::Label => RawCell::Text(value.to_string()),
            };
            cells.push(cell);
        }
        rows.push(cells);
    }
    Ok(RawDataset {
        schema: schema.clone(),
        rows,
    })
}

/// Numeric feature matrix with binary labels (0 = legitimate, 1 = fraud).
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    feature_names: Vec<String>,
    features: Vec<f64>,
    labels: Vec<u8>,
}

impl Dataset {
    /// Builds a dataset from a row-major matrix.
    pub fn new(feature_names: Vec<String>, features: Vec<f64>, labels: Vec<u8>) -> Result<Self> {
        let p = feature_names.len();
        if p == 0 {
            return Err(Error::Schema("dataset needs at least one feature".into()));
        }
        if features.len() != p * labels.len() {
            return Err(Error::Schema(format!(
                "matrix has {} values, expected {} rows x {} features",
                features.len(),
                labels.len(),
                p
            )));
        }
        if let Some((row, &l)) = labels.iter().enumerate().find(|(_, &l)| l > 1) {
            return Err(Error::InvalidLabel {
                row,
                value: l.to_string(),
            });
        }
        if let Some(pos) = features.iter().position(|v| !v.is_finite()) {
            return Err(Error::UnparseableCell {
                row: pos / p,
                column: feature_names[pos % p].clone(),
                value: features[pos].to_string(),
            });
        }
        Ok(Self {
            feature_names,
            features,
            labels,
        })
    }

    pub fn from_rows(feature_names: Vec<String>, rows: &[Vec<f64>], labels: Vec<u8>) -> Result<Self> {
        let p = feature_names.len();
        if let Some(r) = rows.iter().position(|r| r.len() != p) {
            return Err(Error::RaggedRow {
                row: r,
                expected: p,
                found: rows[r].len(),
            });
        }
        Self::new(feature_names, rows.concat(), labels)
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn n_rows(&self) -> usize {
        self.labels.len()
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let p = self.n_features();
        &self.features[i * p..(i + 1) * p]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.features.chunks_exact(self.n_features())
    }

    pub fn label(&self, i: usize) -> u8 {
        self.labels[i]
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn features(&self) -> &[f64] {
        &self.features
    }

    pub fn value(&self, row: usize, feature: usize) -> f64 {
        self.features[row * self.n_features() + feature]
    }

    pub fn feature_index(&self, name: &str) -> Option<usize> {
        self.feature_names.iter().position(|n| n == name)
    }

    /// Values of one feature column.
    pub fn column(&self, feature: usize) -> Vec<f64> {
        self.rows().map(|r| r[feature]).collect()
    }

    /// `[count of label 0, count of label 1]`.
    pub fn class_counts(&self) -> [usize; 2] {
        let ones = self.labels.iter().filter(|&&l| l == 1).count();
        [self.labels.len() - ones, ones]
    }

    /// Indices of rows with the given label, ascending.
    pub fn class_indices(&self, class: u8) -> Vec<usize> {
        (0..self.n_rows()).filter(|&i| self.labels[i] == class).collect()
    }

    /// Rows at `indices`, in the order given.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        let p = self.n_features();
        let mut features = Vec::with_capacity(indices.len() * p);
        let mut labels = Vec::with_capacity(indices.len());
        for &i in indices {
            features.extend_from_slice(self.row(i));
            labels.push(self.labels[i]);
        }
        Dataset {
            feature_names: self.feature_names.clone(),
            features,
            labels,
        }
    }

    pub(crate) fn push_row(&mut self, row: &[f64], label: u8) {
        debug_assert_eq!(row.len(), self.n_features());
        debug_assert!(label <= 1);
        self.features.extend_from_slice(row);
        self.labels.push(label);
    }

}

/// Parameters for [`generate_synthetic`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthSpec {
    pub n_rows: usize,
    pub fraud_rate: f64,
    pub n_features: usize,
    /// Per-coordinate distance between the class means, in units of the
    /// common standard deviation.
    pub class_separation: f64,
    /// Make the last column a near copy of the second-to-last.
    #[serde(default)]
    pub include_redundant_pair: bool,
}

impl Default for SynthSpec {
    /// 10,000 rows at 2.3% fraud, 10 features, separation 2.
    fn default() -> Self {
        Self {
            n_rows: 10_000,
            fraud_rate: 0.023,
            n_features: 10,
            class_separation: 2.0,
            include_redundant_pair: true,
        }
    }
}

pub(crate) fn round_half_up(x: f64) -> usize {
    (x + 0.5).floor() as usize
}

impl SynthSpec {
    pub fn fraud_count(&self) -> usize {
        round_half_up(self.n_rows as f64 * self.fraud_rate)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_rows == 0 {
            return Err(Error::InvalidParam("n_rows must be positive".into()));
        }
        if !(self.fraud_rate > 0.0 && self.fraud_rate < 1.0) {
            return Err(Error::InvalidParam(format!(
                "fraud_rate {} outside (0, 1)",
                self.fraud_rate
            )));
        }
        if self.n_features == 0 {
            return Err(Error::InvalidParam("n_features must be positive".into()));
        }
        if !(self.class_separation >= 0.0 && self.class_separation.is_finite()) {
            return Err(Error::InvalidParam(
                "class_separation must be finite and nonnegative".into(),
            ));
        }
        if self.include_redundant_pair && self.n_features < 2 {
            return Err(Error::InvalidParam(
                "include_redundant_pair needs at least 2 features".into(),
            ));
        }
        if self.fraud_count() < 1 {
            return Err(Error::InvalidParam(format!(
                "round({} x {}) = 0 fraud rows",
                self.n_rows, self.fraud_rate
            )));
        }
        Ok(())
    }
}

/// Draws a two-class Gaussian dataset. Legitimate rows are N(0, I); fraud
/// rows are N(s·1, I) with `s = class_separation`. Fraud rows sit at
/// uniformly random positions.
pub fn generate_synthetic(spec: &SynthSpec, rng: &RandomSource) -> Result<Dataset> {
    spec.validate()?;
    let n = spec.n_rows;
    let p = spec.n_features;

    let mut labels = vec![0u8; n];
    let mut pick = rng.child("labels").stream();
    for i in index::sample(&mut pick, n, spec.fraud_count()) {
        labels[i] = 1;
    }

    let mut draw = rng.child("features").stream();
    let mut features = Vec::with_capacity(n * p);
    for &label in &labels {
        let mean = if label == 1 { spec.class_separation } else { 0.0 };
        for j in 0..p {
            if spec.include_redundant_pair && j == p - 1 {
                let base = features[features.len() - 1];
                let noise: f64 = draw.sample(StandardNormal);
                features.push(base + 0.01 * noise);
            } else {
                let z: f64 = StandardNormal.sample(&mut draw);
                features.push(mean + z);
            }
        }
    }
    let names = (1..=p).map(|j| format!("x{j}")).collect();
    Dataset::new(names, features, labels)
}

const FEATURE_PREFIX: &str = "f:";
const LABEL_HEADER: &str = "label";

/// Writes the processed dataset CSV: header `f:<name>,...,label`, values in
/// shortest round-trip decimal form.
pub fn save_dataset(ds: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = csv::Writer::from_writer(file);
    let mut header: Vec<String> = ds
        .feature_names()
        .iter()
        .map(|n| format!("{FEATURE_PREFIX}{n}"))
        .collect();
    header.push(LABEL_HEADER.to_string());
    w.write_record(&header)?;
    let mut record = Vec::with_capacity(ds.n_features() + 1);
    for (row, label) in ds.rows().zip(ds.labels()) {
        record.clear();
        record.extend(row.iter().map(|v| v.to_string()));
        record.push(label.to_string());
        w.write_record(&record)?;
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

pub fn load_dataset(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(file);
    let mut records = reader.records();
    let header = match records.next() {
        Some(h) => h?,
        None => {
            return Err(Error::Corrupt {
                path: path.into(),
                reason: "missing header".into(),
            })
        }
    };
    let width = header.len();
    if width < 2 || &header[width - 1] != LABEL_HEADER {
        return Err(Error::Corrupt {
            path: path.into(),
            reason: "last header column must be `label`".into(),
        });
    }
    let mut names = Vec::with_capacity(width - 1);
    for h in header.iter().take(width - 1) {
        match h.strip_prefix(FEATURE_PREFIX) {
            Some(name) => names.push(name.to_string()),
            None => {
                return Err(Error::Corrupt {
                    path: path.into(),
                    reason: format!("feature header `{h}` lacks the `f:` prefix"),
                })
            }
        }
    }

    let mut features = Vec::new();
    let mut labels = Vec::new();
    for (r, record) in records.enumerate() {
        let record = record?;
        let row_no = r + 1;
        if record.len() != width {
            return Err(Error::RaggedRow {
                row: row_no,
                expected: width,
                found: record.len(),
            });
        }
        for (j, value) in record.iter().take(width - 1).enumerate() {
            match value.parse::<f64>() {
                Ok(v) if v.is_finite() => features.push(v),
                _ => {
                    return Err(Error::UnparseableCell {
                        row: row_no,
                        column: names[j].clone(),
                        value: value.to_string(),
                    })
                }
            }
        }
        match &record[width - 1] {
            "0" => labels.push(0),
            "1" => labels.push(1),
            other => {
                return Err(Error::InvalidLabel {
                    row: row_no,
                    value: other.to_string(),
                })
            }
        }
    }
    Dataset::new(names, features, labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    const TABLE1_HEADER: &str = "DOMAIN,STATE,ZIP CODE,Time1,Time2,VIS1,VIS2,XRN1,XRN2,XRN3,XRN4,XRN5,VAR1,VAR2,VAR3,VAR4,VAR5,TRN_AMT,TOTAL_TRN_AMT,TRN_TYPE";
    const TABLE1_ROW: &str =
        "CDRZLKA JJVQHC N.COM,AO,675,12,12,1,0,0,1,1,0,1,2,1,16.680,34,0,12.95,12.95,LEGIT";

    fn write_tmp(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    #[test]
    fn loads_table1_row() {
        let f = write_tmp(&format!("{TABLE1_HEADER}\n{TABLE1_ROW}\n"));
        let raw = load_csv(f.path(), &RawSchema::transactions()).unwrap();
        assert_eq!(raw.n_rows(), 1);
        assert_eq!(raw.rows[0].len(), 20);
        assert_eq!(raw.rows[0][19].as_text(), Some("LEGIT"));
        assert_eq!(raw.rows[0][0].as_text(), Some("CDRZLKA JJVQHC N.COM"));
        assert_eq!(raw.rows[0][2].as_number(), Some(675.0));
        assert_eq!(raw.rows[0][17].as_number(), Some(12.95));
    }

    #[test]
    fn header_only_gives_empty_dataset() {
        let f = write_tmp(&format!("{TABLE1_HEADER}\n"));
        let raw = load_csv(f.path(), &RawSchema::transactions()).unwrap();
        assert_eq!(raw.n_rows(), 0);
    }

    #[test]
    fn unparseable_amount_names_column() {
        let bad = TABLE1_ROW.replacen("12.95", "abc", 1);
        let f = write_tmp(&format!("{TABLE1_HEADER}\n{bad}\n"));
        match load_csv(f.path(), &RawSchema::transactions()) {
            Err(Error::UnparseableCell { row, column, value }) => {
                assert_eq!(row, 1);
                assert_eq!(column, "TRN_AMT");
                assert_eq!(value, "abc");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn header_mismatch_names_column() {
        let header = TABLE1_HEADER.replace("Time2", "Time 2");
        let f = write_tmp(&format!("{header}\n"));
        match load_csv(f.path(), &RawSchema::transactions()) {
            Err(Error::HeaderMismatch { index, expected, .. }) => {
                assert_eq!(index, 4);
                assert_eq!(expected, "Time2");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn ragged_row_and_missing_file() {
        let f = write_tmp(&format!("{TABLE1_HEADER}\nA,B,1\n"));
        assert!(matches!(
            load_csv(f.path(), &RawSchema::transactions()),
            Err(Error::RaggedRow { row: 1, expected: 20, found: 3 })
        ));
        assert!(matches!(
            load_csv("/nonexistent/x.csv", &RawSchema::transactions()),
            Err(Error::Io { .. })
        ));
    }

    #[test]
    fn non_finite_numeric_rejected() {
        let bad = TABLE1_ROW.replacen("675", "NaN", 1);
        let f = write_tmp(&format!("{TABLE1_HEADER}\n{bad}\n"));
        assert!(matches!(
            load_csv(f.path(), &RawSchema::transactions()),
            Err(Error::UnparseableCell { .. })
        ));
    }

    #[test]
    fn schema_invariants() {
        let col = |n: &str, kind| Column {
            name: n.into(),
            kind,
        };
        assert!(RawSchema::new(vec![col("a", ColumnKind::Numeric)]).is_err());
        assert!(RawSchema::new(vec![
            col("a", ColumnKind::Numeric),
            col("a", ColumnKind::Label)
        ])
        .is_err());
        assert_eq!(RawSchema::transactions().len(), 20);
    }

    fn spec(n_rows: usize, fraud_rate: f64) -> SynthSpec {
        SynthSpec {
            n_rows,
            fraud_rate,
            n_features: 4,
            class_separation: 2.0,
            include_redundant_pair: false,
        }
    }

    #[test]
    fn synthetic_fraud_count_is_rounded() {
        let ds = generate_synthetic(&spec(1000, 0.023), &RandomSource::root(1)).unwrap();
        assert_eq!(ds.class_counts(), [977, 23]);
        let ds = generate_synthetic(&spec(10, 0.25), &RandomSource::root(1)).unwrap();
        assert_eq!(ds.class_counts()[1], 3); // 2.5 rounds up
    }

    #[test]
    fn synthetic_is_deterministic() {
        let s = spec(500, 0.1);
        let a = generate_synthetic(&s, &RandomSource::root(9)).unwrap();
        let b = generate_synthetic(&s, &RandomSource::root(9)).unwrap();
        assert_eq!(a, b);
        let c = generate_synthetic(&s, &RandomSource::root(10)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn synthetic_rejects_zero_fraud() {
        assert!(matches!(
            generate_synthetic(&spec(10, 0.01), &RandomSource::root(1)),
            Err(Error::InvalidParam(_))
        ));
    }

    #[test]
    fn save_load_round_trip() {
        let ds = generate_synthetic(&spec(200, 0.1), &RandomSource::root(3)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ds.csv");
        save_dataset(&ds, &path).unwrap();
        let back = load_dataset(&path).unwrap();
        assert_eq!(back, ds);
        let bits = |d: &Dataset| d.features().iter().map(|v| v.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&back), bits(&ds));
    }

    #[test]
    fn empty_dataset_round_trips_with_names() {
        let ds = Dataset::new(vec!["a".into(), "b".into(), "c".into()], vec![], vec![]).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.csv");
        save_dataset(&ds, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text, "f:a,f:b,f:c,label\n");
        assert_eq!(load_dataset(&path).unwrap(), ds);
    }

    #[test]
    fn load_rejects_label_two() {
        let f = write_tmp("f:a,label\n1.5,0\n2.5,2\n");
        match load_dataset(f.path()) {
            Err(e @ Error::InvalidLabel { .. }) => {
                assert!(e.to_string().contains("invalid label"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn load_rejects_bad_shape() {
        let f = write_tmp("f:a,f:b,label\n1,0\n");
        assert!(matches!(load_dataset(f.path()), Err(Error::RaggedRow { .. })));
        let f = write_tmp("a,label\n1,0\n");
        assert!(matches!(load_dataset(f.path()), Err(Error::Corrupt { .. })));
    }

    #[test]
    fn dataset_rejects_inconsistent_shape() {
        assert!(Dataset::new(vec!["a".into()], vec![1.0, 2.0], vec![0]).is_err());
        assert!(Dataset::new(vec!["a".into()], vec![f64::NAN], vec![0]).is_err());
        assert!(Dataset::new(vec!["a".into()], vec![1.0], vec![3]).is_err());
    }
}
