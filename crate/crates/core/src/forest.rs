//! CART trees with Gini splits, bagged into a random forest.
//!
//! Split scoring is done in exact integer arithmetic so that ties between
//! candidate splits are real ties, broken by lower feature index and then
//! lower threshold. Every tree draws its randomness from child streams
//! `tree/<t>/bootstrap` and `tree/<t>/grow/<path>`, so a fitted model does
//! not depend on how many threads trained it.

use std::fs;
use std::path::Path;

use rand::seq::index;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataio::Dataset;
use crate::error::{Error, Result};
use crate::rng::RandomSource;

/// Number of candidate features drawn at each node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SizeRepr", into = "SizeRepr")]
pub enum MaxFeatures {
    /// `floor(sqrt(p))`, at least 1.
    Sqrt,
    All,
    Count(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SizeRepr", into = "SizeRepr")]
pub enum MaxDepth {
    Limited(usize),
    Unlimited,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum SizeRepr {
    Count(usize),
    Name(String),
}

impl From<MaxFeatures> for SizeRepr {
    fn from(m: MaxFeatures) -> Self {
        match m {
            MaxFeatures::Sqrt => SizeRepr::Name("sqrt".into()),
            MaxFeatures::All => SizeRepr::Name("all".into()),
            MaxFeatures::Count(n) => SizeRepr::Count(n),
        }
    }
}

impl TryFrom<SizeRepr> for MaxFeatures {
    type Error = String;

    fn try_from(r: SizeRepr) -> std::result::Result<Self, String> {
        match r {
            SizeRepr::Count(0) => Err("max_features must be positive".into()),
            SizeRepr::Count(n) => Ok(MaxFeatures::Count(n)),
            SizeRepr::Name(s) if s == "sqrt" => Ok(MaxFeatures::Sqrt),
            SizeRepr::Name(s) if s == "all" => Ok(MaxFeatures::All),
            SizeRepr::Name(s) => Err(format!(
                "max_features `{s}`: expected \"sqrt\", \"all\" or a positive integer"
            )),
        }
    }
}

impl From<MaxDepth> for SizeRepr {
    fn from(d: MaxDepth) -> Self {
        match d {
            MaxDepth::Limited(n) => SizeRepr::Count(n),
            MaxDepth::Unlimited => SizeRepr::Name("unlimited".into()),
        }
    }
}

impl TryFrom<SizeRepr> for MaxDepth {
    type Error = String;

    fn try_from(r: SizeRepr) -> std::result::Result<Self, String> {
        match r {
            SizeRepr::Count(0) => Err("max_depth must be positive".into()),
            SizeRepr::Count(n) => Ok(MaxDepth::Limited(n)),
            SizeRepr::Name(s) if s == "unlimited" => Ok(MaxDepth::Unlimited),
            SizeRepr::Name(s) => Err(format!(
                "max_depth `{s}`: expected \"unlimited\" or a positive integer"
            )),
        }
    }
}

impl MaxFeatures {
    pub fn resolve(self, n_features: usize) -> usize {
        match self {
            MaxFeatures::Sqrt => ((n_features as f64).sqrt().floor() as usize).max(1),
            MaxFeatures::All => n_features,
            MaxFeatures::Count(n) => n,
        }
    }
}

impl MaxDepth {
    fn reached(self, depth: usize) -> bool {
        matches!(self, MaxDepth::Limited(d) if depth >= d)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForestParams {
    pub n_trees: usize,
    pub max_depth: MaxDepth,
    pub min_samples_split: usize,
    pub max_features: MaxFeatures,
    pub bootstrap: bool,
}

impl Default for ForestParams {
    fn default() -> Self {
        Self {
            n_trees: 100,
            max_depth: MaxDepth::Unlimited,
            min_samples_split: 2,
            max_features: MaxFeatures::Sqrt,
            bootstrap: true,
        }
    }
}

impl ForestParams {
    /// A single, unrandomised CART tree on the full data.
    pub fn single_tree() -> Self {
        Self {
            n_trees: 1,
            max_depth: MaxDepth::Unlimited,
            min_samples_split: 2,
            max_features: MaxFeatures::All,
            bootstrap: false,
        }
    }

    pub fn validate(&self, n_features: usize) -> Result<()> {
        if self.n_trees == 0 {
            return Err(Error::InvalidParam("n_trees must be positive".into()));
        }
        if self.min_samples_split < 2 {
            return Err(Error::InvalidParam("min_samples_split must be at least 2".into()));
        }
        if self.max_depth == MaxDepth::Limited(0) {
            return Err(Error::InvalidParam("max_depth must be positive".into()));
        }
        if let MaxFeatures::Count(n) = self.max_features {
            if n == 0 || n > n_features {
                return Err(Error::InvalidParam(format!(
                    "max_features {n} outside 1..={n_features}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TreeNode {
    Leaf {
        /// `[n0, n1]` training rows that reached this leaf.
        class_counts: [usize; 2],
    },
    /// Rows with `value <= threshold` go left.
    Split {
        feature_index: usize,
        threshold: f64,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
}

impl TreeNode {
    /// The leaf a row is routed to.
    pub fn leaf_for(&self, row: &[f64]) -> [usize; 2] {
        let mut node = self;
        loop {
            match node {
                TreeNode::Leaf { class_counts } => return *class_counts,
                TreeNode::Split {
                    feature_index,
                    threshold,
                    left,
                    right,
                } => {
                    node = if row[*feature_index] <= *threshold {
                        left
                    } else {
                        right
                    };
                }
            }
        }
    }

    /// Majority class of the routed leaf; a tie votes 0.
    pub fn vote(&self, row: &[f64]) -> u8 {
        let [n0, n1] = self.leaf_for(row);
        u8::from(n1 > n0)
    }

    pub fn depth(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 0,
            TreeNode::Split { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 1,
            TreeNode::Split { left, right, .. } => 1 + left.node_count() + right.node_count(),
        }
    }

    fn max_feature_index(&self) -> Option<usize> {
        match self {
            TreeNode::Leaf { .. } => None,
            TreeNode::Split {
                feature_index,
                left,
                right,
                ..
            } => [Some(*feature_index), left.max_feature_index(), right.max_feature_index()]
                .into_iter()
                .flatten()
                .max(),
        }
    }
}

/// Gini impurity `1 - p0^2 - p1^2` of a node with the given class counts.
pub fn gini(counts: [usize; 2]) -> Result<f64> {
    let n = counts[0] + counts[1];
    if n == 0 {
        return Err(Error::InsufficientData("gini of an empty node".into()));
    }
    let p0 = counts[0] as f64 / n as f64;
    let p1 = counts[1] as f64 / n as f64;
    Ok(1.0 - p0 * p0 - p1 * p1)
}

/// A subset of dataset rows.
#[derive(Debug, Clone, Copy)]
pub struct Rows<'a> {
    pub data: &'a Dataset,
    pub indices: &'a [usize],
}

impl<'a> Rows<'a> {
    pub fn new(data: &'a Dataset, indices: &'a [usize]) -> Self {
        Self { data, indices }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn class_counts(&self) -> [usize; 2] {
        let ones = self
            .indices
            .iter()
            .filter(|&&i| self.data.label(i) == 1)
            .count();
        [self.indices.len() - ones, ones]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Split {
    pub feature_index: usize,
    pub threshold: f64,
    /// `(n_L * gini_L + n_R * gini_R) / n`.
    pub weighted_impurity: f64,
}

/// `sum_c n_c^2 / n` summed over both children, kept as an exact fraction.
/// The weighted child impurity is `(n - purity) / n`, so larger is better.
#[derive(Debug, Clone, Copy)]
struct Purity {
    /// Class counts of each side; a single node has an empty right side.
    left: [usize; 2],
    right: [usize; 2],
    /// The fraction in floating point, good to a few ulps. Settles every
    /// comparison except near-ties, which fall back to exact integers.
    approx: f64,
}

impl Purity {
    /// `(a^2 + b^2) / (a + b)` for a non-empty side.
    fn side(c: [usize; 2]) -> f64 {
        let (a, b) = (c[0] as f64, c[1] as f64);
        (a * a + b * b) / (a + b)
    }

    fn node(c: [usize; 2]) -> Self {
        Self {
            left: c,
            right: [0, 0],
            approx: Self::side(c),
        }
    }

    /// Both sides must be non-empty.
    fn split(l: [usize; 2], r: [usize; 2]) -> Self {
        Self {
            left: l,
            right: r,
            approx: Self::side(l) + Self::side(r),
        }
    }

    /// Exact `(num, den)`.
    fn exact(&self) -> (u128, u128) {
        let part = |c: [usize; 2]| {
            let sq = |x: usize| (x as u128) * (x as u128);
            (sq(c[0]) + sq(c[1]), (c[0] + c[1]) as u128)
        };
        let (nl, dl) = part(self.left);
        let (nr, dr) = part(self.right);
        if dr == 0 {
            (nl, dl)
        } else {
            (nl * dr + nr * dl, dl * dr)
        }
    }

    fn greater_than(&self, other: &Purity) -> bool {
        const MARGIN: f64 = 1e-12;
        if self.approx > other.approx * (1.0 + MARGIN) {
            true
        } else if self.approx < other.approx * (1.0 - MARGIN) {
            false
        } else {
            let (a, b) = (self.exact(), other.exact());
            a.0 * b.1 > b.0 * a.1
        }
    }

    fn weighted_impurity(&self, n: usize) -> f64 {
        let (num, den) = self.exact();
        let n = n as f64;
        (n - num as f64 / den as f64) / n
    }
}

fn midpoint(lo: f64, hi: f64) -> f64 {
    let mid = (lo + hi) / 2.0;
    // Adjacent floats: the midpoint rounds up to `hi`, which would route it left.
    if mid < hi {
        mid
    } else {
        lo
    }
}

/// Best Gini split over `feature_subset`, or `None` when no candidate
/// threshold lowers the impurity.
pub fn best_split(rows: Rows<'_>, feature_subset: &[usize]) -> Option<Split> {
    let n = rows.len();
    if n < 2 || feature_subset.is_empty() {
        return None;
    }
    let total = rows.class_counts();
    if total[0] == 0 || total[1] == 0 {
        return None;
    }
    let parent = Purity::node(total);

    let mut features = feature_subset.to_vec();
    features.sort_unstable();
    features.dedup();

    let mut best = None;
    let mut column: Vec<(f64, u8)> = Vec::with_capacity(n);
    for &f in &features {
        column.clear();
        column.extend(
            rows.indices
                .iter()
                .map(|&i| (rows.data.value(i, f), rows.data.label(i))),
        );
        column.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
        let weighted = column.iter().map(|&(v, l)| (v, l, 1));
        scan_sorted(weighted, f, total, &parent, &mut best, midpoint);
    }
    best.map(|b| b.into_split(n))
}

struct Candidate {
    score: Purity,
    feature_index: usize,
    threshold: f64,
}

impl Candidate {
    fn into_split(self, n: usize) -> Split {
        Split {
            feature_index: self.feature_index,
            threshold: self.threshold,
            weighted_impurity: self.score.weighted_impurity(n),
        }
    }
}

/// Walks one feature's `(value, label, weight)` entries in ascending value order and
/// keeps the first strictly better boundary. Callers visit features in
/// ascending index order, which gives the tie rule.
fn scan_sorted<K: Copy + PartialEq>(
    column: impl Iterator<Item = (K, u8, usize)>,
    f: usize,
    total: [usize; 2],
    parent: &Purity,
    best: &mut Option<Candidate>,
    threshold: impl Fn(K, K) -> f64,
) {
    let mut left = [0usize; 2];
    let mut prev: Option<(K, u8, usize)> = None;
    for (hi, label, weight) in column {
        if let Some((lo, prev_label, prev_weight)) = prev {
            left[prev_label as usize] += prev_weight;
            if lo != hi {
                let right = [total[0] - left[0], total[1] - left[1]];
                let score = Purity::split(left, right);
                let bar = best.as_ref().map_or(parent, |b| &b.score);
                if score.greater_than(bar) {
                    *best = Some(Candidate {
                        score,
                        feature_index: f,
                        threshold: threshold(lo, hi),
                    });
                }
            }
        }
        prev = Some((hi, label, weight));
    }
}

/// Tree growth over a fixed sample. Each distinct sampled row is one entry
/// weighted by its multiplicity. Every feature keeps the entries sorted by
/// value; a node owns the same range `[start, end)` in each ordering, and
/// splitting stably partitions that range, so no node ever re-sorts.
struct Grower<'a> {
    params: &'a ForestParams,
    sorted: &'a SortedRows,
    subset_size: usize,
    order: Vec<Vec<Entry>>,
    /// Indexed by dataset row id.
    goes_left: Vec<bool>,
    scratch: Vec<Entry>,
}

/// A sampled row: the rank of its value within the feature, its row id
/// with the label in the low bit, and its multiplicity in the sample.
#[derive(Debug, Clone, Copy)]
struct Entry {
    rank: u32,
    tagged: u32,
    weight: u32,
}

impl Entry {
    fn row(self) -> usize {
        (self.tagged >> 1) as usize
    }

    fn label(self) -> u8 {
        (self.tagged & 1) as u8
    }
}

/// Per-feature orderings of a dataset, shared by every tree: row ids
/// sorted by value, each row's value rank, and the distinct values by rank.
/// Values comparing equal share a rank.
struct SortedRows {
    by_value: Vec<Vec<u32>>,
    rank: Vec<Vec<u32>>,
    distinct: Vec<Vec<f64>>,
}

impl SortedRows {
    fn new(data: &Dataset) -> Self {
        let per_feature: Vec<(Vec<u32>, Vec<u32>, Vec<f64>)> = (0..data.n_features())
            .into_par_iter()
            .map(|f| {
                let value = |r: u32| data.value(r as usize, f);
                let mut order: Vec<u32> = (0..data.n_rows() as u32).collect();
                order.sort_unstable_by(|&a, &b| value(a).total_cmp(&value(b)));
                let mut rank = vec![0u32; data.n_rows()];
                let mut distinct: Vec<f64> = Vec::new();
                for &r in &order {
                    let v = value(r);
                    if distinct.last() != Some(&v) {
                        distinct.push(v);
                    }
                    rank[r as usize] = (distinct.len() - 1) as u32;
                }
                (order, rank, distinct)
            })
            .collect();
        let mut s = Self {
            by_value: Vec::new(),
            rank: Vec::new(),
            distinct: Vec::new(),
        };
        for (o, r, d) in per_feature {
            s.by_value.push(o);
            s.rank.push(r);
            s.distinct.push(d);
        }
        s
    }
}

impl<'a> Grower<'a> {
    fn new(rows: Rows<'_>, sorted: &'a SortedRows, params: &'a ForestParams) -> Self {
        let p = rows.data.n_features();
        let mut multiplicity = vec![0u32; rows.data.n_rows()];
        for &i in rows.indices {
            multiplicity[i] += 1;
        }
        let distinct = multiplicity.iter().filter(|&&m| m > 0).count();
        let order = (0..p)
            .map(|f| {
                let mut o = Vec::with_capacity(distinct);
                for &r in &sorted.by_value[f] {
                    let weight = multiplicity[r as usize];
                    if weight > 0 {
                        o.push(Entry {
                            rank: sorted.rank[f][r as usize],
                            tagged: r << 1 | u32::from(rows.data.label(r as usize)),
                            weight,
                        });
                    }
                }
                o
            })
            .collect();
        Self {
            params,
            sorted,
            subset_size: params.max_features.resolve(p).min(p),
            order,
            goes_left: vec![false; rows.data.n_rows()],
            scratch: vec![
                Entry {
                    rank: 0,
                    tagged: 0,
                    weight: 0
                };
                distinct
            ],
        }
    }

    fn grow(&mut self, start: usize, end: usize, depth: usize, rng: RandomSource) -> TreeNode {
        let mut counts = [0usize; 2];
        for e in &self.order[0][start..end] {
            counts[e.label() as usize] += e.weight as usize;
        }
        let n = counts[0] + counts[1];
        let leaf = TreeNode::Leaf {
            class_counts: counts,
        };
        if counts[0] == 0
            || counts[1] == 0
            || self.params.max_depth.reached(depth)
            || n < self.params.min_samples_split
        {
            return leaf;
        }

        let p = self.order.len();
        let subset: Vec<usize> = if self.subset_size >= p {
            (0..p).collect()
        } else {
            let mut stream = rng.stream();
            let mut s = index::sample(&mut stream, p, self.subset_size).into_vec();
            s.sort_unstable();
            s
        };

        let parent = Purity::node(counts);
        let mut best = None;
        for &f in &subset {
            let distinct = &self.sorted.distinct[f];
            let pairs = self.order[f][start..end]
                .iter()
                .map(|e| (e.rank, e.label(), e.weight as usize));
            scan_sorted(pairs, f, counts, &parent, &mut best, |lo, hi| {
                midpoint(distinct[lo as usize], distinct[hi as usize])
            });
        }
        let Some(split) = best.map(|b| b.into_split(n)) else {
            return leaf;
        };

        let distinct = &self.sorted.distinct[split.feature_index];
        let mut n_left = 0;
        for e in &self.order[split.feature_index][start..end] {
            let left = distinct[e.rank as usize] <= split.threshold;
            self.goes_left[e.row()] = left;
            n_left += usize::from(left);
        }
        for f in 0..p {
            if f == split.feature_index {
                continue;
            }
            let range = &mut self.order[f][start..end];
            let scratch = &mut self.scratch[..range.len()];
            // Branch-free stable partition: write to both sides, advance one.
            let (mut w, mut k) = (0, 0);
            for r in 0..range.len() {
                let e = range[r];
                let left = usize::from(self.goes_left[e.row()]);
                range[w] = e;
                scratch[k] = e;
                w += left;
                k += 1 - left;
            }
            range[w..].copy_from_slice(&scratch[..k]);
        }

        let mid = start + n_left;
        let left = self.grow(start, mid, depth + 1, rng.child("L"));
        let right = self.grow(mid, end, depth + 1, rng.child("R"));
        TreeNode::Split {
            feature_index: split.feature_index,
            threshold: split.threshold,
            left: Box::new(left),
            right: Box::new(right),
        }
    }
}

/// Grows one tree on `rows`. Stops at pure nodes, at `max_depth`, below
/// `min_samples_split`, or when no split helps; otherwise draws a fresh
/// feature subset per node from the stream labelled by the node path.
pub fn grow_tree(rows: Rows<'_>, params: &ForestParams, rng: &RandomSource) -> Result<TreeNode> {
    if rows.is_empty() {
        return Err(Error::InsufficientData("cannot grow a tree on zero rows".into()));
    }
    let p = rows.data.n_features();
    params.validate(p)?;
    if rows.len().max(rows.data.n_rows()) > (u32::MAX >> 1) as usize {
        return Err(Error::InvalidParam("too many rows for one tree".into()));
    }
    Ok(grow_presorted(rows, &SortedRows::new(rows.data), params, rng))
}

fn grow_presorted(
    rows: Rows<'_>,
    sorted: &SortedRows,
    params: &ForestParams,
    rng: &RandomSource,
) -> TreeNode {
    let mut grower = Grower::new(rows, sorted, params);
    let n = grower.order[0].len();
    grower.grow(0, n, 0, rng.child("node"))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForestModel {
    pub trees: Vec<TreeNode>,
    pub params: ForestParams,
    pub feature_names: Vec<String>,
    pub train_seed: u64,
    /// Label of the stream the trees were drawn from.
    pub train_stream: String,
}

pub fn fit_forest(train: &Dataset, params: &ForestParams, rng: &RandomSource) -> Result<ForestModel> {
    params.validate(train.n_features())?;
    let n = train.n_rows();
    if n < 2 {
        return Err(Error::InsufficientData(format!(
            "training needs at least 2 rows, got {n}"
        )));
    }
    let counts = train.class_counts();
    if counts[0] == 0 || counts[1] == 0 {
        return Err(Error::InsufficientData(
            "training set contains a single class".into(),
        ));
    }

    if n > (u32::MAX >> 1) as usize {
        return Err(Error::InvalidParam("too many rows for one tree".into()));
    }
    let sorted = SortedRows::new(train);
    let trees = (0..params.n_trees)
        .into_par_iter()
        .map(|t| {
            let tree_rng = rng.child(format!("tree/{t}"));
            let indices: Vec<usize> = if params.bootstrap {
                let mut stream = tree_rng.child("bootstrap").stream();
                (0..n).map(|_| stream.random_range(0..n)).collect()
            } else {
                (0..n).collect()
            };
            grow_presorted(Rows::new(train, &indices), &sorted, params, &tree_rng.child("grow"))
        })
        .collect();

    Ok(ForestModel {
        trees,
        params: params.clone(),
        feature_names: train.feature_names().to_vec(),
        train_seed: rng.seed(),
        train_stream: rng.label().to_string(),
    })
}

impl ForestModel {
    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    /// Errors naming the first column where `ds` disagrees with the model.
    pub fn check_features(&self, ds: &Dataset) -> Result<()> {
        let theirs = ds.feature_names();
        let len = self.feature_names.len().max(theirs.len());
        for i in 0..len {
            let expected = self.feature_names.get(i);
            let found = theirs.get(i);
            if expected != found {
                return Err(Error::FeatureMismatch {
                    index: i,
                    expected: expected.cloned().unwrap_or_else(|| "<none>".into()),
                    found: found.cloned().unwrap_or_else(|| "<none>".into()),
                });
            }
        }
        Ok(())
    }

    /// Fraud votes over tree count for every row of `ds`.
    pub fn predict_scores(&self, ds: &Dataset) -> Result<Vec<f64>> {
        self.check_features(ds)?;
        Ok((0..ds.n_rows())
            .into_par_iter()
            .map(|i| self.score_unchecked(ds.row(i)))
            .collect())
    }

    fn votes(&self, row: &[f64]) -> usize {
        self.trees.iter().map(|t| t.vote(row) as usize).sum()
    }

    fn score_unchecked(&self, row: &[f64]) -> f64 {
        self.votes(row) as f64 / self.trees.len() as f64
    }
}

/// Fraction of trees whose leaf majority is fraud.
pub fn predict_score(model: &ForestModel, row: &[f64]) -> Result<f64> {
    if row.len() != model.n_features() {
        return Err(Error::InvalidParam(format!(
            "row has {} features, model expects {}",
            row.len(),
            model.n_features()
        )));
    }
    Ok(model.score_unchecked(row))
}

/// 1 iff the score is strictly above `threshold`.
pub fn predict_label(model: &ForestModel, row: &[f64], threshold: f64) -> Result<u8> {
    Ok(u8::from(predict_score(model, row)? > threshold))
}

pub const MODEL_FORMAT: &str = "imbalforest-forest";
pub const MODEL_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum NodeRecord {
    Leaf([usize; 2]),
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TreeRecord {
    nodes: Vec<NodeRecord>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    format: String,
    version: u32,
    feature_names: Vec<String>,
    params: ForestParams,
    train_seed: u64,
    train_stream: String,
    trees: Vec<TreeRecord>,
}

fn flatten(node: &TreeNode, out: &mut Vec<NodeRecord>) -> usize {
    let id = out.len();
    match node {
        TreeNode::Leaf { class_counts } => out.push(NodeRecord::Leaf(*class_counts)),
        TreeNode::Split {
            feature_index,
            threshold,
            left,
            right,
        } => {
            out.push(NodeRecord::Leaf([0, 0]));
            let l = flatten(left, out);
            let r = flatten(right, out);
            out[id] = NodeRecord::Split {
                feature: *feature_index,
                threshold: *threshold,
                left: l,
                right: r,
            };
        }
    }
    id
}

fn rebuild(nodes: &[NodeRecord], n_features: usize) -> std::result::Result<TreeNode, String> {
    if nodes.is_empty() {
        return Err("tree has no nodes".into());
    }
    let mut built: Vec<Option<TreeNode>> = (0..nodes.len()).map(|_| None).collect();
    // Children always follow their parent in preorder, so build back to front.
    for id in (0..nodes.len()).rev() {
        let node = match &nodes[id] {
            NodeRecord::Leaf(c) => {
                if c[0] + c[1] == 0 {
                    return Err(format!("node {id}: empty leaf"));
                }
                TreeNode::Leaf { class_counts: *c }
            }
            NodeRecord::Split {
                feature,
                threshold,
                left,
                right,
            } => {
                if *feature >= n_features {
                    return Err(format!("node {id}: feature {feature} out of range"));
                }
                if !threshold.is_finite() {
                    return Err(format!("node {id}: non-finite threshold"));
                }
                let mut take = |c: usize| {
                    if c <= id || c >= nodes.len() {
                        return Err(format!("node {id}: bad child {c}"));
                    }
                    built[c].take().ok_or(format!("node {id}: child {c} reused"))
                };
                let l = take(*left)?;
                let r = take(*right)?;
                TreeNode::Split {
                    feature_index: *feature,
                    threshold: *threshold,
                    left: Box::new(l),
                    right: Box::new(r),
                }
            }
        };
        built[id] = Some(node);
    }
    if built[1..].iter().any(Option::is_some) {
        return Err("unreachable nodes".into());
    }
    Ok(built[0].take().expect("root built"))
}

/// Writes the model as pretty-printed JSON with trees stored as flat
/// preorder node lists.
pub fn save_model(model: &ForestModel, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, model_to_string(model)?).map_err(|e| Error::io(path, e))
}

pub fn model_to_string(model: &ForestModel) -> Result<String> {
    let file = ModelFile {
        format: MODEL_FORMAT.into(),
        version: MODEL_VERSION,
        feature_names: model.feature_names.clone(),
        params: model.params.clone(),
        train_seed: model.train_seed,
        train_stream: model.train_stream.clone(),
        trees: model
            .trees
            .iter()
            .map(|t| {
                let mut nodes = Vec::with_capacity(t.node_count());
                flatten(t, &mut nodes);
                TreeRecord { nodes }
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&file)?;
    s.push('\n');
    Ok(s)
}

pub fn load_model(path: impl AsRef<Path>) -> Result<ForestModel> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    model_from_str(&text).map_err(|e| match e {
        Error::Corrupt { reason, .. } => Error::Corrupt {
            path: path.into(),
            reason,
        },
        other => other,
    })
}

pub fn model_from_str(text: &str) -> Result<ForestModel> {
    let corrupt = |reason: String| Error::Corrupt {
        path: "<memory>".into(),
        reason,
    };
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| corrupt(e.to_string()))?;
    if value.get("format").and_then(|f| f.as_str()) != Some(MODEL_FORMAT) {
        return Err(corrupt(format!("not an `{MODEL_FORMAT}` file")));
    }
    let version = value
        .get("version")
        .and_then(|v| v.as_u64())
        .ok_or_else(|| corrupt("missing version".into()))?;
    if version != MODEL_VERSION as u64 {
        return Err(Error::Version {
            found: version.min(u32::MAX as u64) as u32,
            expected: MODEL_VERSION,
        });
    }
    let file: ModelFile = serde_json::from_value(value).map_err(|e| corrupt(e.to_string()))?;
    let p = file.feature_names.len();
    file.params.validate(p).map_err(|e| corrupt(e.to_string()))?;
    let trees = file
        .trees
        .iter()
        .enumerate()
        .map(|(t, rec)| rebuild(&rec.nodes, p).map_err(|e| corrupt(format!("tree {t}: {e}"))))
        .collect::<Result<Vec<_>>>()?;
    if trees.len() != file.params.n_trees {
        return Err(corrupt(format!(
            "{} trees stored, params say {}",
            trees.len(),
            file.params.n_trees
        )));
    }
    debug_assert!(trees.iter().all(|t| t.max_feature_index().map_or(true, |f| f < p)));
    Ok(ForestModel {
        trees,
        params: file.params,
        feature_names: file.feature_names,
        train_seed: file.train_seed,
        train_stream: file.train_stream,
    })
}
