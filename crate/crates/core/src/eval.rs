//! Confusion matrix, per-class precision/recall/F1, ROC curve and AUC.
//!
//! Class 1 (fraud) is the positive class. Scores are thresholded with a
//! strict `>`, the same rule as [`crate::forest::predict_label`].

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: u64,
    pub tn: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
}

impl ConfusionMatrix {
    pub fn new(tp: u64, tn: u64, fp: u64, fn_: u64) -> Result<Self> {
        if tp + tn + fp + fn_ == 0 {
            return Err(Error::InsufficientData("confusion matrix is empty".into()));
        }
        Ok(Self { tp, tn, fp, fn_ })
    }

    pub fn total(&self) -> u64 {
        self.tp + self.tn + self.fp + self.fn_
    }
}

fn check_binary(v: &[u8], what: &str) -> Result<()> {
    match v.iter().position(|&x| x > 1) {
        Some(i) => Err(Error::InvalidLabel {
            row: i,
            value: format!("{} in {what}", v[i]),
        }),
        None => Ok(()),
    }
}

pub fn confusion(y_true: &[u8], y_pred: &[u8]) -> Result<ConfusionMatrix> {
    if y_true.len() != y_pred.len() {
        return Err(Error::InvalidParam(format!(
            "length mismatch: {} labels, {} predictions",
            y_true.len(),
            y_pred.len()
        )));
    }
    if y_true.is_empty() {
        return Err(Error::InsufficientData("no labels to compare".into()));
    }
    check_binary(y_true, "y_true")?;
    check_binary(y_pred, "y_pred")?;
    let mut cm = ConfusionMatrix {
        tp: 0,
        tn: 0,
        fp: 0,
        fn_: 0,
    };
    for (&t, &p) in y_true.iter().zip(y_pred) {
        match (t, p) {
            (1, 1) => cm.tp += 1,
            (0, 0) => cm.tn += 1,
            (0, 1) => cm.fp += 1,
            _ => cm.fn_ += 1,
        }
    }
    Ok(cm)
}

/// Precision, recall and F1 for one class. `None` marks a 0/0 ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub f1: Option<f64>,
    pub support: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassReport {
    /// Indexed by class: `[legitimate, fraud]`.
    pub classes: [ClassMetrics; 2],
    pub accuracy: f64,
    /// Cells that were 0/0, e.g. `"class1.precision"`.
    pub undefined: Vec<String>,
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

/// Metrics for a class from its own (true pos, false pos, false neg).
fn class_metrics(tp: u64, fp: u64, fn_: u64) -> ClassMetrics {
    let precision = ratio(tp, tp + fp);
    let recall = ratio(tp, tp + fn_);
    let f1 = match (precision, recall) {
        (Some(p), Some(r)) if p + r > 0.0 => Some(2.0 * p * r / (p + r)),
        // Harmonic mean of 0 and 0, or one side undefined: fall back to
        // 2tp / (2tp + fp + fn), which is only 0/0 when the class never occurs.
        _ => ratio(2 * tp, 2 * tp + fp + fn_),
    };
    ClassMetrics {
        precision,
        recall,
        f1,
        support: tp + fn_,
    }
}

pub fn class_report(cm: &ConfusionMatrix) -> ClassReport {
    let fraud = class_metrics(cm.tp, cm.fp, cm.fn_);
    let legit = class_metrics(cm.tn, cm.fn_, cm.fp);
    let mut undefined = Vec::new();
    for (c, m) in [legit, fraud].iter().enumerate() {
        for (name, v) in [("precision", m.precision), ("recall", m.recall), ("f1", m.f1)] {
            if v.is_none() {
                undefined.push(format!("class{c}.{name}"));
            }
        }
    }
    ClassReport {
        classes: [legit, fraud],
        accuracy: (cm.tp + cm.tn) as f64 / cm.total() as f64,
        undefined,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocPoint {
    pub threshold: f64,
    pub fpr: f64,
    pub tpr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocCurve {
    pub points: Vec<RocPoint>,
    pub auc: f64,
}

impl RocCurve {
    /// `threshold,fpr,tpr` rows with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("threshold,fpr,tpr\n");
        for p in &self.points {
            let _ = writeln!(out, "{},{},{}", p.threshold, p.fpr, p.tpr);
        }
        out
    }

    pub fn coordinates(&self) -> Vec<(f64, f64)> {
        self.points.iter().map(|p| (p.fpr, p.tpr)).collect()
    }
}

/// ROC curve with one point per distinct score threshold. A row is
/// predicted positive when its score is strictly greater than the
/// threshold. The curve starts at (0, 0) with a threshold above every score
/// and ends at (1, 1) with one below every score.
pub fn roc_curve(y_true: &[u8], scores: &[f64]) -> Result<RocCurve> {
    if y_true.len() != scores.len() {
        return Err(Error::InvalidParam(format!(
            "length mismatch: {} labels, {} scores",
            y_true.len(),
            scores.len()
        )));
    }
    check_binary(y_true, "y_true")?;
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(Error::InvalidParam("scores must be finite".into()));
    }
    let pos = y_true.iter().filter(|&&y| y == 1).count();
    let neg = y_true.len() - pos;
    if pos == 0 || neg == 0 {
        return Err(Error::InsufficientData(
            "roc curve needs both classes in y_true".into(),
        ));
    }

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_unstable_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    let max = scores[order[0]];
    let min = scores[order[order.len() - 1]];
    let above = if max + 1.0 > max { max + 1.0 } else { f64::MAX };
    let below = if min - 1.0 < min { min - 1.0 } else { f64::MIN };

    let (pos_f, neg_f) = (pos as f64, neg as f64);
    let mut points = vec![RocPoint {
        threshold: above,
        fpr: 0.0,
        tpr: 0.0,
    }];
    let push = |points: &mut Vec<RocPoint>, threshold: f64, fp: usize, tp: usize| {
        let (fpr, tpr) = (fp as f64 / neg_f, tp as f64 / pos_f);
        let last = points.last().expect("starts non-empty");
        if last.fpr != fpr || last.tpr != tpr {
            points.push(RocPoint { threshold, fpr, tpr });
        }
    };

    // Walking scores in descending order: at threshold s_k the positives are
    // exactly the rows seen before the group with score s_k.
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut i = 0;
    while i < order.len() {
        let s = scores[order[i]];
        push(&mut points, s, fp, tp);
        while i < order.len() && scores[order[i]] == s {
            if y_true[order[i]] == 1 {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
    }
    push(&mut points, below, fp, tp);

    let mut curve = RocCurve { points, auc: 0.0 };
    curve.auc = auc(&curve);
    Ok(curve)
}

/// Trapezoidal area under the curve's (fpr, tpr) points.
pub fn auc(curve: &RocCurve) -> f64 {
    curve
        .points
        .windows(2)
        .map(|w| (w[1].fpr - w[0].fpr) * (w[1].tpr + w[0].tpr) / 2.0)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn confusion_examples() {
        let y = [1, 0, 1, 1, 0, 0];
        let cm = confusion(&y, &y).unwrap();
        assert_eq!((cm.fp, cm.fn_), (0, 0));
        let inv: Vec<u8> = y.iter().map(|v| 1 - v).collect();
        let cm = confusion(&y, &inv).unwrap();
        assert_eq!((cm.tp, cm.tn), (0, 0));
        let cm = confusion(&[1, 1, 0, 0, 1], &[1, 0, 0, 1, 1]).unwrap();
        assert_eq!(cm, ConfusionMatrix { tp: 2, tn: 1, fp: 1, fn_: 1 });
        assert_eq!(cm.total(), 5);
    }

    #[test]
    fn confusion_errors() {
        assert!(confusion(&[1, 0], &[1]).is_err());
        assert!(confusion(&[], &[]).is_err());
        assert!(confusion(&[2], &[1]).is_err());
        assert!(ConfusionMatrix::new(0, 0, 0, 0).is_err());
    }

    #[test]
    fn reference_confusion_matrix() {
        let cm = ConfusionMatrix::new(83736, 87242, 3826, 320).unwrap();
        let r = class_report(&cm);
        let close = |a: Option<f64>, b: f64| (a.unwrap() - b).abs() <= 5e-4;
        assert!((r.accuracy - 0.9763).abs() <= 5e-4);
        assert!(close(r.classes[1].precision, 0.9563));
        assert!(close(r.classes[1].recall, 0.9962));
        assert!(close(r.classes[1].f1, 0.9759));
        assert!(close(r.classes[0].precision, 0.9963));
        assert!(close(r.classes[0].recall, 0.9580));
        assert!(close(r.classes[0].f1, 0.9768));
        assert!(r.undefined.is_empty());
    }

    #[test]
    fn perfect_and_undefined_reports() {
        let r = class_report(&ConfusionMatrix::new(5, 7, 0, 0).unwrap());
        for c in &r.classes {
            assert_eq!((c.precision, c.recall, c.f1), (Some(1.0), Some(1.0), Some(1.0)));
        }
        assert_eq!(r.accuracy, 1.0);

        let r = class_report(&ConfusionMatrix::new(0, 10, 0, 3).unwrap());
        assert_eq!(r.classes[1].precision, None);
        assert_eq!(r.classes[1].recall, Some(0.0));
        assert!(r.undefined.contains(&"class1.precision".to_string()));
    }

    #[test]
    fn roc_hand_example() {
        let c = roc_curve(&[1, 0, 1, 0], &[0.9, 0.8, 0.7, 0.1]).unwrap();
        assert_eq!(
            c.coordinates(),
            vec![(0.0, 0.0), (0.0, 0.5), (0.5, 0.5), (0.5, 1.0), (1.0, 1.0)]
        );
        assert_eq!(c.auc, 0.75);
    }

    #[test]
    fn roc_perfect_and_flat() {
        let c = roc_curve(&[1, 1, 0, 0], &[0.9, 0.8, 0.3, 0.1]).unwrap();
        assert!(c.coordinates().contains(&(0.0, 1.0)));
        assert_eq!(auc(&c), 1.0);

        let c = roc_curve(&[1, 0, 1, 0], &[0.5; 4]).unwrap();
        assert_eq!(c.coordinates(), vec![(0.0, 0.0), (1.0, 1.0)]);
        assert_eq!(c.auc, 0.5);
    }

    #[test]
    fn roc_thresholds_reproduce_points() {
        let y = [1, 0, 0, 1, 1, 0, 1];
        let s = [0.2, 0.4, 0.4, 0.9, 0.4, 0.0, 1.0];
        let c = roc_curve(&y, &s).unwrap();
        for p in &c.points {
            let pred: Vec<u8> = s.iter().map(|&v| u8::from(v > p.threshold)).collect();
            let cm = confusion(&y, &pred).unwrap();
            assert_eq!(p.tpr, cm.tp as f64 / 4.0);
            assert_eq!(p.fpr, cm.fp as f64 / 3.0);
        }
    }

    #[test]
    fn roc_errors() {
        assert!(roc_curve(&[1, 1], &[0.1, 0.2]).is_err());
        assert!(roc_curve(&[1, 0], &[0.1]).is_err());
        assert!(roc_curve(&[1, 0], &[0.1, f64::NAN]).is_err());
    }

    #[test]
    fn roc_csv() {
        let c = roc_curve(&[1, 0], &[0.75, 0.25]).unwrap();
        assert_eq!(c.to_csv(), "threshold,fpr,tpr\n1.75,0,0\n0.25,0,1\n-0.75,1,1\n");
    }
}
