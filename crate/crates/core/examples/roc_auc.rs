//! ROC curve and trapezoid AUC for a handful of scores, plus the SVG plot.

use imbalforest::eval::{auc, roc_curve};
use imbalforest::svg::roc_svg;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let labels = [0, 0, 1, 0, 1, 1, 0, 1, 0, 1];
    let scores = [0.1, 0.3, 0.35, 0.4, 0.6, 0.6, 0.65, 0.8, 0.2, 0.9];
    let curve = roc_curve(&labels, &scores)?;
    print!("{}", curve.to_csv());
    println!("auc {:.4}", auc(&curve));

    let path = std::env::temp_dir().join("imbalforest_roc.svg");
    std::fs::write(&path, roc_svg(&curve, "Example ROC"))?;
    println!("wrote {}", path.display());
    Ok(())
}
