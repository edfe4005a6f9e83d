//! Per-class precision, recall and F1 from a fixed confusion matrix.

use imbalforest::eval::class_report;
use imbalforest::svg::confusion_svg;
use imbalforest::ConfusionMatrix;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cm = ConfusionMatrix::new(83736, 87242, 3826, 320)?;
    let report = class_report(&cm);
    println!("class  precision  recall  f1      support");
    for (c, m) in report.classes.iter().enumerate() {
        println!(
            "{c:<6} {:<10.2} {:<7.2} {:<7.2} {}",
            m.precision.unwrap(),
            m.recall.unwrap(),
            m.f1.unwrap(),
            m.support
        );
    }
    println!("accuracy {:.2}", report.accuracy);

    let path = std::env::temp_dir().join("imbalforest_confusion.svg");
    std::fs::write(&path, confusion_svg(&cm, "Confusion matrix"))?;
    println!("wrote {}", path.display());
    Ok(())
}
