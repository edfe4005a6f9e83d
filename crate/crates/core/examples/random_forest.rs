//! Fit a forest, score held-out rows and save the model.

use imbalforest::dataio::generate_synthetic;
use imbalforest::eval::{class_report, confusion};
use imbalforest::forest::{fit_forest, load_model, save_model};
use imbalforest::preprocess::stratified_split;
use imbalforest::{ForestParams, MaxDepth, RandomSource, SynthSpec};

fn main() -> imbalforest::Result<()> {
    let root = RandomSource::root(11);
    let ds = generate_synthetic(&SynthSpec::default(), &root.child("synth"))?;
    let split = stratified_split(&ds, 0.3, &root.child("split"))?;

    let params = ForestParams {
        n_trees: 50,
        max_depth: MaxDepth::Limited(12),
        ..ForestParams::default()
    };
    let model = fit_forest(&split.train, &params, &root.child("fit"))?;
    let depths: Vec<usize> = model.trees.iter().map(|t| t.depth()).collect();
    println!("{} trees, depth {}..{}", model.trees.len(), depths.iter().min().unwrap(), depths.iter().max().unwrap());

    let scores = model.predict_scores(&split.test)?;
    let predicted: Vec<u8> = scores.iter().map(|&s| u8::from(s > 0.5)).collect();
    let cm = confusion(split.test.labels(), &predicted)?;
    let report = class_report(&cm);
    println!("{cm:?}");
    println!("accuracy {:.4}, fraud f1 {:?}", report.accuracy, report.classes[1].f1);

    let path = std::env::temp_dir().join("imbalforest_example.forest");
    save_model(&model, &path)?;
    assert_eq!(load_model(&path)?, model);
    println!("saved {}", path.display());
    Ok(())
}
