//! Stratified k-fold grid search with SMOTE applied inside each fold.

use imbalforest::dataio::generate_synthetic;
use imbalforest::tune::grid_search;
use imbalforest::{MaxDepth, MaxFeatures, ParamGrid, RandomSource, SmoteConfig, SynthSpec};

fn main() -> imbalforest::Result<()> {
    let spec = SynthSpec {
        n_rows: 3000,
        fraud_rate: 0.05,
        class_separation: 1.5,
        ..SynthSpec::default()
    };
    let ds = generate_synthetic(&spec, &RandomSource::root(5))?;
    let grid = ParamGrid {
        n_trees: vec![10, 30],
        max_depth: vec![MaxDepth::Limited(4), MaxDepth::Unlimited],
        min_samples_split: vec![2],
        max_features: vec![MaxFeatures::Sqrt, MaxFeatures::All],
    };
    let result = grid_search(&ds, &grid, 5, &SmoteConfig::default(), &RandomSource::root(6))?;
    for row in &result.table {
        let p = &row.params;
        println!(
            "trees {:>3}  depth {:<14} features {:<6} mean f1 {:.4}",
            p.n_trees,
            format!("{:?}", p.max_depth),
            format!("{:?}", p.max_features),
            row.mean_f1
        );
    }
    println!("best: {:?} ({:.4})", result.best_params, result.best_score);
    Ok(())
}
