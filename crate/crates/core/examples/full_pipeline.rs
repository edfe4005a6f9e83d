//! The whole run in both modes on a small synthetic set: dedup, split,
//! SMOTE, tuning, fitting, evaluation and artifacts.
//!
//! `cargo run --release --example full_pipeline -- [out_dir]`

use std::path::PathBuf;

use imbalforest::pipeline::{cmd_run, InputSource, Mode, RunConfig, RunOptions};
use imbalforest::{MaxDepth, MaxFeatures, ParamGrid, SynthSpec};

fn main() -> imbalforest::Result<()> {
    let out: PathBuf = std::env::args()
        .nth(1)
        .map_or_else(|| std::env::temp_dir().join("imbalforest_pipeline"), PathBuf::from);
    let mut cfg = RunConfig::new(InputSource::Synth(SynthSpec {
        n_rows: 4000,
        ..SynthSpec::default()
    }));
    cfg.seed = 42;
    cfg.cv_folds = 3;
    cfg.model = imbalforest::pipeline::ModelSpec::Grid(ParamGrid {
        n_trees: vec![20, 40],
        max_depth: vec![MaxDepth::Limited(8), MaxDepth::Unlimited],
        min_samples_split: vec![2],
        max_features: vec![MaxFeatures::Sqrt],
    });

    for mode in [Mode::Safe, Mode::Paper] {
        cfg.mode = mode;
        cfg.out_dir = Some(out.join(format!("{mode:?}").to_lowercase()));
        let r = cmd_run(&cfg, RunOptions::default())?.report;
        println!(
            "{mode:?}: accuracy {:.4}, fraud f1 {:?}, auc {:.4}, leakage free {}",
            r.class_report.accuracy, r.class_report.classes[1].f1, r.auc, r.audit.leakage_free
        );
        if let Some(w) = &r.leakage_warning {
            println!("  warning: {w}");
        }
    }
    println!("outputs in {}", out.display());
    Ok(())
}
