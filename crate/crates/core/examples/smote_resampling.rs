//! Oversample the minority class with SMOTE and inspect the result.

use imbalforest::dataio::generate_synthetic;
use imbalforest::resample::smote;
use imbalforest::{RandomSource, SmoteConfig, SynthSpec};

fn main() -> imbalforest::Result<()> {
    let spec = SynthSpec {
        n_rows: 2000,
        ..SynthSpec::default()
    };
    let ds = generate_synthetic(&spec, &RandomSource::root(7))?;
    for ratio in [0.25, 0.5, 1.0] {
        let cfg = SmoteConfig {
            k: 5,
            target_ratio: ratio,
        };
        let (out, report) = smote(&ds, &cfg, &RandomSource::root(8))?;
        println!(
            "target {ratio:>4}: {:?} -> {:?}, {} synthetic rows, {} total",
            report.original_counts,
            report.final_counts,
            report.synthetic_rows_added,
            out.n_rows()
        );
    }
    Ok(())
}
