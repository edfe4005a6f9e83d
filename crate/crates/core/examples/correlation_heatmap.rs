//! Pearson correlations over a feature subset, rendered as an SVG heatmap.

use imbalforest::dataio::generate_synthetic;
use imbalforest::preprocess::pearson_corr;
use imbalforest::svg::heatmap_svg;
use imbalforest::{RandomSource, SynthSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = SynthSpec {
        n_rows: 2000,
        n_features: 6,
        ..SynthSpec::default()
    };
    let ds = generate_synthetic(&spec, &RandomSource::root(3))?;
    let corr = pearson_corr(&ds, ds.feature_names())?;
    print!("{}", corr.to_csv());
    // The last two columns are a near-copy pair.
    println!("x5~x6: {:.4}", corr.get("x5", "x6").unwrap());

    let path = std::env::temp_dir().join("imbalforest_heatmap.svg");
    std::fs::write(&path, heatmap_svg(&corr, "Feature correlation"))?;
    println!("wrote {}", path.display());
    Ok(())
}
