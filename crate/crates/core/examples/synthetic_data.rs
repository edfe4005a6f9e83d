//! Generate a seeded imbalanced dataset and write it as processed CSV.
//!
//! `cargo run --example synthetic_data -- [rows] [seed]`

use imbalforest::dataio::{generate_synthetic, load_dataset, save_dataset};
use imbalforest::{RandomSource, SynthSpec};

fn main() -> imbalforest::Result<()> {
    let mut args = std::env::args().skip(1);
    let n_rows = args.next().and_then(|a| a.parse().ok()).unwrap_or(5000);
    let seed = args.next().and_then(|a| a.parse().ok()).unwrap_or(1);
    let spec = SynthSpec {
        n_rows,
        ..SynthSpec::default()
    };
    let ds = generate_synthetic(&spec, &RandomSource::root(seed))?;
    let [legit, fraud] = ds.class_counts();
    println!("{} rows x {} features: {legit} legit, {fraud} fraud", ds.n_rows(), ds.n_features());

    let path = std::env::temp_dir().join("imbalforest_synthetic.csv");
    save_dataset(&ds, &path)?;
    assert_eq!(load_dataset(&path)?, ds);
    println!("wrote {} (round-trips exactly)", path.display());
    Ok(())
}
