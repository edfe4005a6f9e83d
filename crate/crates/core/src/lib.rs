//! Imbalanced binary classification for card-fraud style data.
//!
//! The crate covers the whole path from a raw transaction export to an
//! evaluated model:
//!
//! - [`dataio`]: raw CSV ingest, the processed dataset format, and a seeded
//!   synthetic generator.
//! - [`preprocess`]: Pearson correlation, column dropping, label encoding,
//!   duplicate removal, stratified splitting.
//! - [`resample`]: SMOTE over the k nearest minority neighbours.
//! - [`forest`]: Gini CART trees bagged into a random forest, with a
//!   versioned model file.
//! - [`tune`]: stratified k-fold grid search selecting on fraud-class F1.
//! - [`eval`]: confusion matrix, precision/recall/F1, ROC and AUC.
//! - [`pipeline`]: the `synth` / `prepare` / `run` / `evaluate` stages used by
//!   the `imbalforest` binary, plus SVG charts from [`svg`].
//!
//! All randomness flows through [`rng::RandomSource`], so results depend
//! only on the seed and never on the number of worker threads.
//!
//! See `examples/` for one runnable program per capability.

pub mod dataio;
pub mod error;
pub mod eval;
pub mod forest;
pub mod pipeline;
pub mod preprocess;
pub mod resample;
pub mod rng;
pub mod svg;
pub mod tune;

pub use dataio::{Dataset, RawDataset, RawSchema, SynthSpec};
pub use error::{Error, Result};
pub use eval::{ClassReport, ConfusionMatrix, RocCurve};
pub use forest::{ForestModel, ForestParams, MaxDepth, MaxFeatures, TreeNode};
pub use resample::{ResampleReport, SmoteConfig};
pub use rng::RandomSource;
pub use tune::{ParamGrid, TuningResult};
