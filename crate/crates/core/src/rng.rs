//! Seeded, labeled random streams.
//!
//! A [`RandomSource`] is a `(seed, label)` pair. Its stream is a ChaCha12
//! generator keyed by `SHA-256("imbalforest-rng-v1" || seed_le || label)`.
//! Child sources append `/<name>` to the label, so every stream in a run is
//! addressed by a path such as `run/split` or `fit/tree/17/grow/LR`.
//!
//! The algorithm is fixed: changing it changes every report, so bump the
//! domain tag if it ever has to change.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

const DOMAIN_TAG: &[u8] = b"imbalforest-rng-v1";

/// Generator type returned by [`RandomSource::stream`].
pub type Stream = ChaCha12Rng;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RandomSource {
    seed: u64,
    label: String,
}

impl RandomSource {
    pub fn new(seed: u64, label: impl Into<String>) -> Self {
        Self {
            seed,
            label: label.into(),
        }
    }

    /// Root source for a master seed.
    pub fn root(seed: u64) -> Self {
        Self::new(seed, "root")
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn child(&self, name: impl AsRef<str>) -> Self {
        Self {
            seed: self.seed,
            label: format!("{}/{}", self.label, name.as_ref()),
        }
    }

    /// A fresh generator positioned at the start of this source's stream.
    pub fn stream(&self) -> Stream {
        let mut hasher = Sha256::new();
        hasher.update(DOMAIN_TAG);
        hasher.update(self.seed.to_le_bytes());
        hasher.update(self.label.as_bytes());
        let key: [u8; 32] = hasher.finalize().into();
        ChaCha12Rng::from_seed(key)
    }
}
