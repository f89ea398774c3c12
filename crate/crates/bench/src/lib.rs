//! Shared inputs for the criterion benches.

use qplane_core::sampling::{random_qseries, SeriesShape};
use qplane_core::{Complex64, QSeries};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const SEED: u64 = 42;

/// A reproducible pair of random series of the given truncation and support.
pub fn series_pair(q: Complex64, degree: usize, support: usize) -> (QSeries, QSeries) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut draw = || random_qseries(&mut rng, q, degree, support, degree, SeriesShape::Any);
    (draw(), draw())
}
