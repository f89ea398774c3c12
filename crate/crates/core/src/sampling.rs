//! Seeded random generators for series and test inputs.

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::qalgebra::QSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesShape {
    /// Monomials `xⁱyᵏ` with `0 ≤ i, k ≤ max_exponent`.
    Any,
    /// Only mixed monomials, `1 ≤ i, k ≤ max_exponent`.
    Mixed,
}

pub fn random_complex<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> Complex64 {
    Complex64::new(rng.gen_range(-scale..=scale), rng.gen_range(-scale..=scale))
}

/// A series with `support` distinct monomials (fewer if the shape has fewer
/// slots) and coefficients uniform in the unit square. `max_exponent` is
/// clamped to `degree`.
pub fn random_qseries<R: Rng + ?Sized>(
    rng: &mut R,
    q: Complex64,
    degree: usize,
    support: usize,
    max_exponent: usize,
    shape: SeriesShape,
) -> QSeries {
    let top = max_exponent.min(degree);
    let low = match shape {
        SeriesShape::Any => 0,
        SeriesShape::Mixed => 1,
    };
    let mut slots: Vec<(usize, usize)> = (low..=top).flat_map(|i| (low..=top).map(move |k| (i, k))).collect();
    slots.shuffle(rng);
    slots.truncate(support);
    slots.sort_unstable();
    let terms: Vec<_> = slots
        .into_iter()
        .map(|(i, k)| {
            let mut c = random_complex(rng, 1.0);
            if c == Complex64::new(0.0, 0.0) {
                c = Complex64::new(1.0, 0.0);
            }
            (i, k, c)
        })
        .collect();
    QSeries::from_terms(q, degree, terms).expect("generated terms fit the table")
}
