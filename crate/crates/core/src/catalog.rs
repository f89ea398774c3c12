//! The two worked functions on the model pair, as series representations.

use num_complex::Complex64;

use crate::error::Result;
use crate::holo::HoloSeries;
use crate::opcalc::QFunctionRep;
use crate::qalgebra::QSeries;

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Coefficient of `(xy)ⁿ` in `ln(3/2 + xy)` after normal ordering:
/// `(−1)ⁿ⁺¹(2/3)ⁿ/n · q^{n(n−1)/2}`, since `(xy)ⁿ = q^{n(n−1)/2}xⁿyⁿ`.
fn log_xy_coeff(q: Complex64, n: usize) -> Complex64 {
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    real(sign * (2.0f64 / 3.0).powi(n as i32) / n as f64) * q.powu((n * (n - 1) / 2) as u32)
}

/// `ln(3/2 + xy)` truncated at `xⁿyⁿ`, `n ≤ degree`.
pub fn log_xy_series(q: Complex64, degree: usize) -> Result<QSeries> {
    let terms = std::iter::once((0, 0, real(1.5f64.ln()))).chain((1..=degree).map(|n| (n, n, log_xy_coeff(q, n))));
    QSeries::from_terms(q, degree, terms)
}

/// `ln(3/2 + xy)` as `Σ fₙ(x)yⁿ` with `n ≤ terms`; converges for `|xy| < 3/2`,
/// so the domain is the bidisk of radius `√(3/2)`.
pub fn log_xy(q: Complex64, terms: usize) -> Result<QFunctionRep> {
    let degree = terms.max(1);
    let mut rows = vec![HoloSeries::constant(real(1.5f64.ln()), degree)];
    rows.extend((1..=terms).map(|n| HoloSeries::monomial(n, log_xy_coeff(q, n), degree)));
    let r = 1.5f64.sqrt();
    QFunctionRep::new(q, rows, r, r)
}

/// `ln(3/2+x) + Σₙ (2/3)ⁿ(ln(3/2+1/n+x) − ln(3/2+1/n))yⁿ + y/(y−3/2)` with the
/// last term expanded as `−Σₙ (2/3)ⁿyⁿ`; rows `n ≤ terms`, each of degree
/// `degree` in `x`, on the bidisk of radius `3/2`.
pub fn log_mixture(q: Complex64, terms: usize, degree: usize) -> Result<QFunctionRep> {
    let mut rows = vec![HoloSeries::log_shifted(1.5, degree)?];
    for n in 1..=terms {
        let w = (2.0f64 / 3.0).powi(n as i32);
        let shift = 1.5 + 1.0 / n as f64;
        let centered = HoloSeries::log_shifted(shift, degree)?.add(&HoloSeries::constant(real(-shift.ln()), degree));
        rows.push(centered.add(&HoloSeries::constant(real(-1.0), degree)).scale(real(w)));
    }
    QFunctionRep::new(q, rows, 1.5, 1.5)
}

/// `f(0, w)` for [`log_mixture`] in closed form.
pub fn log_mixture_y_axis(w: Complex64) -> Complex64 {
    real(1.5f64.ln()) + w / (w - 1.5)
}
