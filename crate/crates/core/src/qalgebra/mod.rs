//! The truncated quantum plane `xy = q⁻¹yx`: bivariate series stored in
//! normal-ordered monomials `xⁱyᵏ` with `0 ≤ i, k ≤ D`.

mod index;
mod norms;
mod power;

use num_complex::Complex64;

use crate::error::{ensure_finite, Error, Result};
use crate::holo::HoloSeries;

pub use index::{normal_order, q_exponent, MultiIndex, NormalOrdered};
pub use norms::{decay_profile, p_seminorm, seminorm, DecayProfile, DecayRow};
pub use power::{qpow, qpow_with_cap, PowMethod, FORMULA_TUPLE_CAP};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A truncated series `Σ a_{ik} xⁱyᵏ` over a fixed `q`.
#[derive(Clone, Debug, PartialEq)]
pub struct QSeries {
    q: Complex64,
    degree: usize,
    /// row-major: `coeffs[i·(D+1) + k] = a_{ik}`
    coeffs: Vec<Complex64>,
    lossy: bool,
}

impl QSeries {
    pub fn zero(q: Complex64, degree: usize) -> Result<Self> {
        if q == ZERO {
            return Err(Error::InvalidArgument("q must be nonzero".into()));
        }
        ensure_finite(&[q], "q")?;
        Ok(Self {
            q,
            degree,
            coeffs: vec![ZERO; (degree + 1) * (degree + 1)],
            lossy: false,
        })
    }

    pub fn one(q: Complex64, degree: usize) -> Result<Self> {
        Self::monomial(q, degree, 0, 0, Complex64::new(1.0, 0.0))
    }

    pub fn monomial(q: Complex64, degree: usize, i: usize, k: usize, c: Complex64) -> Result<Self> {
        Self::from_terms(q, degree, [(i, k, c)])
    }

    /// The generator `x`.
    pub fn x(q: Complex64, degree: usize) -> Result<Self> {
        Self::monomial(q, degree, 1, 0, Complex64::new(1.0, 0.0))
    }

    /// The generator `y`.
    pub fn y(q: Complex64, degree: usize) -> Result<Self> {
        Self::monomial(q, degree, 0, 1, Complex64::new(1.0, 0.0))
    }

    /// Sums the given normal-ordered terms; indices above `degree` are rejected.
    pub fn from_terms(
        q: Complex64,
        degree: usize,
        terms: impl IntoIterator<Item = (usize, usize, Complex64)>,
    ) -> Result<Self> {
        let mut s = Self::zero(q, degree)?;
        for (i, k, c) in terms {
            if i > degree || k > degree {
                return Err(Error::InvalidArgument(format!(
                    "term x^{i} y^{k} exceeds truncation degree {degree}"
                )));
            }
            ensure_finite(&[c], "series term")?;
            let idx = s.idx(i, k);
            s.coeffs[idx] += c;
        }
        Ok(s)
    }

    /// Builds `Σₖ fₖ(x) yᵏ` from the row series `fₖ`; missing rows are zero.
    pub fn from_y_rows(q: Complex64, degree: usize, rows: &[HoloSeries]) -> Result<Self> {
        let mut s = Self::zero(q, degree)?;
        for (k, row) in rows.iter().enumerate() {
            for (i, c) in row.coeffs().iter().enumerate() {
                if *c == ZERO {
                    continue;
                }
                if i > degree || k > degree {
                    s.lossy = true;
                    continue;
                }
                let idx = s.idx(i, k);
                s.coeffs[idx] = *c;
            }
            s.lossy |= row.is_lossy();
        }
        Ok(s)
    }

    #[inline]
    fn idx(&self, i: usize, k: usize) -> usize {
        i * (self.degree + 1) + k
    }

    pub fn q(&self) -> Complex64 {
        self.q
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_lossy(&self) -> bool {
        self.lossy
    }

    pub(crate) fn mark_lossy(&mut self) {
        self.lossy = true;
    }

    /// `a_{ik}`, zero outside the table.
    pub fn coeff(&self, i: usize, k: usize) -> Complex64 {
        if i > self.degree || k > self.degree {
            ZERO
        } else {
            self.coeffs[self.idx(i, k)]
        }
    }

    pub(crate) fn add_to(&mut self, i: usize, k: usize, c: Complex64) {
        let idx = self.idx(i, k);
        self.coeffs[idx] += c;
    }

    /// Nonzero terms `(i, k, a_{ik})` in row-major order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        let w = self.degree + 1;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != ZERO)
            .map(move |(n, c)| (n / w, n % w, *c))
    }

    pub fn support_len(&self) -> usize {
        self.terms().count()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == ZERO)
    }

    /// Largest `i + k` over the support (0 for the zero series).
    pub fn total_degree(&self) -> usize {
        self.terms().map(|(i, k, _)| i + k).max().unwrap_or(0)
    }

    /// Largest single exponent `max(i, k)` over the support.
    pub fn max_exponent(&self) -> usize {
        self.terms().map(|(i, k, _)| i.max(k)).max().unwrap_or(0)
    }

    /// `fₖ(x) = Σᵢ a_{ik} xⁱ`, the coefficient of `yᵏ`.
    pub fn y_row(&self, k: usize) -> HoloSeries {
        let coeffs = (0..=self.degree).map(|i| self.coeff(i, k)).collect();
        HoloSeries::new(coeffs).expect("rows of a finite table are finite")
    }

    /// `gᵢ(y) = Σₖ a_{ik} yᵏ`, the coefficient of `xⁱ` in the layout `Σ xⁱ gᵢ(y)`.
    pub fn x_row(&self, i: usize) -> HoloSeries {
        let coeffs = (0..=self.degree).map(|k| self.coeff(i, k)).collect();
        HoloSeries::new(coeffs).expect("rows of a finite table are finite")
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.q != other.q {
            return Err(Error::Incompatible(format!("q = {} vs q = {}", self.q, other.q)));
        }
        if self.degree != other.degree {
            return Err(Error::Incompatible(format!(
                "truncation degree {} vs {}",
                self.degree, other.degree
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
        out.lossy |= other.lossy;
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        for a in &mut out.coeffs {
            *a *= c;
        }
        out
    }

    /// Largest coefficient difference; `∞` when the series are not composable.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.check_compatible(other).is_err() {
            return f64::INFINITY;
        }
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Normal-ordered product by coefficient convolution,
/// `(fg)_{nk} = Σ q^{i₂k₁} a_{i₁k₁} b_{i₂k₂}` over `i₁+i₂ = n`, `k₁+k₂ = k`.
pub fn qmul(f: &QSeries, g: &QSeries) -> Result<QSeries> {
    f.check_compatible(g)?;
    let d = f.degree;
    let mut out = QSeries::zero(f.q, d)?;
    out.lossy = f.lossy || g.lossy;
    let g_terms: Vec<_> = g.terms().collect();
    for (i1, k1, a) in f.terms() {
        for &(i2, k2, b) in &g_terms {
            let no = normal_order(i1, k1, i2, k2);
            let term = a * b * f.q.powu(no.exponent as u32);
            if no.i > d || no.k > d {
                if term != ZERO {
                    out.lossy = true;
                }
                continue;
            }
            out.add_to(no.i, no.k, term);
        }
    }
    Ok(out)
}

/// The same product through the row layout `Σ fₖ(x)yᵏ`:
/// `(fg)ₙ = Σ_{k+j=n} fₖ(x)·gⱼ(qᵏx)`.
pub fn qmul_by_rows(f: &QSeries, g: &QSeries) -> Result<QSeries> {
    f.check_compatible(g)?;
    let d = f.degree;
    let mut rows = vec![HoloSeries::zero(d); d + 1];
    let mut lossy = f.lossy || g.lossy;
    for k in 0..=d {
        let fk = f.y_row(k);
        if fk.is_zero() {
            continue;
        }
        let shift = f.q.powu(k as u32);
        for j in 0..=d {
            let gj = g.y_row(j);
            if gj.is_zero() {
                continue;
            }
            let prod = fk.mul(&gj.scale_arg(shift));
            if k + j > d {
                lossy |= !prod.is_zero() || prod.is_lossy();
                continue;
            }
            lossy |= prod.is_lossy();
            rows[k + j] = rows[k + j].add(&prod);
        }
    }
    let mut out = QSeries::from_y_rows(f.q, d, &rows)?;
    out.lossy |= lossy;
    Ok(out)
}

/// Multiplication of the opposite plane in the layout `Σ xⁿ fₙ(y)`:
/// `(f·g)ₙ = Σ_{i+j=n} fᵢ(qʲy)·gⱼ(y)`.
pub fn qmul_op(f: &QSeries, g: &QSeries) -> Result<QSeries> {
    f.check_compatible(g)?;
    let d = f.degree;
    let mut out = QSeries::zero(f.q, d)?;
    out.lossy = f.lossy || g.lossy;
    for i in 0..=d {
        let fi = f.x_row(i);
        if fi.is_zero() {
            continue;
        }
        for j in 0..=d {
            let gj = g.x_row(j);
            if gj.is_zero() {
                continue;
            }
            let prod = fi.scale_arg(f.q.powu(j as u32)).mul(&gj);
            if i + j > d {
                out.lossy |= !prod.is_zero();
                continue;
            }
            out.lossy |= prod.is_lossy();
            for (m, c) in prod.coeffs().iter().enumerate() {
                out.add_to(i + j, m, *c);
            }
        }
    }
    Ok(out)
}

/// The twisting map `Σ fₙ(x)yⁿ ↦ Σ xⁿfₙ(y)`: the coefficient table is
/// transposed, and the result is read in the opposite plane's layout.
pub fn twist(f: &QSeries) -> QSeries {
    let mut out = QSeries::zero(f.q, f.degree).expect("q already validated");
    for (i, k, c) in f.terms() {
        out.add_to(k, i, c);
    }
    out.lossy = f.lossy;
    out
}

/// `f = f_x + f_xy + f_y` with `f_x = Σ a_{i0}xⁱ`, `f_xy` the mixed terms
/// (`i, k ≥ 1`) and `f_y = Σ_{k≥1} a_{0k}yᵏ`.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub x_part: QSeries,
    pub mixed: QSeries,
    pub y_part: QSeries,
}

pub fn decompose(f: &QSeries) -> Decomposition {
    let blank = || {
        let mut s = QSeries::zero(f.q, f.degree).expect("q already validated");
        s.lossy = f.lossy;
        s
    };
    let (mut x_part, mut mixed, mut y_part) = (blank(), blank(), blank());
    for (i, k, c) in f.terms() {
        let target = match (i, k) {
            (_, 0) => &mut x_part,
            (0, _) => &mut y_part,
            _ => &mut mixed,
        };
        target.add_to(i, k, c);
    }
    Decomposition { x_part, mixed, y_part }
}

impl QSeries {
    /// Whether the series lies in the ideal generated by `xy`.
    pub fn is_mixed(&self) -> bool {
        self.terms().all(|(i, k, _)| i >= 1 && k >= 1)
    }
}

/// A character of the plane: evaluation at a point of `ℂ_x ∪ ℂ_y`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Character {
    /// `(z, 0)`
    X(Complex64),
    /// `(0, w)`
    Y(Complex64),
}

impl Character {
    /// Accepts `(z, w)` only when at least one coordinate vanishes.
    pub fn from_pair(z: Complex64, w: Complex64) -> Result<Self> {
        match (z == ZERO, w == ZERO) {
            (_, true) => Ok(Character::X(z)),
            (true, false) => Ok(Character::Y(w)),
            (false, false) => Err(Error::OffAxis(z, w)),
        }
    }
}

/// Value of `f` under a character: `(z,0) ↦ Σ a_{i0}zⁱ`, `(0,w) ↦ Σ a_{0k}wᵏ`.
pub fn spec_eval(f: &QSeries, ch: Character) -> Complex64 {
    match ch {
        Character::X(z) => f.y_row(0).eval(z),
        Character::Y(w) => f.x_row(0).eval(w),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{random_qseries, SeriesShape};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    const Q: Complex64 = Complex64::new(0.5, 0.0);

    #[test]
    fn yx_is_q_xy() {
        let x = QSeries::x(Q, 4).unwrap();
        let y = QSeries::y(Q, 4).unwrap();
        let yx = qmul(&y, &x).unwrap();
        assert_eq!(yx, QSeries::monomial(Q, 4, 1, 1, Q).unwrap());
        let xy = qmul(&x, &y).unwrap();
        assert_eq!(xy, QSeries::monomial(Q, 4, 1, 1, c(1.0)).unwrap());
        let sq = qmul(&xy, &xy).unwrap();
        assert_eq!(sq, QSeries::monomial(Q, 4, 2, 2, Q).unwrap());
    }

    #[test]
    fn unit_is_neutral() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = random_qseries(&mut rng, Q, 5, 6, 5, SeriesShape::Any);
        let one = QSeries::one(Q, 5).unwrap();
        assert_eq!(qmul(&one, &f).unwrap(), f);
        assert_eq!(qmul(&f, &one).unwrap(), f);
    }

    #[test]
    fn incompatible_operands_rejected() {
        let a = QSeries::x(Q, 3).unwrap();
        let b = QSeries::x(c(0.25), 3).unwrap();
        let d = QSeries::x(Q, 4).unwrap();
        assert!(matches!(qmul(&a, &b), Err(Error::Incompatible(_))));
        assert!(matches!(qmul(&a, &d), Err(Error::Incompatible(_))));
        assert!(QSeries::zero(c(0.0), 2).is_err());
        assert!(QSeries::from_terms(Q, 2, [(3, 0, c(1.0))]).is_err());
    }

    #[test]
    fn truncation_sets_loss_flag() {
        let x = QSeries::x(Q, 1).unwrap();
        let x2 = qmul(&x, &x).unwrap();
        assert!(x2.is_zero());
        assert!(x2.is_lossy());
    }

    #[test]
    fn both_products_agree_and_associate() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for q in [Q, Complex64::new(0.5, 0.25), c(2.0), Complex64::new(-0.3, 0.9)] {
            for _ in 0..20 {
                let f = random_qseries(&mut rng, q, 8, 5, 3, SeriesShape::Any);
                let g = random_qseries(&mut rng, q, 8, 5, 3, SeriesShape::Any);
                let h = random_qseries(&mut rng, q, 8, 3, 2, SeriesShape::Any);
                let a = qmul(&f, &g).unwrap();
                let b = qmul_by_rows(&f, &g).unwrap();
                assert!(a.max_abs_diff(&b) <= 1e-12, "{}", a.max_abs_diff(&b));
                assert!(!a.is_lossy() && !b.is_lossy());
                let left = qmul(&a, &h).unwrap();
                let right = qmul(&f, &qmul(&g, &h).unwrap()).unwrap();
                let size = left.terms().map(|t| t.2.norm()).fold(1.0, f64::max);
                assert!(left.max_abs_diff(&right) <= 1e-13 * size);
            }
        }
    }

    #[test]
    fn decompose_examples() {
        let five = QSeries::monomial(Q, 3, 0, 0, c(5.0)).unwrap();
        let d = decompose(&five);
        assert_eq!(d.x_part, five);
        assert!(d.mixed.is_zero() && d.y_part.is_zero());

        let f = QSeries::from_terms(Q, 3, [(1, 0, c(1.0)), (1, 1, c(1.0)), (0, 1, c(1.0))]).unwrap();
        let d = decompose(&f);
        assert_eq!(d.x_part, QSeries::x(Q, 3).unwrap());
        assert_eq!(d.mixed, QSeries::monomial(Q, 3, 1, 1, c(1.0)).unwrap());
        assert_eq!(d.y_part, QSeries::y(Q, 3).unwrap());
    }

    #[test]
    fn decompose_log_of_shifted_product() {
        // ln(3/2 + xy) = ln(3/2) + Σ (−1)ⁿ⁺¹/n (2/3)ⁿ (xy)ⁿ, with (xy)ⁿ = q^{n(n−1)/2} xⁿyⁿ
        let d = 8;
        let log = crate::holo::HoloSeries::log_shifted(1.5, d).unwrap();
        let xy = QSeries::monomial(Q, d, 1, 1, c(1.0)).unwrap();
        let mut f = QSeries::zero(Q, d).unwrap();
        let mut pow = QSeries::one(Q, d).unwrap();
        for n in 0..=d {
            f = f.add(&pow.scale(log.coeff(n))).unwrap();
            pow = qmul(&pow, &xy).unwrap();
        }
        let parts = decompose(&f);
        assert_eq!(parts.x_part, QSeries::monomial(Q, d, 0, 0, c(1.5f64.ln())).unwrap());
        assert!(parts.y_part.is_zero());
        for n in 1..=d {
            let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
            let want = sign / n as f64 * (2.0f64 / 3.0).powi(n as i32) * 0.5f64.powi((n * (n - 1) / 2) as i32);
            assert!((parts.mixed.coeff(n, n).re - want).abs() < 1e-15);
        }
        assert_eq!(parts.mixed.support_len(), d);
    }

    #[test]
    fn decompose_reconstructs_and_is_idempotent() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let f = random_qseries(&mut rng, Q, 6, 10, 6, SeriesShape::Any);
            let p = decompose(&f);
            let sum = p.x_part.add(&p.mixed).unwrap().add(&p.y_part).unwrap();
            assert_eq!(sum, f);
            assert_eq!(decompose(&p.x_part).x_part, p.x_part);
            assert_eq!(decompose(&p.mixed).mixed, p.mixed);
            assert_eq!(decompose(&p.y_part).y_part, p.y_part);
            assert!(p.mixed.is_mixed());
        }
    }

    #[test]
    fn mixed_ideal_absorbs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let f = random_qseries(&mut rng, Q, 8, 4, 4, SeriesShape::Mixed);
            let g = random_qseries(&mut rng, Q, 8, 4, 4, SeriesShape::Any);
            for p in [qmul(&f, &g).unwrap(), qmul(&g, &f).unwrap()] {
                let d = decompose(&p);
                assert!(d.x_part.is_zero() && d.y_part.is_zero());
            }
        }
    }

    #[test]
    fn twist_examples() {
        let one = QSeries::one(Q, 3).unwrap();
        assert_eq!(twist(&one), one);
        let xy = QSeries::monomial(Q, 3, 1, 1, c(1.0)).unwrap();
        assert_eq!(twist(&xy), xy);
        let f = QSeries::from_terms(Q, 3, [(2, 1, c(3.0)), (0, 3, c(-1.0))]).unwrap();
        assert_eq!(twist(&f).coeff(1, 2), c(3.0));
        assert_eq!(twist(&twist(&f)), f);
    }

    #[test]
    fn twist_is_anti_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for q in [Q, Complex64::new(0.5, 0.25)] {
            for _ in 0..25 {
                let f = random_qseries(&mut rng, q, 8, 5, 4, SeriesShape::Any);
                let g = random_qseries(&mut rng, q, 8, 5, 4, SeriesShape::Any);
                let lhs = twist(&qmul(&g, &f).unwrap());
                let rhs = qmul_op(&twist(&f), &twist(&g)).unwrap();
                assert!(lhs.max_abs_diff(&rhs) <= 1e-12);
            }
        }
    }

    #[test]
    fn character_examples() {
        let xy = QSeries::monomial(Q, 3, 1, 1, c(1.0)).unwrap();
        for ch in [Character::X(c(2.0)), Character::Y(Complex64::new(0.3, -1.0))] {
            assert_eq!(spec_eval(&xy, ch), c(0.0));
        }
        let f = QSeries::x(Q, 3).unwrap().add(&QSeries::y(Q, 3).unwrap()).unwrap();
        assert_eq!(spec_eval(&f, Character::from_pair(c(2.0), c(0.0)).unwrap()), c(2.0));
        assert!(matches!(Character::from_pair(c(1.0), c(1.0)), Err(Error::OffAxis(..))));
        assert_eq!(Character::from_pair(c(0.0), c(0.3)).unwrap(), Character::Y(c(0.3)));
    }

    #[test]
    fn character_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let one = QSeries::one(Q, 8).unwrap();
        for _ in 0..30 {
            let f = random_qseries(&mut rng, Q, 8, 6, 4, SeriesShape::Any);
            let g = random_qseries(&mut rng, Q, 8, 6, 4, SeriesShape::Any);
            let fg = qmul(&f, &g).unwrap();
            for ch in [Character::Y(c(0.3)), Character::X(Complex64::new(-0.7, 0.2))] {
                let lhs = spec_eval(&fg, ch);
                let rhs = spec_eval(&f, ch) * spec_eval(&g, ch);
                assert!((lhs - rhs).norm() <= 1e-12);
                assert_eq!(spec_eval(&one, ch), c(1.0));
            }
        }
    }
}
