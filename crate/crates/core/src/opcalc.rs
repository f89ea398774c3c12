//! Matrix models of the plane: the truncated shift/diagonal pair, the
//! functional calculus `f(T,S) = Σ fₙ(T)Sⁿ` and identity checks on it.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{ensure_finite, Axis, Error, Result};
use crate::holo::HoloSeries;
use crate::linalg::{eigenvalues, match_eigenvalues, singular_values, Lu, Matching, MatchingMethod, Matrix};
use crate::qalgebra::QSeries;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Relative tolerance for `‖TS − q⁻¹ST‖_F` accepted by [`OperatorPair::new`].
pub const QCOMMUTATION_TOL: f64 = 1e-12;

/// Two square matrices with `TS = q⁻¹ST` up to rounding.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorPair {
    t: Matrix,
    s: Matrix,
    q: Complex64,
}

impl OperatorPair {
    pub fn new(t: Matrix, s: Matrix, q: Complex64) -> Result<Self> {
        check_q(q)?;
        if !t.is_finite() || !s.is_finite() {
            return Err(Error::NonFinite("operator pair"));
        }
        let residual = qcommutation_residual(&t, &s, q)?;
        let allowed = QCOMMUTATION_TOL * t.frobenius_norm() * s.frobenius_norm();
        if residual > allowed {
            return Err(Error::NotQCommuting { residual, allowed });
        }
        Ok(Self { t, s, q })
    }

    /// `T eₙ = eₙ₊₁` (with `T e_{N−1} = 0`) and `S eₙ = qⁿ eₙ` on `ℂᴺ`.
    pub fn model(q: Complex64, n: usize) -> Result<Self> {
        check_q(q)?;
        if n == 0 {
            return Err(Error::InvalidArgument("model pair needs N >= 1".into()));
        }
        let t = Matrix::from_fn(n, n, |r, c| if r == c + 1 { ONE } else { ZERO });
        let mut diag = Vec::with_capacity(n);
        let mut p = ONE;
        for _ in 0..n {
            diag.push(p);
            p *= q;
        }
        Ok(Self {
            t,
            s: Matrix::from_diag(&diag),
            q,
        })
    }

    pub fn t(&self) -> &Matrix {
        &self.t
    }

    pub fn s(&self) -> &Matrix {
        &self.s
    }

    pub fn q(&self) -> Complex64 {
        self.q
    }

    pub fn dim(&self) -> usize {
        self.t.rows()
    }
}

pub fn model_pair(q: Complex64, n: usize) -> Result<OperatorPair> {
    OperatorPair::model(q, n)
}

fn check_q(q: Complex64) -> Result<()> {
    ensure_finite(&[q], "q")?;
    if q == ZERO {
        return Err(Error::InvalidArgument("q must be nonzero".into()));
    }
    Ok(())
}

fn square_dims(t: &Matrix, s: &Matrix) -> Result<usize> {
    if !t.is_square() || t.rows() != s.rows() || t.cols() != s.cols() {
        return Err(Error::DimensionMismatch {
            expected: format!("two square matrices of equal size (T is {}x{})", t.rows(), t.cols()),
            found: format!("S is {}x{}", s.rows(), s.cols()),
        });
    }
    Ok(t.rows())
}

/// `‖TS − q⁻¹ST‖_F`.
pub fn qcommutation_residual(t: &Matrix, s: &Matrix, q: Complex64) -> Result<f64> {
    square_dims(t, s)?;
    check_q(q)?;
    let ts = t.try_mul(s)?;
    let st = s.try_mul(t)?.scale(q.inv());
    Ok(ts.try_sub(&st)?.frobenius_norm())
}

/// `f = Σₙ fₙ(x)yⁿ` with `fₙ` holomorphic on `B(0, r_x)` and the series in
/// `y` convergent on `B(0, r_y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct QFunctionRep {
    q: Complex64,
    f_list: Vec<HoloSeries>,
    r_x: f64,
    r_y: f64,
}

impl QFunctionRep {
    pub fn new(q: Complex64, f_list: Vec<HoloSeries>, r_x: f64, r_y: f64) -> Result<Self> {
        check_q(q)?;
        if f_list.is_empty() {
            return Err(Error::InvalidArgument("f_list needs at least f_0".into()));
        }
        for (name, r) in [("r_x", r_x), ("r_y", r_y)] {
            if r.is_nan() || r <= 0.0 {
                return Err(Error::InvalidArgument(format!("{name} must be positive, got {r}")));
            }
        }
        Ok(Self { q, f_list, r_x, r_y })
    }

    /// Reads a truncated series row by row: `fₖ = Σᵢ a_{ik}xⁱ`.
    pub fn from_qseries(f: &QSeries, r_x: f64, r_y: f64) -> Result<Self> {
        let rows = (0..=f.degree()).map(|k| f.y_row(k)).collect();
        Self::new(f.q(), rows, r_x, r_y)
    }

    pub fn q(&self) -> Complex64 {
        self.q
    }

    pub fn f_list(&self) -> &[HoloSeries] {
        &self.f_list
    }

    pub fn r_x(&self) -> f64 {
        self.r_x
    }

    pub fn r_y(&self) -> f64 {
        self.r_y
    }

    /// `f(0, w) = Σ fₙ(0) wⁿ`.
    pub fn eval_y_axis(&self, w: Complex64) -> Complex64 {
        self.f_list.iter().rev().fold(ZERO, |acc, f| acc * w + f.coeff(0))
    }

    /// `f(z, 0) = f₀(z)`.
    pub fn eval_x_axis(&self, z: Complex64) -> Complex64 {
        self.f_list[0].eval(z)
    }

    /// `Σₙ ‖fₙ‖_{ρx} ρyⁿ` for radii inside the domain.
    pub fn p_seminorm(&self, rho_x: f64, rho_y: f64) -> Result<f64> {
        let inside = rho_x < self.r_x && rho_y > 0.0 && rho_y < self.r_y;
        if !inside {
            return Err(Error::InvalidArgument(format!(
                "need 0 < (rho_x, rho_y) < ({}, {}), got ({rho_x}, {rho_y})",
                self.r_x, self.r_y
            )));
        }
        let mut total = 0.0;
        let mut w = 1.0;
        for f in &self.f_list {
            total += f.norm_rho(rho_x)? * w;
            w *= rho_y;
        }
        Ok(total)
    }

    /// `(Σ fₙyⁿ)(Σ gₘyᵐ) = Σ fₙ(x)gₘ(qⁿx) yⁿ⁺ᵐ` on the common domain.
    pub fn qmul(&self, other: &Self) -> Result<Self> {
        if self.q != other.q {
            return Err(Error::Incompatible(format!("q = {} vs q = {}", self.q, other.q)));
        }
        let len = self.f_list.len() + other.f_list.len() - 1;
        let degree = self.f_list[0].degree().min(other.f_list[0].degree());
        let mut rows = vec![HoloSeries::zero(degree); len];
        let mut shift = ONE;
        for (n, f) in self.f_list.iter().enumerate() {
            for (m, g) in other.f_list.iter().enumerate() {
                rows[n + m] = rows[n + m].add(&f.mul(&g.scale_arg(shift)));
            }
            shift *= self.q;
        }
        Self::new(self.q, rows, self.r_x.min(other.r_x), self.r_y.min(other.r_y))
    }
}

/// Largest eigenvalue modulus.
pub fn spectral_radius(m: &Matrix) -> Result<f64> {
    Ok(eigenvalues(m)?.iter().map(|z| z.norm()).fold(0.0, f64::max))
}

fn check_pair_q(f_q: Complex64, p: &OperatorPair) -> Result<()> {
    if f_q != p.q {
        return Err(Error::Incompatible(format!(
            "function over q = {f_q}, pair over q = {}",
            p.q
        )));
    }
    Ok(())
}

/// `Σₙ fₙ(T)Sⁿ`, after checking `ρ(T) < r_x` and `ρ(S) < r_y` on the
/// numerical eigenvalues of the matrices.
pub fn calc(f: &QFunctionRep, p: &OperatorPair) -> Result<Matrix> {
    check_pair_q(f.q, p)?;
    for (axis, m, radius) in [(Axis::X, &p.t, f.r_x), (Axis::Y, &p.s, f.r_y)] {
        let rho = spectral_radius(m)?;
        if rho >= radius {
            return Err(Error::SpectrumOutsideDomain {
                axis,
                radius,
                spectral_radius: rho,
            });
        }
    }
    calc_unchecked(f, p)
}

fn calc_unchecked(f: &QFunctionRep, p: &OperatorPair) -> Result<Matrix> {
    let n = p.dim();
    let mut acc = Matrix::zeros(n, n);
    let mut s_pow = Matrix::identity(n);
    for (k, fk) in f.f_list.iter().enumerate() {
        if k > 0 {
            s_pow = s_pow.try_mul(&p.s)?;
        }
        if fk.is_zero() {
            continue;
        }
        acc = acc.try_add(&fk.apply_matrix(&p.t)?.try_mul(&s_pow)?)?;
    }
    Ok(acc)
}

/// Conditions of the infinite-dimensional model that the truncation cannot
/// see: `σ(T) = D̄₁` and `σ(S) = {qᵐ} ∪ {0}`.
pub fn analytic_domain_warnings(f: &QFunctionRep) -> Vec<String> {
    let mut out = Vec::new();
    if f.r_x <= 1.0 {
        out.push(format!(
            "r_x = {} does not exceed 1: the untruncated shift has spectrum the closed unit disk",
            f.r_x
        ));
    }
    let qa = f.q.norm();
    if qa > 1.0 {
        out.push(format!(
            "|q| = {qa} > 1: the untruncated diagonal operator is unbounded"
        ));
    } else if f.r_y <= 1.0 {
        out.push(format!(
            "r_y = {} does not exceed 1: the untruncated diagonal operator has eigenvalue 1",
            f.r_y
        ));
    }
    out
}

/// `Σ a_{ik} TⁱSᵏ`.
pub fn calc_qseries(f: &QSeries, p: &OperatorPair) -> Result<Matrix> {
    check_pair_q(f.q(), p)?;
    let top = f.max_exponent();
    let t_pows = p.t.powers(top)?;
    let s_pows = p.s.powers(top)?;
    let n = p.dim();
    let mut acc = Matrix::zeros(n, n);
    for (i, k, c) in f.terms() {
        acc = acc.try_add(&t_pows[i].try_mul(&s_pows[k])?.scale(c))?;
    }
    Ok(acc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectrumMode {
    Analytic,
    Numerical,
}

/// The joint spectrum of the model pair placed on the two axes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum ModelSpectrum {
    /// `D̄₁ × {0}` on the x-axis and `{qᵐ : m ≥ 0} ∪ {0}` on the y-axis.
    Analytic { q: Complex64, x_disk_radius: f64 },
    /// Eigenvalues of the `N`-truncations.
    Numerical {
        x_branch: Vec<Complex64>,
        y_branch: Vec<Complex64>,
    },
}

impl ModelSpectrum {
    /// The first `count` orbit points `qᵐ` followed by the accumulation point 0.
    pub fn y_orbit(&self, count: usize) -> Vec<Complex64> {
        match self {
            ModelSpectrum::Analytic { q, .. } => {
                let mut pts: Vec<_> = (0..count).map(|m| q.powu(m as u32)).collect();
                pts.push(ZERO);
                pts
            }
            ModelSpectrum::Numerical { y_branch, .. } => y_branch.clone(),
        }
    }
}

pub fn harte_model_spectrum(q: Complex64, n: usize, mode: SpectrumMode) -> Result<ModelSpectrum> {
    match mode {
        SpectrumMode::Analytic => {
            check_q(q)?;
            if q.norm() >= 1.0 {
                return Err(Error::InvalidArgument(format!(
                    "the analytic model spectrum needs |q| < 1, got {}",
                    q.norm()
                )));
            }
            Ok(ModelSpectrum::Analytic { q, x_disk_radius: 1.0 })
        }
        SpectrumMode::Numerical => {
            let p = OperatorPair::model(q, n)?;
            Ok(ModelSpectrum::Numerical {
                x_branch: eigenvalues(&p.t)?,
                y_branch: eigenvalues(&p.s)?,
            })
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MappingRow {
    pub actual: Complex64,
    pub predicted: Complex64,
    pub distance: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralMappingReport {
    /// One row per eigenvalue in computed order, paired optimally.
    pub rows: Vec<MappingRow>,
    pub max_distance: f64,
    pub method: MatchingMethod,
    /// `(z, f(z, 0))` for `z` on the unit circle.
    pub x_curve: Vec<(Complex64, Complex64)>,
}

/// Compares `σ(f(T,S))` with the predicted y-branch image `{f(0, qᵐ)}`.
pub fn spectral_mapping_check(
    f: &QFunctionRep,
    p: &OperatorPair,
    curve_samples: usize,
) -> Result<SpectralMappingReport> {
    let a = calc(f, p)?;
    let actual = eigenvalues(&a)?;
    let predicted: Vec<_> = (0..p.dim()).map(|m| f.eval_y_axis(p.q.powu(m as u32))).collect();
    let Matching {
        pairs,
        max_distance,
        method,
    } = match_eigenvalues(&actual, &predicted)?;
    let rows = pairs
        .into_iter()
        .map(|(i, j, distance)| MappingRow {
            actual: actual[i],
            predicted: predicted[j],
            distance,
        })
        .collect();
    let x_curve = (0..curve_samples)
        .map(|j| {
            let z = Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / curve_samples as f64);
            (z, f.eval_x_axis(z))
        })
        .collect();
    Ok(SpectralMappingReport {
        rows,
        max_distance,
        method,
        x_curve,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TwistResidual {
    pub residual: f64,
    pub lhs_norm: f64,
}

/// `(A − λ)⁻ᵐ B` by `m` solves with one factorization.
fn resolvent_apply(a: &Matrix, lambda: Complex64, m: usize, b: Matrix) -> Result<Matrix> {
    if m == 0 {
        return Ok(b);
    }
    let lu = Lu::factor(&a.shift(-lambda)).map_err(|e| match e {
        Error::SingularResolvent(_) => Error::SingularResolvent(lambda),
        other => other,
    })?;
    (0..m).try_fold(b, |x, _| lu.solve(&x))
}

/// `‖SᵏTⁱ(T−λ)⁻ᵐ − q^{ik}Tⁱ(qᵏT−λ)⁻ᵐSᵏ‖_F` together with the norm of the
/// left-hand side.
pub fn resolvent_twist_residual(
    p: &OperatorPair,
    i: usize,
    k: usize,
    m: usize,
    lambda: Complex64,
) -> Result<TwistResidual> {
    ensure_finite(&[lambda], "lambda")?;
    let n = p.dim();
    let t_i = &p.t.powers(i)?[i];
    let s_k = &p.s.powers(k)?[k];
    let lhs = s_k
        .try_mul(t_i)?
        .try_mul(&resolvent_apply(&p.t, lambda, m, Matrix::identity(n))?)?;
    let qk = p.q.powu(k as u32);
    let rhs = t_i
        .try_mul(&resolvent_apply(&p.t.scale(qk), lambda, m, s_k.clone())?)?
        .scale(p.q.powu((i * k) as u32));
    Ok(TwistResidual {
        residual: lhs.try_sub(&rhs)?.frobenius_norm(),
        lhs_norm: lhs.frobenius_norm(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RadicalDecayRow {
    pub s: usize,
    /// `‖Aˢ‖^{1/s}` in the spectral norm.
    pub root_norm: f64,
    /// `|q|^{(s−1)/2}`
    pub envelope: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RadicalDecay {
    pub rows: Vec<RadicalDecayRow>,
    /// Largest observed ratio, the empirical envelope constant.
    pub constant: f64,
}

/// Decay of `‖f(T,S)ˢ‖^{1/s}` for `f` in the ideal of mixed terms.
pub fn radical_decay_check(f: &QFunctionRep, p: &OperatorPair, s_max: usize) -> Result<RadicalDecay> {
    if !f.f_list[0].is_zero() {
        return Err(Error::InvalidArgument("f_0 must vanish for a radical element".into()));
    }
    if let Some(n) = f.f_list.iter().position(|fn_| fn_.coeff(0) != ZERO) {
        return Err(Error::InvalidArgument(format!(
            "f_{n}(0) must vanish for a radical element"
        )));
    }
    let a = calc(f, p)?;
    let qa = p.q.norm();
    let mut rows = Vec::with_capacity(s_max);
    let mut power = Matrix::identity(p.dim());
    for s in 1..=s_max {
        power = power.try_mul(&a)?;
        let norm = singular_values(&power)?.first().copied().unwrap_or(0.0);
        let root_norm = norm.powf(1.0 / s as f64);
        let envelope = qa.powf((s as f64 - 1.0) / 2.0);
        rows.push(RadicalDecayRow {
            s,
            root_norm,
            envelope,
            ratio: root_norm / envelope,
        });
    }
    let constant = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    Ok(RadicalDecay { rows, constant })
}
