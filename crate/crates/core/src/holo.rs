//! One-variable truncated power series `Σ aₙ zⁿ` with the weighted ℓ¹ norms
//! `‖f‖_ρ = Σ |aₙ| ρⁿ` of absolutely convergent series on a closed disk.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};
use crate::linalg::Matrix;

/// A power series truncated at degree `D`, holding exactly `D + 1`
/// coefficients.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HoloSeries {
    coeffs: Vec<Complex64>,
    /// Set once any operation has discarded a nonzero term beyond `D`.
    #[serde(default)]
    lossy: bool,
}

impl HoloSeries {
    /// Coefficients `a₀..a_D`; the list must be nonempty and finite.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument(
                "a series needs at least the constant coefficient".into(),
            ));
        }
        ensure_finite(&coeffs, "series coefficients")?;
        Ok(Self { coeffs, lossy: false })
    }

    pub fn zero(degree: usize) -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0); degree + 1],
            lossy: false,
        }
    }

    pub fn constant(c: Complex64, degree: usize) -> Self {
        let mut s = Self::zero(degree);
        s.coeffs[0] = c;
        s
    }

    /// `c·zⁿ` truncated at `degree` (lossy if `n > degree`).
    pub fn monomial(n: usize, c: Complex64, degree: usize) -> Self {
        let mut s = Self::zero(degree);
        if n <= degree {
            s.coeffs[n] = c;
        } else {
            s.lossy = c != Complex64::new(0.0, 0.0);
        }
        s
    }

    /// `ln(c + z) = ln c + Σ_{n≥1} (−1)ⁿ⁺¹ zⁿ / (n cⁿ)`, convergent on `|z| < c`.
    pub fn log_shifted(c: f64, degree: usize) -> Result<Self> {
        if c <= 0.0 || !c.is_finite() {
            return Err(Error::InvalidArgument(format!("log shift must be positive, got {c}")));
        }
        let mut coeffs = Vec::with_capacity(degree + 1);
        coeffs.push(Complex64::new(c.ln(), 0.0));
        let mut inv_pow = 1.0;
        for n in 1..=degree {
            inv_pow /= c;
            let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
            coeffs.push(Complex64::new(sign * inv_pow / n as f64, 0.0));
        }
        Ok(Self { coeffs, lossy: false })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or_default()
    }

    pub fn is_lossy(&self) -> bool {
        self.lossy
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == Complex64::new(0.0, 0.0))
    }

    /// Same series re-truncated at `degree`.
    pub fn truncate(&self, degree: usize) -> Self {
        let mut out = Self::zero(degree);
        let keep = self.coeffs.len().min(degree + 1);
        out.coeffs[..keep].copy_from_slice(&self.coeffs[..keep]);
        out.lossy = self.lossy || self.coeffs[keep..].iter().any(|c| *c != Complex64::new(0.0, 0.0));
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let degree = self.degree().min(other.degree());
        let (a, b) = (self.truncate(degree), other.truncate(degree));
        Self {
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect(),
            lossy: a.lossy || b.lossy,
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
            lossy: self.lossy,
        }
    }

    /// Cauchy product truncated at the smaller of the two degrees.
    pub fn mul(&self, other: &Self) -> Self {
        let degree = self.degree().min(other.degree());
        let mut out = Self::zero(degree);
        out.lossy = self.lossy || other.lossy;
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let prod = a * b;
                if i + j <= degree {
                    out.coeffs[i + j] += prod;
                } else if prod != Complex64::new(0.0, 0.0) {
                    out.lossy = true;
                }
            }
        }
        out
    }

    /// `z ↦ f(c·z)`, i.e. `aₙ ↦ cⁿ aₙ`.
    pub fn scale_arg(&self, c: Complex64) -> Self {
        let mut pow = Complex64::new(1.0, 0.0);
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| {
                let v = a * pow;
                pow *= c;
                v
            })
            .collect();
        Self {
            coeffs,
            lossy: self.lossy,
        }
    }

    /// `‖f‖_ρ = Σ |aₙ| ρⁿ`.
    pub fn norm_rho(&self, rho: f64) -> Result<f64> {
        if rho.is_nan() || rho <= 0.0 {
            return Err(Error::InvalidArgument(format!("radius must be positive, got {rho}")));
        }
        let mut pow = 1.0;
        let mut total = 0.0;
        for a in &self.coeffs {
            total += a.norm() * pow;
            pow *= rho;
        }
        Ok(total)
    }

    /// Estimate of `sup_{|z| = ρ} |f(z)|` from `samples` equispaced points.
    /// It never exceeds [`Self::norm_rho`]; no density guarantees a bound.
    pub fn sup_norm_sampled(&self, rho: f64, samples: usize) -> Result<f64> {
        if rho.is_nan() || rho <= 0.0 || samples == 0 {
            return Err(Error::InvalidArgument(
                "sampled sup-norm needs rho > 0 and samples > 0".into(),
            ));
        }
        Ok((0..samples)
            .map(|k| {
                let theta = std::f64::consts::TAU * k as f64 / samples as f64;
                self.eval(Complex64::from_polar(rho, theta)).norm()
            })
            .fold(0.0, f64::max))
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, a| acc * z + a)
    }

    /// `Σ aₙ Mⁿ` by Horner's rule.
    pub fn apply_matrix(&self, m: &Matrix) -> Result<Matrix> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch {
                expected: "square matrix".into(),
                found: format!("{}x{}", m.rows(), m.cols()),
            });
        }
        let mut acc = Matrix::zeros(m.rows(), m.cols());
        for a in self.coeffs.iter().rev() {
            acc = acc.try_mul(m)?.shift(*a);
        }
        Ok(acc)
    }
}
