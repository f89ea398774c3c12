use serde::Serialize;

use super::{qmul, QSeries};
use crate::error::{Error, Result};

fn check_radius(name: &str, r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} must be positive, got {r}")))
    }
}

/// `‖f‖_ρ = Σ |a_{ik}| ρ^{i+k}` for `|q| ≤ 1`, and
/// `Σ |a_{ik}| |q|^{−ik} ρ^{i+k}` for `|q| > 1`.
pub fn seminorm(f: &QSeries, rho: f64) -> Result<f64> {
    check_radius("rho", rho)?;
    let qa = f.q().norm();
    Ok(f.terms()
        .map(|(i, k, a)| {
            let w = rho.powi((i + k) as i32);
            if qa > 1.0 {
                a.norm() * w * qa.powf(-((i * k) as f64))
            } else {
                a.norm() * w
            }
        })
        .sum())
}

/// `p(f) = Σₖ ‖fₖ‖_{ρx} ρyᵏ` over the rows of `f = Σ fₖ(x)yᵏ`.
pub fn p_seminorm(f: &QSeries, rho_x: f64, rho_y: f64) -> Result<f64> {
    check_radius("rho_x", rho_x)?;
    check_radius("rho_y", rho_y)?;
    let mut total = 0.0;
    for k in 0..=f.degree() {
        let row = f.y_row(k);
        if !row.is_zero() {
            total += row.norm_rho(rho_x)? * rho_y.powi(k as i32);
        }
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayRow {
    pub s: usize,
    /// `‖fˢ‖_ρ^{1/s}`
    pub root_norm: f64,
    /// `|q|^{(s−1)/2}‖f‖_ρ`, present only for `|q| < 1`.
    pub bound: Option<f64>,
}

impl DecayRow {
    pub fn ratio(&self) -> Option<f64> {
        self.bound.map(|b| if b == 0.0 { 0.0 } else { self.root_norm / b })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayProfile {
    pub rows: Vec<DecayRow>,
    /// Whether some power exceeded the truncation budget.
    pub lossy: bool,
}

impl DecayProfile {
    /// The quasinilpotent envelope is only asserted for contractive `q`.
    pub fn applicable(&self) -> bool {
        self.rows.first().is_some_and(|r| r.bound.is_some())
    }
}

/// `‖fˢ‖_ρ^{1/s}` for `s = 1..=s_max`, with the envelope `|q|^{(s−1)/2}‖f‖_ρ`.
pub fn decay_profile(f: &QSeries, rho: f64, s_max: usize) -> Result<DecayProfile> {
    let base = seminorm(f, rho)?;
    let contractive = f.q().norm() < 1.0;
    let q_abs = f.q().norm();
    let mut rows = Vec::with_capacity(s_max);
    let mut power = f.clone();
    for s in 1..=s_max {
        if s > 1 {
            power = qmul(&power, f)?;
        }
        let norm = seminorm(&power, rho)?;
        rows.push(DecayRow {
            s,
            root_norm: norm.powf(1.0 / s as f64),
            bound: contractive.then(|| q_abs.powf((s as f64 - 1.0) / 2.0) * base),
        });
    }
    Ok(DecayProfile {
        rows,
        lossy: power.is_lossy(),
    })
}
