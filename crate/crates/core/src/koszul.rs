//! The parametrized complex `0 → ℂᴺ → ℂᴺ ⊕ ℂᴺ → ℂᴺ → 0` of a q-commuting pair
//! at a character `γ`, its numerical homology, and axis scans of the
//! resulting (truncation) spectrum.

use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Axis, Error, Result};
use crate::linalg::{singular_values, Matrix};
use crate::opcalc::OperatorPair;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Default relative rank threshold.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// `d⁰ = [γy − qS ; T − qγx]` (2N×N) and `d¹ = [T − γx , S − γy]` (N×2N).
#[derive(Clone, Debug, PartialEq)]
pub struct KoszulComplexAt {
    gamma: (Complex64, Complex64),
    d0: Matrix,
    d1: Matrix,
    n: usize,
    q: Complex64,
    scale: f64,
}

impl KoszulComplexAt {
    pub fn gamma(&self) -> (Complex64, Complex64) {
        self.gamma
    }

    pub fn d0(&self) -> &Matrix {
        &self.d0
    }

    pub fn d1(&self) -> &Matrix {
        &self.d1
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> Complex64 {
        self.q
    }

    /// `(‖T‖_F + ‖S‖_F + |γ|)²`, the size of the entries of `d¹d⁰`.
    pub fn composite_scale(&self) -> f64 {
        self.scale
    }

    pub fn on_axis(&self) -> bool {
        self.gamma.0 == ZERO || self.gamma.1 == ZERO
    }
}

pub fn build(p: &OperatorPair, gamma_x: Complex64, gamma_y: Complex64) -> Result<KoszulComplexAt> {
    crate::error::ensure_finite(&[gamma_x, gamma_y], "character")?;
    let (t, s, q) = (p.t(), p.s(), p.q());
    let d0 = s.scale(-q).shift(gamma_y).vstack(&t.shift(-q * gamma_x))?;
    let d1 = t.shift(-gamma_x).hstack(&s.shift(-gamma_y))?;
    let g = (gamma_x.norm_sqr() + gamma_y.norm_sqr()).sqrt();
    let scale = (t.frobenius_norm() + s.frobenius_norm() + g).powi(2);
    Ok(KoszulComplexAt {
        gamma: (gamma_x, gamma_y),
        d0,
        d1,
        n: p.dim(),
        q,
        scale,
    })
}

/// `‖d¹d⁰ − (q−1)γxγy·I‖_F`.
pub fn composite_defect(c: &KoszulComplexAt, q: Complex64) -> Result<f64> {
    let expected = (q - 1.0) * c.gamma.0 * c.gamma.1;
    Ok(c.d1.try_mul(&c.d0)?.shift(-expected).frobenius_norm())
}

/// Homology dimensions with the numerical-rank diagnostics behind them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Homology {
    pub h0: usize,
    pub h1: usize,
    pub h2: usize,
    /// False when a singular value falls within a factor 10 of the rank
    /// threshold, or when the ranks contradict `im d⁰ ⊆ ker d¹`.
    pub stable: bool,
}

impl Homology {
    pub fn member(&self) -> bool {
        self.h0 + self.h1 + self.h2 > 0
    }
}

/// Rank of `m` counting singular values above `tol·σ_max`, and whether no
/// singular value sits within a factor 10 of that threshold.
pub fn numerical_rank(m: &Matrix, tol: f64) -> Result<(usize, bool)> {
    let sv = singular_values(m)?;
    let smax = sv.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return Ok((0, true));
    }
    let cut = tol * smax;
    let rank = sv.iter().filter(|&&s| s > cut).count();
    let stable = sv.iter().all(|&s| s > 10.0 * cut || s < cut / 10.0);
    Ok((rank, stable))
}

/// `h0 = N − rank d⁰`, `h1 = 2N − rank d¹ − rank d⁰`, `h2 = N − rank d¹`;
/// only defined on the axes, where `d¹d⁰ = 0`.
pub fn homology_dims(c: &KoszulComplexAt, rank_tol: f64) -> Result<Homology> {
    if !c.on_axis() {
        return Err(Error::OffAxis(c.gamma.0, c.gamma.1));
    }
    if !(rank_tol > 0.0 && rank_tol < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "rank_tol must lie in (0, 1), got {rank_tol}"
        )));
    }
    let n = c.n;
    let (r0, s0) = numerical_rank(&c.d0, rank_tol)?;
    let (r1, s1) = numerical_rank(&c.d1, rank_tol)?;
    let consistent = r0 + r1 <= 2 * n;
    Ok(Homology {
        h0: n - r0,
        h1: (2 * n).saturating_sub(r0 + r1),
        h2: n - r1,
        stable: s0 && s1 && consistent,
    })
}

/// A rectangular grid in the plane of one axis coordinate. A dimension with
/// `min == max` contributes one point; zero steps give an empty grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScanGrid {
    pub re_min: f64,
    pub re_max: f64,
    pub re_steps: usize,
    pub im_min: f64,
    pub im_max: f64,
    pub im_steps: usize,
}

fn linspace(min: f64, max: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        _ if min == max => vec![min],
        1 => vec![min],
        _ => {
            let h = (max - min) / (steps - 1) as f64;
            (0..steps)
                .map(|j| if j + 1 == steps { max } else { min + h * j as f64 })
                .collect()
        }
    }
}

impl ScanGrid {
    /// Points in row-major order: outer loop over the imaginary part.
    pub fn points(&self) -> Result<Vec<Complex64>> {
        for v in [self.re_min, self.re_max, self.im_min, self.im_max] {
            if !v.is_finite() {
                return Err(Error::NonFinite("scan grid"));
            }
        }
        if self.re_min > self.re_max || self.im_min > self.im_max {
            return Err(Error::InvalidArgument("scan grid needs min <= max".into()));
        }
        let re = linspace(self.re_min, self.re_max, self.re_steps);
        let im = linspace(self.im_min, self.im_max, self.im_steps);
        Ok(im
            .iter()
            .flat_map(|&b| re.iter().map(move |&a| Complex64::new(a, b)))
            .collect())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanRow {
    /// The nonzero coordinate of the character.
    pub gamma: Complex64,
    pub axis: Axis,
    pub homology: Result<Homology, String>,
}

/// Homology at every grid point of one axis, evaluated in parallel and
/// returned in grid order; per-point failures stay in their row.
pub fn spectrum_scan(p: &OperatorPair, axis: Axis, grid: &ScanGrid, rank_tol: f64) -> Result<Vec<ScanRow>> {
    let points = grid.points()?;
    Ok(points
        .par_iter()
        .map(|&g| {
            let (gx, gy) = match axis {
                Axis::X => (g, ZERO),
                Axis::Y => (ZERO, g),
            };
            let homology = build(p, gx, gy)
                .and_then(|c| homology_dims(&c, rank_tol))
                .map_err(|e| e.to_string());
            ScanRow {
                gamma: g,
                axis,
                homology,
            }
        })
        .collect())
}

pub const SCAN_CSV_HEADER: &str = "g_re,g_im,axis,h0,h1,h2,member,stable";

/// CSV with columns [`SCAN_CSV_HEADER`]; a failed row leaves the homology
/// columns empty and reports `error` in the stability column.
pub fn scan_to_csv(rows: &[ScanRow]) -> String {
    let mut out = String::from(SCAN_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = write!(out, "{},{},{},", r.gamma.re, r.gamma.im, r.axis);
        match &r.homology {
            Ok(h) => {
                let _ = writeln!(out, "{},{},{},{},{}", h.h0, h.h1, h.h2, h.member(), h.stable);
            }
            Err(_) => out.push_str(",,,,error\n"),
        }
    }
    out
}
