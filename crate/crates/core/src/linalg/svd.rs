use num_complex::Complex64;

use super::Matrix;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 80;

/// Singular values in descending order, by one-sided (Hestenes) Jacobi
/// rotations. Works on the adjoint when the matrix is wide so that the
/// orthogonalized columns are never more numerous than the rows.
pub fn singular_values(a: &Matrix) -> Result<Vec<f64>> {
    let work = if a.rows() < a.cols() { a.adjoint() } else { a.clone() };
    let (m, n) = (work.rows(), work.cols());
    if n == 0 {
        return Ok(Vec::new());
    }
    // column-major copy: columns are what get rotated
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| (0..m).map(|i| work[(i, j)]).collect()).collect();
    let tol = f64::EPSILON * m as f64;

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (alpha, beta, gamma) = {
                    let (cp, cq) = (&cols[p], &cols[q]);
                    let alpha: f64 = cp.iter().map(|z| z.norm_sqr()).sum();
                    let beta: f64 = cq.iter().map(|z| z.norm_sqr()).sum();
                    let gamma: Complex64 = cp.iter().zip(cq).map(|(a, b)| a.conj() * b).sum();
                    (alpha, beta, gamma)
                };
                let g = gamma.norm();
                if g == 0.0 || g <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (left, right) = cols.split_at_mut(q);
                let (cp, cq) = (&mut left[p], &mut right[0]);
                for (u, v) in cp.iter_mut().zip(cq.iter_mut()) {
                    let vq = *v * phase.conj();
                    let up = *u;
                    *u = up * c - vq * s;
                    *v = (up * s + vq * c) * phase;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    let mut sv: Vec<f64> = cols
        .iter()
        .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    if !converged {
        return Err(Error::NoConvergence {
            routine: "jacobi svd",
            iterations: MAX_SWEEPS,
            partial: sv.iter().map(|&s| Complex64::new(s, 0.0)).collect(),
        });
    }
    Ok(sv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_singular_values() {
        let d = Matrix::from_diag(&[
            Complex64::new(0.0, -3.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
        ]);
        let sv = singular_values(&d).unwrap();
        assert_eq!(sv.len(), 3);
        assert!((sv[0] - 3.0).abs() < 1e-15);
        assert!((sv[1] - 1.0).abs() < 1e-15);
        assert_eq!(sv[2], 0.0);
    }

    #[test]
    fn rank_one_outer_product() {
        // u v^H with |u| = sqrt(5), |v| = sqrt(2)
        let u = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 2.0)];
        let v = [
            Complex64::new(1.0, 1.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ];
        let m = Matrix::from_fn(2, 3, |i, j| u[i] * v[j].conj());
        let sv = singular_values(&m).unwrap();
        assert_eq!(sv.len(), 2);
        assert!((sv[0] - 10f64.sqrt()).abs() < 1e-14);
        assert!(sv[1] < 1e-15);
    }

    #[test]
    fn frobenius_norm_preserved() {
        let m = Matrix::from_fn(6, 4, |i, j| {
            Complex64::new(((i * 7 + j * 3) % 5) as f64 - 2.0, ((i + 2 * j) % 3) as f64)
        });
        let sv = singular_values(&m).unwrap();
        let fro: f64 = sv.iter().map(|s| s * s).sum::<f64>().sqrt();
        assert!((fro - m.frobenius_norm()).abs() < 1e-12 * fro);
    }
}
