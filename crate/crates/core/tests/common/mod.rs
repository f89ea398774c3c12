//! Independent oracles shared by the integration targets.
#![allow(dead_code)]

use qplane_core::{Complex64, Matrix};

/// Rank by Gaussian elimination with complete pivoting; pivots at or below
/// `tol·max|aᵢⱼ|` count as zero.
pub fn elimination_rank(m: &Matrix, tol: f64) -> usize {
    let mut a = m.to_rows();
    let (rows, cols) = (m.rows(), m.cols());
    let cut = tol * m.max_abs();
    if cut == 0.0 {
        return 0;
    }
    let mut rank = 0;
    let mut col_used = vec![false; cols];
    for r in 0..rows.min(cols) {
        let mut best = (0.0, r, 0);
        for (i, row) in a.iter().enumerate().skip(r) {
            for (j, v) in row.iter().enumerate() {
                if !col_used[j] && v.norm() > best.0 {
                    best = (v.norm(), i, j);
                }
            }
        }
        if best.0 <= cut {
            break;
        }
        let (_, pi, pj) = best;
        a.swap(r, pi);
        col_used[pj] = true;
        let pivot = a[r][pj];
        let pivot_row = a[r].clone();
        for row in a.iter_mut().skip(r + 1) {
            let f = row[pj] / pivot;
            if f != Complex64::new(0.0, 0.0) {
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x -= f * p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// `ln(3/2) = 2 atanh(1/5)` summed until the terms vanish.
pub fn ln_three_halves() -> f64 {
    let mut sum = 0.0;
    let mut p = 0.2;
    let mut k = 0;
    while p > 1e-30 {
        sum += p / (2 * k + 1) as f64;
        p *= 0.04;
        k += 1;
    }
    2.0 * sum
}
