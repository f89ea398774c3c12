//! Eigenvalues of a general complex matrix: permutation/scaling balance,
//! Householder reduction to upper Hessenberg form, then single-shift
//! implicit QR with Wilkinson shifts and deflation.

use num_complex::Complex64;

use super::{abs1, Matrix};
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Eigenvalues of a square matrix, in no particular order.
///
/// Eigenvalues isolated by the balancing permutation are read off the
/// diagonal exactly, so triangular inputs return their diagonal verbatim.
pub fn eigenvalues(a: &Matrix) -> Result<Vec<Complex64>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            expected: "square matrix".into(),
            found: format!("{}x{}", a.rows(), a.cols()),
        });
    }
    if !a.is_finite() {
        return Err(Error::NonFinite("eigenvalue input"));
    }
    let n = a.rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut m = a.clone();
    let (lo, hi) = permute(&mut m);
    let mut out: Vec<Complex64> = (0..lo).chain(hi..n).map(|i| m[(i, i)]).collect();
    if hi > lo {
        let mut block = Matrix::from_fn(hi - lo, hi - lo, |i, j| m[(lo + i, lo + j)]);
        scale(&mut block);
        hessenberg(&mut block);
        out.extend(hessenberg_qr(block, &out)?);
    }
    Ok(out)
}

fn swap_sym(m: &mut Matrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    let n = m.rows();
    for j in 0..n {
        let t = m[(a, j)];
        m[(a, j)] = m[(b, j)];
        m[(b, j)] = t;
    }
    for i in 0..n {
        let t = m[(i, a)];
        m[(i, a)] = m[(i, b)];
        m[(i, b)] = t;
    }
}

/// Symmetric permutations isolating eigenvalues. Returns the half-open
/// active range `lo..hi`; diagonal entries outside it are eigenvalues.
fn permute(m: &mut Matrix) -> (usize, usize) {
    let mut lo = 0;
    let mut hi = m.rows();
    // rows whose off-diagonal part (inside the active block) is zero go last
    while let Some(j) = (lo..hi).rev().find(|&j| (lo..hi).all(|i| i == j || m[(j, i)] == ZERO)) {
        swap_sym(m, j, hi - 1);
        hi -= 1;
    }
    // columns with zero off-diagonal part go first
    while let Some(j) = (lo..hi).find(|&j| (lo..hi).all(|i| i == j || m[(i, j)] == ZERO)) {
        swap_sym(m, j, lo);
        lo += 1;
    }
    (lo, hi)
}

/// Diagonal similarity by powers of two to equalize row and column norms.
fn scale(m: &mut Matrix) {
    const RADIX: f64 = 2.0;
    let n = m.rows();
    loop {
        let mut changed = false;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += abs1(m[(j, i)]);
                    r += abs1(m[(i, j)]);
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= RADIX * RADIX;
            }
            g = r * RADIX;
            while c >= g {
                f /= RADIX;
                c /= RADIX * RADIX;
            }
            if (c + r) / f < 0.95 * s {
                changed = true;
                for j in 0..n {
                    m[(i, j)] /= f;
                    m[(j, i)] *= f;
                }
            }
        }
        if !changed {
            break;
        }
    }
}

/// In-place Householder reduction to upper Hessenberg form.
fn hessenberg(m: &mut Matrix) {
    let n = m.rows();
    for k in 0..n.saturating_sub(2) {
        let tail_norm: f64 = (k + 2..n).map(|i| m[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if tail_norm == 0.0 {
            continue;
        }
        let x0 = m[(k + 1, k)];
        let norm = (x0.norm_sqr() + tail_norm * tail_norm).sqrt();
        let phase = if x0 == ZERO {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * norm;
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| m[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in &mut v {
            *z /= vnorm;
        }
        // left: rows k+1.., H ← (I − 2vvᴴ)H
        for j in 0..n {
            let dot: Complex64 = v.iter().enumerate().map(|(t, vt)| vt.conj() * m[(k + 1 + t, j)]).sum();
            for (t, vt) in v.iter().enumerate() {
                m[(k + 1 + t, j)] -= *vt * dot * 2.0;
            }
        }
        // right: columns k+1.., H ← H(I − 2vvᴴ)
        for i in 0..n {
            let dot: Complex64 = v.iter().enumerate().map(|(t, vt)| m[(i, k + 1 + t)] * vt).sum();
            for (t, vt) in v.iter().enumerate() {
                m[(i, k + 1 + t)] -= dot * vt.conj() * 2.0;
            }
        }
        m[(k + 1, k)] = alpha;
        for i in k + 2..n {
            m[(i, k)] = ZERO;
        }
    }
}

/// Unitary rotation `[c s; −s̄ c]` mapping `(a, b)` to `(r, 0)`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    if b == ZERO {
        return (1.0, ZERO);
    }
    if a == ZERO {
        return (0.0, b.conj() / b.norm());
    }
    let an = a.norm();
    let r = an.hypot(b.norm());
    (an / r, (a / an) * b.conj() / r)
}

fn eig2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> (Complex64, Complex64) {
    let half_tr = (a + d) * 0.5;
    let disc = ((a - d) * (a - d) * 0.25 + b * c).sqrt();
    (half_tr + disc, half_tr - disc)
}

fn hessenberg_qr(mut h: Matrix, found: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = h.rows();
    let budget = 30 * n.max(10);
    let eps = f64::EPSILON;
    let small = f64::MIN_POSITIVE * (n as f64 / eps);
    let mut out = Vec::with_capacity(n);
    let mut hi = n; // active block is l..hi
    let mut its = 0usize;
    let mut total = 0usize;

    while hi > 0 {
        let last = hi - 1;
        let mut l = last;
        while l > 0 {
            let sub = abs1(h[(l, l - 1)]);
            if sub <= small {
                h[(l, l - 1)] = ZERO;
                break;
            }
            let mut tst = abs1(h[(l - 1, l - 1)]) + abs1(h[(l, l)]);
            if tst == 0.0 {
                if l >= 2 {
                    tst += abs1(h[(l - 1, l - 2)]);
                }
                if l < last {
                    tst += abs1(h[(l + 1, l)]);
                }
            }
            if sub <= eps * tst {
                h[(l, l - 1)] = ZERO;
                break;
            }
            l -= 1;
        }
        if l == last {
            out.push(h[(last, last)]);
            hi -= 1;
            its = 0;
            continue;
        }
        if l + 1 == last {
            let (e1, e2) = eig2(h[(l, l)], h[(l, last)], h[(last, l)], h[(last, last)]);
            out.push(e1);
            out.push(e2);
            hi -= 2;
            its = 0;
            continue;
        }
        if total >= budget {
            let mut partial = found.to_vec();
            partial.extend_from_slice(&out);
            return Err(Error::NoConvergence {
                routine: "hessenberg qr",
                iterations: total,
                partial,
            });
        }
        let shift = match its {
            10 => h[(l, l)] + h[(l + 1, l)].re.abs() * 0.75,
            20 => h[(last, last)] + h[(last, last - 1)].re.abs() * 0.75,
            _ => {
                let d = h[(last, last)];
                let (e1, e2) = eig2(h[(last - 1, last - 1)], h[(last - 1, last)], h[(last, last - 1)], d);
                if (e1 - d).norm() <= (e2 - d).norm() {
                    e1
                } else {
                    e2
                }
            }
        };
        qr_sweep(&mut h, l, last, shift);
        its += 1;
        total += 1;
    }
    Ok(out)
}

/// One implicit single-shift bulge chase over the block `l..=last`.
fn qr_sweep(h: &mut Matrix, l: usize, last: usize, shift: Complex64) {
    let mut x = h[(l, l)] - shift;
    let mut y = h[(l + 1, l)];
    for k in l..last {
        let (c, s) = givens(x, y);
        let col0 = if k == l { l } else { k - 1 };
        for j in col0..=last {
            let a = h[(k, j)];
            let b = h[(k + 1, j)];
            h[(k, j)] = a * c + s * b;
            h[(k + 1, j)] = -s.conj() * a + b * c;
        }
        let row_end = (k + 2).min(last);
        for i in l..=row_end {
            let a = h[(i, k)];
            let b = h[(i, k + 1)];
            h[(i, k)] = a * c + b * s.conj();
            h[(i, k + 1)] = -a * s + b * c;
        }
        if k > l {
            h[(k + 1, k - 1)] = ZERO;
        }
        if k + 1 < last {
            x = h[(k + 1, k)];
            y = h[(k + 2, k)];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted_by_re(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn identity_eigenvalues() {
        let ev = eigenvalues(&Matrix::identity(5)).unwrap();
        assert_eq!(ev, vec![Complex64::new(1.0, 0.0); 5]);
    }

    #[test]
    fn lower_triangular_is_exact() {
        let m = Matrix::from_fn(6, 6, |i, j| {
            if i >= j {
                Complex64::new(0.3 + i as f64, (i + j) as f64)
            } else {
                ZERO
            }
        });
        let ev = sorted_by_re(eigenvalues(&m).unwrap());
        let want = sorted_by_re(m.diagonal());
        assert_eq!(ev, want);
    }

    #[test]
    fn companion_matrix_roots() {
        // x^3 - 6x^2 + 11x - 6 = (x-1)(x-2)(x-3)
        let r = |v: f64| Complex64::new(v, 0.0);
        let m = Matrix::from_rows(vec![
            vec![r(6.0), r(-11.0), r(6.0)],
            vec![r(1.0), r(0.0), r(0.0)],
            vec![r(0.0), r(1.0), r(0.0)],
        ])
        .unwrap();
        let ev = sorted_by_re(eigenvalues(&m).unwrap());
        for (e, w) in ev.iter().zip([1.0, 2.0, 3.0]) {
            assert!((e - r(w)).norm() < 1e-12, "{e} vs {w}");
        }
    }

    #[test]
    fn rotation_has_conjugate_pair() {
        let r = |v: f64| Complex64::new(v, 0.0);
        let m = Matrix::from_rows(vec![vec![r(0.0), r(-1.0)], vec![r(1.0), r(0.0)]]).unwrap();
        let ev = sorted_by_re(eigenvalues(&m).unwrap());
        let mut ims: Vec<f64> = ev.iter().map(|z| z.im).collect();
        ims.sort_by(f64::total_cmp);
        assert!((ims[0] + 1.0).abs() < 1e-14 && (ims[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn dense_similarity_preserves_spectrum() {
        // A = V D V⁻¹ with V unit upper triangular, so V⁻¹ is easy to form
        let n = 8;
        let d: Vec<Complex64> = (0..n).map(|k| Complex64::new(k as f64 - 3.0, 0.5 * k as f64)).collect();
        let v = Matrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(1.0, 0.0)
            } else if i < j {
                Complex64::new(0.3 * ((i + 2 * j) % 3) as f64, -0.2)
            } else {
                ZERO
            }
        });
        let vinv = super::super::Lu::factor(&v)
            .unwrap()
            .solve(&Matrix::identity(n))
            .unwrap();
        let a = &(&v * &Matrix::from_diag(&d)) * &vinv;
        let mut ev = eigenvalues(&a).unwrap();
        for want in &d {
            let (idx, dist) = ev
                .iter()
                .enumerate()
                .map(|(i, e)| (i, (e - want).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            assert!(dist < 1e-10, "{want}: {dist}");
            ev.swap_remove(idx);
        }
    }

    #[test]
    fn rectangular_rejected() {
        assert!(eigenvalues(&Matrix::zeros(2, 3)).is_err());
    }
}
