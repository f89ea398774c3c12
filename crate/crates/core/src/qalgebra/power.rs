use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{qmul, QSeries};
use crate::error::{Error, Result};

/// Hard cap on the number of index tuples the closed-form power enumerates.
pub const FORMULA_TUPLE_CAP: u128 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PowMethod {
    /// `f·f·…·f` by repeated normal-ordered products.
    Repeated,
    /// Closed form `fˢ = Σ a_{IK} q^{⟨I*,K₍ₛ₎⟩} x^{|I|} y^{|K|}` over support tuples.
    Formula,
}

pub fn qpow(f: &QSeries, s: usize, method: PowMethod) -> Result<QSeries> {
    qpow_with_cap(f, s, method, FORMULA_TUPLE_CAP)
}

pub fn qpow_with_cap(f: &QSeries, s: usize, method: PowMethod, cap: u128) -> Result<QSeries> {
    if s == 0 {
        return Err(Error::InvalidArgument("power must be at least 1".into()));
    }
    match method {
        PowMethod::Repeated => {
            let mut acc = f.clone();
            for _ in 1..s {
                acc = qmul(&acc, f)?;
            }
            Ok(acc)
        }
        PowMethod::Formula => formula_power(f, s, cap),
    }
}

fn formula_power(f: &QSeries, s: usize, cap: u128) -> Result<QSeries> {
    let support: Vec<(usize, usize, Complex64)> = f.terms().collect();
    let m = support.len() as u128;
    let needed = (0..s).try_fold(1u128, |acc, _| acc.checked_mul(m)).unwrap_or(u128::MAX);
    if needed > cap {
        return Err(Error::CapExceeded { needed, cap });
    }
    let d = f.degree();
    let mut out = QSeries::zero(f.q(), d)?;
    if f.is_lossy() {
        out.mark_lossy();
    }
    if support.is_empty() {
        return Ok(out);
    }
    // odometer over s-tuples of support positions
    let mut choice = vec![0usize; s];
    loop {
        let (mut big_i, mut big_k) = (0usize, 0usize);
        let mut coeff = Complex64::new(1.0, 0.0);
        for &c in &choice {
            let (i, k, a) = support[c];
            big_i += i;
            big_k += k;
            coeff *= a;
        }
        if big_i <= d && big_k <= d {
            // ⟨I*, K₍ₛ₎⟩ = Σ_{t<s} (i_{t+1} + … + i_s)·k_t
            let mut exponent = 0u64;
            let mut suffix = 0usize;
            for t in (0..s).rev() {
                let (i, k, _) = support[choice[t]];
                exponent += (suffix * k) as u64;
                suffix += i;
            }
            out.add_to(big_i, big_k, coeff * f.q().powu(exponent as u32));
        } else if coeff != Complex64::new(0.0, 0.0) {
            out.mark_lossy();
        }
        let mut pos = s;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            choice[pos] += 1;
            if choice[pos] < support.len() {
                break;
            }
            choice[pos] = 0;
        }
    }
}
