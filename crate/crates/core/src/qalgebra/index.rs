//! Multi-index bookkeeping for powers of q-series.

use crate::error::{Error, Result};

/// An `s`-tuple of nonnegative integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(entries: Vec<usize>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidArgument("multi-index needs length >= 1".into()));
        }
        Ok(Self(entries))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    /// `|I| = Σ iₜ`.
    pub fn order(&self) -> usize {
        self.0.iter().sum()
    }

    /// `I⁽ᵗ⁾ = (i_{t+1}, …, i_s)` for `1 ≤ t ≤ s − 1`.
    pub fn tail(&self, t: usize) -> &[usize] {
        &self.0[t..]
    }

    /// `I* = (|I⁽¹⁾|, …, |I⁽ˢ⁻¹⁾|)`.
    pub fn suffix_orders(&self) -> Vec<usize> {
        (1..self.0.len()).map(|t| self.tail(t).iter().sum()).collect()
    }

    /// `K₍ₛ₎ = (k₁, …, k_{s−1})`.
    pub fn truncated(&self) -> &[usize] {
        &self.0[..self.0.len() - 1]
    }
}

/// Exponent of `q` picked up when the word `x^{i₁}y^{k₁}⋯x^{i_s}y^{k_s}` is
/// brought to normal order: `⟨I*, K₍ₛ₎⟩ = Σ_{t<s} |I⁽ᵗ⁾| kₜ`.
pub fn q_exponent(i: &MultiIndex, k: &MultiIndex) -> Result<u64> {
    if i.len() != k.len() {
        return Err(Error::DimensionMismatch {
            expected: format!("multi-index of length {}", i.len()),
            found: format!("length {}", k.len()),
        });
    }
    Ok(i.suffix_orders()
        .iter()
        .zip(k.truncated())
        .map(|(a, b)| (*a as u64) * (*b as u64))
        .sum())
}

/// Result of moving `y^{k₁}` past `x^{i₂}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NormalOrdered {
    pub exponent: u64,
    pub i: usize,
    pub k: usize,
}

/// `x^{i₁}y^{k₁}·x^{i₂}y^{k₂} = q^{i₂k₁} x^{i₁+i₂} y^{k₁+k₂}`.
pub fn normal_order(i1: usize, k1: usize, i2: usize, k2: usize) -> NormalOrdered {
    NormalOrdered {
        exponent: (i2 as u64) * (k1 as u64),
        i: i1 + i2,
        k: k1 + k2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(v: &[usize]) -> MultiIndex {
        MultiIndex::new(v.to_vec()).unwrap()
    }

    #[test]
    fn exponent_examples() {
        assert_eq!(q_exponent(&mi(&[7]), &mi(&[3])).unwrap(), 0);
        assert_eq!(q_exponent(&mi(&[1, 1]), &mi(&[1, 1])).unwrap(), 1);
        assert_eq!(q_exponent(&mi(&[2, 0, 1]), &mi(&[1, 3, 0])).unwrap(), 4);
        assert!(q_exponent(&mi(&[1, 2]), &mi(&[1])).is_err());
        assert!(MultiIndex::new(vec![]).is_err());
    }

    #[test]
    fn index_pieces() {
        let i = mi(&[2, 0, 1]);
        assert_eq!(i.order(), 3);
        assert_eq!(i.suffix_orders(), vec![1, 1]);
        assert_eq!(i.truncated(), &[2, 0]);
        assert_eq!(i.tail(1), &[0, 1]);
    }

    #[test]
    fn normal_order_examples() {
        assert_eq!(
            normal_order(0, 1, 1, 0),
            NormalOrdered {
                exponent: 1,
                i: 1,
                k: 1
            }
        );
        assert_eq!(normal_order(3, 0, 2, 5).exponent, 0);
        assert_eq!(normal_order(2, 4, 0, 1).exponent, 0);
        assert_eq!(
            normal_order(1, 1, 1, 1),
            NormalOrdered {
                exponent: 1,
                i: 2,
                k: 2
            }
        );
    }

    #[test]
    fn monomial_power_exponent() {
        // (x^i y^k)^s picks up i·k·s(s−1)/2
        for s in 1..6usize {
            let (i, k) = (2usize, 3usize);
            let e = q_exponent(&mi(&vec![i; s]), &mi(&vec![k; s])).unwrap();
            assert_eq!(e as usize, i * k * s * (s - 1) / 2);
        }
    }
}
