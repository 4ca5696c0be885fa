//! 256-bin histograms and their Shannon entropy in bits.

use core::ops::{AddAssign, Sub};

pub const BINS: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum EntropyError {
    #[error("entropy of an empty histogram is undefined")]
    EmptyHistogram,
}

/// Occurrence counts of 8-bit symbols.
#[derive(Clone, PartialEq, Eq)]
pub struct Histogram {
    counts: [u64; BINS],
    total: u64,
}

impl core::fmt::Debug for Histogram {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_map()
            .entries(self.counts.iter().enumerate().filter(|(_, &c)| c > 0))
            .finish()
    }
}

impl Default for Histogram {
    fn default() -> Self {
        Self::new()
    }
}

impl Histogram {
    pub const fn new() -> Self {
        Self { counts: [0; BINS], total: 0 }
    }

    pub fn from_symbols<'a>(symbols: impl IntoIterator<Item = &'a u8>) -> Self {
        let mut h = Self::new();
        for &s in symbols {
            h.add(s);
        }
        h
    }

    #[inline]
    pub fn add(&mut self, symbol: u8) {
        self.counts[symbol as usize] += 1;
        self.total += 1;
    }

    pub fn set(&mut self, symbol: u8, count: u64) {
        self.total = self.total - self.counts[symbol as usize] + count;
        self.counts[symbol as usize] = count;
    }

    #[inline]
    pub fn count(&self, symbol: u8) -> u64 {
        self.counts[symbol as usize]
    }

    #[inline]
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn counts(&self) -> &[u64; BINS] {
        &self.counts
    }

    /// `self - other`, bin by bin. `other` must be a sub-multiset of `self`.
    pub fn difference(&self, other: &Histogram) -> Histogram {
        let mut out = Histogram::new();
        for k in 0..BINS {
            out.counts[k] = self.counts[k] - other.counts[k];
        }
        out.total = self.total - other.total;
        out
    }
}

impl AddAssign<&Histogram> for Histogram {
    fn add_assign(&mut self, rhs: &Histogram) {
        for k in 0..BINS {
            self.counts[k] += rhs.counts[k];
        }
        self.total += rhs.total;
    }
}

impl Sub<&Histogram> for &Histogram {
    type Output = Histogram;

    fn sub(self, rhs: &Histogram) -> Histogram {
        self.difference(rhs)
    }
}

/// Shannon entropy `-sum p_k log2 p_k` over the occupied bins, in bits per
/// symbol. Always in `[0, 8]` and never `-0.0`.
pub fn entropy(hist: &Histogram) -> Result<f64, EntropyError> {
    if hist.total == 0 {
        return Err(EntropyError::EmptyHistogram);
    }
    Ok(entropy_nonempty(hist))
}

#[inline]
pub(crate) fn entropy_nonempty(hist: &Histogram) -> f64 {
    let n = hist.total as f64;
    let mut h = 0.0;
    for &c in hist.counts.iter() {
        if c > 0 {
            let p = c as f64 / n;
            h -= p * libm::log2(p);
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hist(pairs: &[(u8, u64)]) -> Histogram {
        let mut h = Histogram::new();
        for &(s, c) in pairs {
            h.set(s, c);
        }
        h
    }

    #[test]
    fn single_symbol_is_zero() {
        let h = entropy(&hist(&[(128, 16)])).unwrap();
        assert_eq!(h, 0.0);
        assert!(h.is_sign_positive());
    }

    #[test]
    fn two_equal_symbols_is_one_bit() {
        assert_eq!(entropy(&hist(&[(0, 8), (255, 8)])).unwrap(), 1.0);
    }

    #[test]
    fn skewed_pair() {
        // -(0.75 log2 0.75 + 0.25 log2 0.25)
        let expected = -(0.75f64 * 0.75f64.log2() + 0.25f64 * 0.25f64.log2());
        assert!((expected - 0.811_278_124_459_132_9).abs() < 1e-15);
        let h = entropy(&hist(&[(0, 12), (255, 4)])).unwrap();
        assert!((h - expected).abs() < 1e-12);
    }

    #[test]
    fn uniform_over_all_bins_is_eight() {
        let mut h = Histogram::new();
        for s in 0..=255u8 {
            h.add(s);
        }
        assert!((entropy(&h).unwrap() - 8.0).abs() < 1e-12);
    }

    #[test]
    fn empty_is_an_error() {
        assert_eq!(entropy(&Histogram::new()), Err(EntropyError::EmptyHistogram));
    }

    #[test]
    fn difference_undoes_accumulation() {
        let a = Histogram::from_symbols(&[1, 2, 2, 3]);
        let b = Histogram::from_symbols(&[2, 3]);
        let mut sum = a.clone();
        sum += &b;
        assert_eq!(&sum - &b, a);
        assert_eq!((&sum - &b).total(), 4);
    }
}
