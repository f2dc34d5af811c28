//! Bit-packed GF(2) power series truncated at a fixed degree.

use alloc::vec;
use alloc::vec::Vec;

/// Coefficients of degrees `0..=cap`, one bit each, in `words` 64-bit words.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub(crate) struct Series {
    bits: Vec<u64>,
}

#[inline]
fn words_for(cap: usize) -> usize {
    cap / 64 + 1
}

impl Series {
    pub fn zero(cap: usize) -> Self {
        Series { bits: vec![0; words_for(cap)] }
    }

    /// Parities of `coeffs[0..=cap]`.
    pub fn from_parities(coeffs: &[u64], cap: usize) -> Self {
        let mut s = Self::zero(cap);
        for (word, chunk) in s.bits.iter_mut().zip(coeffs[..coeffs.len().min(cap + 1)].chunks(64)) {
            *word = chunk.iter().enumerate().fold(0, |w, (i, &c)| w | (c & 1) << i);
        }
        s
    }

    /// Placeholder with no storage.
    pub fn empty() -> Self {
        Series::default()
    }

    pub fn one(cap: usize) -> Self {
        let mut s = Self::zero(cap);
        s.bits[0] = 1;
        s
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.bits.get(i / 64).is_some_and(|w| w >> (i % 64) & 1 == 1)
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn lowest(&self) -> Option<usize> {
        self.bits
            .iter()
            .position(|&w| w != 0)
            .map(|i| i * 64 + self.bits[i].trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            core::iter::from_fn(move || {
                (w != 0).then(|| {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    i * 64 + b
                })
            })
        })
    }

    fn count(&self) -> u32 {
        self.bits.iter().map(|w| w.count_ones()).sum()
    }

    /// Coefficients of degree `shift..` moved down to `0..`.
    pub fn shr(&self, shift: usize) -> Self {
        let n = self.bits.len();
        let mut out = vec![0; n];
        let (ws, bs) = (shift / 64, shift % 64);
        for (w, slot) in out.iter_mut().enumerate() {
            let lo = w + ws;
            if lo >= n {
                break;
            }
            let mut v = self.bits[lo] >> bs;
            if bs > 0 && lo + 1 < n {
                v |= self.bits[lo + 1] << (64 - bs);
            }
            *slot = v;
        }
        Series { bits: out }
    }

    /// Clears every coefficient above `cap`.
    pub fn truncate(&mut self, cap: usize) {
        let w = cap / 64;
        if w >= self.bits.len() {
            return;
        }
        let b = cap % 64;
        if b < 63 {
            self.bits[w] &= (1u64 << (b + 1)) - 1;
        }
        for x in &mut self.bits[w + 1..] {
            *x = 0;
        }
    }

    /// `self += x^shift * b`, truncated to the common length.
    #[inline]
    fn xor_shifted(&mut self, b: &Series, shift: usize) {
        let n = self.bits.len();
        let (ws, bs) = (shift / 64, shift % 64);
        if ws >= n {
            return;
        }
        let out = &mut self.bits[ws..];
        if bs == 0 {
            for (o, &v) in out.iter_mut().zip(&b.bits) {
                *o ^= v;
            }
        } else {
            let mut carry = 0u64;
            for (o, &v) in out.iter_mut().zip(&b.bits) {
                *o ^= (v << bs) | carry;
                carry = v >> (64 - bs);
            }
        }
    }

    /// `self += a * b`. All three share one length; the caller truncates.
    pub fn add_mul(&mut self, a: &Series, b: &Series) {
        let (a, b) = if a.count() <= b.count() { (a, b) } else { (b, a) };
        for i in a.ones() {
            self.xor_shifted(b, i);
        }
    }

    /// `1 / u` for `u(0) = 1`, up to degree `cap`, by Newton steps: in
    /// characteristic 2, `v <- u v^2` doubles the number of correct terms.
    pub fn inverse(u: &Series, cap: usize) -> Series {
        debug_assert!(u.get(0));
        let mut v = Series::one(cap);
        let mut known = 1;
        while known <= cap {
            known = (2 * known).min(cap + 1);
            let mut square = Series::zero(cap);
            for i in v.ones().take_while(|&i| 2 * i < known) {
                square.bits[2 * i / 64] |= 1 << (2 * i % 64);
            }
            let mut next = Series::zero(cap);
            next.add_mul(u, &square);
            next.truncate(known - 1);
            v = next;
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(cap: usize, ones: &[usize]) -> Series {
        let mut coeffs = vec![0u64; cap + 1];
        for &i in ones {
            coeffs[i] = 1;
        }
        Series::from_parities(&coeffs, cap)
    }

    #[test]
    fn product_and_truncation() {
        let cap = 130;
        let a = series(cap, &[0, 1, 70]);
        let b = series(cap, &[1, 64]);
        let mut out = Series::zero(cap);
        out.add_mul(&a, &b);
        out.truncate(cap);
        assert_eq!(out.ones().collect::<Vec<_>>(), vec![1, 2, 64, 65, 71]);
    }

    #[test]
    fn inverse_times_series_is_one() {
        let cap = 200;
        let u = series(cap, &[0, 3, 5, 64, 127]);
        let v = Series::inverse(&u, cap);
        let mut p = Series::zero(cap);
        p.add_mul(&u, &v);
        p.truncate(cap);
        assert_eq!(p, Series::one(cap));
    }

    #[test]
    fn shifting_down() {
        let s = series(150, &[3, 64, 140]);
        assert_eq!(s.shr(3).ones().collect::<Vec<_>>(), vec![0, 61, 137]);
        assert_eq!(s.shr(70).ones().collect::<Vec<_>>(), vec![70]);
        assert_eq!(s.lowest(), Some(3));
    }
}
