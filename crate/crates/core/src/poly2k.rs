//! Univariate polynomials over `Z/2^k`, truncated above a fixed degree cap.
//!
//! A [`Modulus`] fixes both the coefficient ring `Z/2^k` and the cap `d`:
//! terms of degree at most `d` are kept ("lower" terms), everything above is
//! dropped as soon as it is produced. Coefficients are stored as canonical
//! representatives in `[0, 2^k)`, so all arithmetic is plain wrapping `u64`
//! arithmetic followed by a mask.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Coefficient modulus `2^k` together with the degree cap `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Modulus {
    bits: u32,
    cap: usize,
}

impl Modulus {
    pub fn new(bits: u32, cap: usize) -> Result<Self> {
        if bits == 0 || bits > 64 {
            return Err(Error::InvalidModulus(bits));
        }
        Ok(Modulus { bits, cap })
    }

    /// The exponent `k` of the modulus `2^k`.
    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// The degree cap `d`.
    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn with_bits(self, bits: u32) -> Result<Self> {
        Modulus::new(bits, self.cap)
    }

    pub fn with_cap(self, cap: usize) -> Self {
        Modulus { bits: self.bits, cap }
    }

    #[inline]
    pub fn mask(&self) -> u64 {
        if self.bits == 64 {
            u64::MAX
        } else {
            (1u64 << self.bits) - 1
        }
    }

    /// Canonical representative of a signed integer.
    #[inline]
    pub fn from_signed(&self, value: i64) -> u64 {
        (value as u64) & self.mask()
    }

    /// Representative in `[-2^(k-1), 2^(k-1))`.
    pub fn to_signed(&self, value: u64) -> i64 {
        let value = value & self.mask();
        if self.bits == 64 {
            return value as i64;
        }
        let half = 1u64 << (self.bits - 1);
        if value >= half {
            value as i64 - (1i64 << (self.bits - 1)) * 2
        } else {
            value as i64
        }
    }
}

/// Polynomial with coefficients in `Z/2^k` and degree at most `d`.
///
/// The coefficient vector is trimmed (no trailing zeros), so the zero
/// polynomial is an empty vector and equality is coefficient-wise.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncatedPoly {
    modulus: Modulus,
    coeffs: Vec<u64>,
}

impl TruncatedPoly {
    pub fn zero(modulus: Modulus) -> Self {
        TruncatedPoly { modulus, coeffs: Vec::new() }
    }

    pub fn one(modulus: Modulus) -> Self {
        Self::constant(modulus, 1)
    }

    pub fn constant(modulus: Modulus, value: i64) -> Self {
        Self::monomial(modulus, 0, value)
    }

    /// `value * x^degree`, or zero when `degree` exceeds the cap.
    pub fn monomial(modulus: Modulus, degree: usize, value: i64) -> Self {
        let c = modulus.from_signed(value);
        if degree > modulus.cap || c == 0 {
            return Self::zero(modulus);
        }
        let mut coeffs = vec![0; degree + 1];
        coeffs[degree] = c;
        TruncatedPoly { modulus, coeffs }
    }

    /// Builds a polynomial from coefficients listed lowest degree first,
    /// reducing each modulo `2^k` and dropping degrees above the cap.
    pub fn from_coeffs(modulus: Modulus, coeffs: &[u64]) -> Self {
        let mask = modulus.mask();
        let len = coeffs.len().min(modulus.cap + 1);
        let mut p = TruncatedPoly {
            modulus,
            coeffs: coeffs[..len].iter().map(|c| c & mask).collect(),
        };
        p.trim();
        p
    }

    pub fn from_signed_coeffs(modulus: Modulus, coeffs: &[i64]) -> Self {
        let raw: Vec<u64> = coeffs.iter().map(|&c| modulus.from_signed(c)).collect();
        Self::from_coeffs(modulus, &raw)
    }

    fn from_raw(modulus: Modulus, mut coeffs: Vec<u64>) -> Self {
        let mask = modulus.mask();
        coeffs.truncate(modulus.cap + 1);
        for c in coeffs.iter_mut() {
            *c &= mask;
        }
        let mut p = TruncatedPoly { modulus, coeffs };
        p.trim();
        p
    }

    #[inline]
    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    /// Coefficient of `x^degree` (zero beyond the stored range).
    pub fn coeff(&self, degree: usize) -> u64 {
        self.coeffs.get(degree).copied().unwrap_or(0)
    }

    /// Stored coefficients, lowest degree first, without trailing zeros.
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Highest degree with a nonzero coefficient.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Lowest-degree nonzero term as `(degree, coefficient)`.
    pub fn leading_term(&self) -> Option<(usize, u64)> {
        self.coeffs.iter().enumerate().find(|(_, &c)| c != 0).map(|(i, &c)| (i, c))
    }

    /// True iff every lower coefficient is even.
    pub fn is_even(&self) -> bool {
        self.coeffs.iter().all(|c| c & 1 == 0)
    }

    /// Lowest degree carrying an odd coefficient; `None` for even polynomials.
    pub fn lowest_odd_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| c & 1 == 1)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.modulus == other.modulus {
            Ok(())
        } else {
            Err(Error::ModulusMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let (long, short) = if self.coeffs.len() >= other.coeffs.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c = c.wrapping_add(*s);
        }
        Ok(Self::from_raw(self.modulus, coeffs))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(self.modulus);
        out.add_mul_assign(self, other);
        Ok(out)
    }

    /// `self += a * b`, truncated at the cap.
    ///
    /// Panics if the three moduli differ.
    pub fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        assert!(
            self.modulus == a.modulus && a.modulus == b.modulus,
            "modulus mismatch in add_mul_assign"
        );
        if a.is_zero() || b.is_zero() {
            return;
        }
        let limit = self.modulus.cap + 1;
        let (a, b) = if nonzero_count(&a.coeffs) <= nonzero_count(&b.coeffs) { (a, b) } else { (b, a) };
        let len = (a.coeffs.len() + b.coeffs.len() - 1).min(limit);
        if self.coeffs.len() < len {
            self.coeffs.resize(len, 0);
        }
        let b_nonzero = nonzero_count(&b.coeffs);
        if b_nonzero * 8 < b.coeffs.len() {
            sparse_mac(&mut self.coeffs[..len], &a.coeffs, &b.coeffs);
        } else if self.modulus.bits <= 16 {
            dense_mac::<u16>(&mut self.coeffs[..len], &a.coeffs, &b.coeffs);
        } else if self.modulus.bits <= 32 {
            dense_mac::<u32>(&mut self.coeffs[..len], &a.coeffs, &b.coeffs);
        } else {
            dense_mac::<u64>(&mut self.coeffs[..len], &a.coeffs, &b.coeffs);
        }
        let mask = self.modulus.mask();
        for c in self.coeffs.iter_mut() {
            *c &= mask;
        }
        self.trim();
    }

    /// Multiplies every coefficient by an integer.
    pub fn scale(&self, factor: i64) -> Self {
        let f = self.modulus.from_signed(factor);
        let coeffs = self.coeffs.iter().map(|c| c.wrapping_mul(f)).collect();
        Self::from_raw(self.modulus, coeffs)
    }

    /// The same polynomial read modulo `2^bits` (`bits` at most the current `k`).
    pub fn reduce_bits(&self, bits: u32) -> Result<Self> {
        if bits > self.modulus.bits {
            return Err(Error::InvalidModulus(bits));
        }
        let modulus = self.modulus.with_bits(bits)?;
        Ok(Self::from_raw(modulus, self.coeffs.clone()))
    }

    /// Same coefficients under a smaller degree cap.
    pub fn truncate_cap(&self, cap: usize) -> Self {
        Self::from_raw(self.modulus.with_cap(cap), self.coeffs.clone())
    }

    /// For an even polynomial over `Z/2^k`, the polynomial `f/2` over
    /// `Z/2^(k-1)`. Returns `None` when `self` is not even or `k = 1`.
    pub fn halve(&self) -> Option<Self> {
        if !self.is_even() || self.modulus.bits < 2 {
            return None;
        }
        let modulus = Modulus { bits: self.modulus.bits - 1, cap: self.modulus.cap };
        Some(Self::from_raw(modulus, self.coeffs.iter().map(|c| c >> 1).collect()))
    }

    /// `2 f` viewed over `Z/2^(k+1)`: the inverse of [`halve`](Self::halve).
    ///
    /// This is how a value known modulo `2^(k-1)` yields its double modulo `2^k`.
    pub fn double_lift(&self) -> Result<Self> {
        let modulus = self.modulus.with_bits(self.modulus.bits + 1)?;
        Ok(Self::from_raw(modulus, self.coeffs.iter().map(|c| c << 1).collect()))
    }

    /// Returns `c` with 0/1 coefficients such that `c * pivot + target` is even.
    ///
    /// Writes `pivot = x^m u (mod 2)` with `u(0) = 1` and divides `target / x^m`
    /// by `u` as a GF(2) power series truncated at degree `d - m`.
    pub fn series_div_mod2(target: &Self, pivot: &Self) -> Result<Self> {
        target.check(pivot)?;
        let modulus = target.modulus;
        let m = pivot
            .lowest_odd_degree()
            .ok_or(Error::SeriesDivision("pivot is even"))?;
        let t_low = match target.lowest_odd_degree() {
            None => return Ok(Self::zero(modulus)),
            Some(t) => t,
        };
        if t_low < m {
            return Err(Error::SeriesDivision("target has an odd term below the pivot's"));
        }
        let len = modulus.cap - m + 1;
        let bit = |p: &Self, i: usize| (p.coeff(i) & 1) as u8;
        let u: Vec<usize> = (1..len).filter(|&l| bit(pivot, l + m) == 1).collect();
        let mut c = vec![0u8; len];
        for i in 0..len {
            let mut acc = bit(target, i + m);
            for &l in u.iter().take_while(|&&l| l <= i) {
                acc ^= c[i - l];
            }
            c[i] = acc;
        }
        let coeffs: Vec<u64> = c.into_iter().map(u64::from).collect();
        Ok(Self::from_raw(modulus, coeffs))
    }
}

fn nonzero_count(coeffs: &[u64]) -> usize {
    coeffs.iter().filter(|&&c| c != 0).count()
}

/// `out += a * b` over the nonzero terms of `b`, dropping degrees past `out`.
fn sparse_mac(out: &mut [u64], a: &[u64], b: &[u64]) {
    let limit = out.len();
    let b_terms: Vec<(usize, u64)> = b.iter().copied().enumerate().filter(|&(_, c)| c != 0).collect();
    for (i, &ai) in a.iter().enumerate().take(limit) {
        if ai == 0 {
            continue;
        }
        for &(j, bj) in &b_terms {
            if i + j >= limit {
                break;
            }
            out[i + j] = out[i + j].wrapping_add(ai.wrapping_mul(bj));
        }
    }
}

/// Unsigned word narrow enough for the modulus; wrapping arithmetic on it
/// agrees with `u64` arithmetic modulo `2^k` for `k` up to its width.
trait Lane: Copy {
    fn from_u64(x: u64) -> Self;
    fn to_u64(self) -> u64;
    fn mul_add(self, a: Self, b: Self) -> Self;
}

macro_rules! lane {
    ($t:ty) => {
        impl Lane for $t {
            #[inline(always)]
            fn from_u64(x: u64) -> Self {
                x as $t
            }
            #[inline(always)]
            fn to_u64(self) -> u64 {
                self as u64
            }
            #[inline(always)]
            fn mul_add(self, a: Self, b: Self) -> Self {
                self.wrapping_add(a.wrapping_mul(b))
            }
        }
    };
}

lane!(u16);
lane!(u32);
lane!(u64);

/// `out += a * b` as contiguous row updates in lanes of type `T`, which
/// the compiler vectorizes.
fn dense_mac<T: Lane>(out: &mut [u64], a: &[u64], b: &[u64]) {
    let limit = out.len();
    let b: Vec<T> = b.iter().take(limit).map(|&c| T::from_u64(c)).collect();
    let mut acc: Vec<T> = out.iter().map(|&c| T::from_u64(c)).collect();
    for (i, &ai) in a.iter().enumerate().take(limit) {
        if ai == 0 {
            continue;
        }
        let ai = T::from_u64(ai);
        let span = (limit - i).min(b.len());
        for (o, &bj) in acc[i..i + span].iter_mut().zip(&b[..span]) {
            *o = o.mul_add(ai, bj);
        }
    }
    for (o, x) in out.iter_mut().zip(acc) {
        *o = x.to_u64();
    }
}

impl fmt::Debug for TruncatedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] mod 2^{} (d={})", self, self.modulus.bits, self.modulus.cap)
    }
}

/// Comma-separated coefficients, lowest degree first; `0` for the zero polynomial.
impl fmt::Display for TruncatedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", c)?;
        }
        Ok(())
    }
}

impl Add for &TruncatedPoly {
    type Output = TruncatedPoly;
    fn add(self, rhs: &TruncatedPoly) -> TruncatedPoly {
        self.try_add(rhs).expect("modulus mismatch")
    }
}

impl Sub for &TruncatedPoly {
    type Output = TruncatedPoly;
    fn sub(self, rhs: &TruncatedPoly) -> TruncatedPoly {
        self.try_sub(rhs).expect("modulus mismatch")
    }
}

impl Mul for &TruncatedPoly {
    type Output = TruncatedPoly;
    fn mul(self, rhs: &TruncatedPoly) -> TruncatedPoly {
        self.try_mul(rhs).expect("modulus mismatch")
    }
}

impl Neg for &TruncatedPoly {
    type Output = TruncatedPoly;
    fn neg(self) -> TruncatedPoly {
        let coeffs = self.coeffs.iter().map(|c| c.wrapping_neg()).collect();
        TruncatedPoly::from_raw(self.modulus, coeffs)
    }
}

impl TruncatedPoly {
    pub fn neg(&self) -> Self {
        -self
    }
}
