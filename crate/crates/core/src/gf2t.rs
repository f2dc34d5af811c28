//! Arithmetic in GF(2^t), t <= 20, via log/antilog tables.

use alloc::vec;
use alloc::vec::Vec;

/// Primitive polynomials over GF(2), indexed by degree (bit `t` set).
const PRIMITIVE: [u32; 21] = [
    0, 0x3, 0x7, 0xB, 0x13, 0x25, 0x43, 0x83, 0x11D, 0x211, 0x409, 0x805, 0x1053, 0x201B, 0x4443,
    0x8003, 0x1100B, 0x20009, 0x40081, 0x80027, 0x100009,
];

pub const MAX_DEGREE: u32 = 20;

#[derive(Debug, Clone)]
pub struct Gf2t {
    degree: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl Gf2t {
    /// Field with `2^degree` elements. Panics for degrees outside `1..=20`.
    pub fn new(degree: u32) -> Self {
        assert!((1..=MAX_DEGREE).contains(&degree), "unsupported field degree {degree}");
        let order = (1usize << degree) - 1;
        let poly = PRIMITIVE[degree as usize];
        let mut exp = vec![0u32; 2 * order];
        let mut log = vec![0u32; order + 1];
        let mut x = 1u32;
        for (i, e) in exp.iter_mut().take(order).enumerate() {
            *e = x;
            log[x as usize] = i as u32;
            x <<= 1;
            if x >> degree != 0 {
                x ^= poly;
            }
        }
        exp.copy_within(..order, order);
        Gf2t { degree, exp, log }
    }

    /// Smallest field with at least `points` elements.
    pub fn with_at_least(points: usize) -> Option<Self> {
        let degree = (1..=MAX_DEGREE).find(|&t| (1usize << t) >= points)?;
        Some(Self::new(degree))
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn size(&self) -> usize {
        1 << self.degree
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
        }
    }

    /// Multiplicative inverse; panics on zero.
    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero");
        let order = self.exp.len() / 2;
        self.exp[(order - self.log[a as usize] as usize) % order]
    }

    /// Determinant of a square matrix given row-major; consumes the buffer.
    pub fn determinant(&self, mut m: Vec<u32>, size: usize) -> u32 {
        let mut det = 1u32;
        for col in 0..size {
            let Some(piv) = (col..size).find(|&r| m[r * size + col] != 0) else {
                return 0;
            };
            if piv != col {
                for c in 0..size {
                    m.swap(piv * size + c, col * size + c);
                }
            }
            let p = m[col * size + col];
            det = self.mul(det, p);
            let pinv = self.inv(p);
            for r in col + 1..size {
                let f = self.mul(m[r * size + col], pinv);
                if f == 0 {
                    continue;
                }
                for c in col..size {
                    let v = self.mul(f, m[col * size + c]);
                    m[r * size + c] ^= v;
                }
            }
        }
        det
    }

    /// Coefficients (lowest first) of the unique polynomial of degree below
    /// `values.len()` taking `values[i]` at the field element `i`.
    pub fn interpolate(&self, values: &[u32]) -> Vec<u32> {
        let n = values.len();
        assert!(n <= self.size(), "not enough distinct points");
        // Newton divided differences; subtraction is xor in characteristic 2.
        let mut dd = values.to_vec();
        for level in 1..n {
            for i in (level..n).rev() {
                let num = dd[i] ^ dd[i - 1];
                let den = (i as u32) ^ ((i - level) as u32);
                dd[i] = self.mul(num, self.inv(den));
            }
        }
        let mut poly: Vec<u32> = Vec::with_capacity(n);
        for i in (0..n).rev() {
            // poly = poly * (x - i) + dd[i]
            let xi = i as u32;
            poly.push(0);
            for j in (1..poly.len()).rev() {
                poly[j] = poly[j - 1] ^ self.mul(poly[j], xi);
            }
            poly[0] = self.mul(poly[0], xi) ^ dd[i];
        }
        poly
    }
}
