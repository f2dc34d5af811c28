//! Symmetric zero-diagonal polynomial matrices and their hafnians.
//!
//! Three evaluators live here:
//!
//! * [`haf_bruteforce`] sums over every pairing of the index set;
//! * [`haf_mod2`] reads the hafnian modulo 2 off the square root of a
//!   determinant, interpolated over GF(2^t);
//! * [`haf_mod2k`] is the recursion that expresses `haf A` modulo `2^k` through
//!   one same-modulus minor and many minors modulo `2^(k-1)`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::gf2series::Series;
use crate::gf2t::Gf2t;
use crate::poly2k::{Modulus, TruncatedPoly};

/// Default dimension cap for [`haf_bruteforce`].
pub const BRUTEFORCE_CAP: usize = 12;

/// Even-dimension symmetric matrix with zero diagonal over [`TruncatedPoly`].
///
/// Indices are 0-based. Entries are stored densely, both triangles kept in sync.
#[derive(Clone, PartialEq, Eq)]
pub struct SymPolyMatrix {
    size: usize,
    modulus: Modulus,
    entries: Vec<TruncatedPoly>,
}

impl core::fmt::Debug for SymPolyMatrix {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        writeln!(f, "SymPolyMatrix {}x{} mod 2^{} d={}", self.size, self.size, self.modulus.bits(), self.modulus.cap())?;
        for i in 0..self.size {
            for j in i + 1..self.size {
                if !self.get(i, j).is_zero() {
                    writeln!(f, "  {} {} {}", i, j, self.get(i, j))?;
                }
            }
        }
        Ok(())
    }
}

impl SymPolyMatrix {
    pub fn zeros(size: usize, modulus: Modulus) -> Result<Self> {
        if !size.is_multiple_of(2) {
            return Err(Error::OddDimension(size));
        }
        Ok(SymPolyMatrix {
            size,
            modulus,
            entries: alloc::vec![TruncatedPoly::zero(modulus); size * size],
        })
    }

    /// Builds a matrix from `(i, j, entry)` triples; unlisted pairs are zero.
    pub fn from_entries<I>(size: usize, modulus: Modulus, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, TruncatedPoly)>,
    {
        let mut m = Self::zeros(size, modulus)?;
        for (i, j, p) in entries {
            m.set(i, j, p)?;
        }
        Ok(m)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &TruncatedPoly {
        &self.entries[i * self.size + j]
    }

    fn check_pair(&self, i: usize, j: usize) -> Result<()> {
        for index in [i, j] {
            if index >= self.size {
                return Err(Error::IndexOutOfRange { index, size: self.size });
            }
        }
        if i == j {
            return Err(Error::RepeatedIndex(i));
        }
        Ok(())
    }

    /// Sets entries `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, value: TruncatedPoly) -> Result<()> {
        self.check_pair(i, j)?;
        if value.modulus() != self.modulus {
            return Err(Error::ModulusMismatch);
        }
        self.put(i, j, value);
        Ok(())
    }

    #[inline]
    fn put(&mut self, i: usize, j: usize, value: TruncatedPoly) {
        let n = self.size;
        self.entries[j * n + i] = value.clone();
        self.entries[i * n + j] = value;
    }

    fn row_is_zero(&self, i: usize) -> bool {
        self.entries[i * self.size..(i + 1) * self.size].iter().all(TruncatedPoly::is_zero)
    }

    /// The principal submatrix on `keep` (in that order), with every entry
    /// reduced modulo `2^bits`.
    fn submatrix(&self, keep: &[usize], bits: u32) -> SymPolyMatrix {
        let modulus = self.modulus.with_bits(bits).expect("valid bit count");
        let n = keep.len();
        let mut entries = Vec::with_capacity(n * n);
        for &r in keep {
            for &c in keep {
                let e = self.get(r, c);
                entries.push(if bits == self.modulus.bits() { e.clone() } else { e.reduce_bits(bits).expect("fewer bits") });
            }
        }
        SymPolyMatrix { size: n, modulus, entries }
    }

    fn complement(&self, removed: &[usize]) -> Vec<usize> {
        (0..self.size).filter(|i| !removed.contains(i)).collect()
    }

    /// `A[i,j]`: rows and columns `i`, `j` removed, order preserved.
    pub fn minor2(&self, i: usize, j: usize) -> Result<Self> {
        self.check_pair(i, j)?;
        Ok(self.submatrix(&self.complement(&[i, j]), self.modulus.bits()))
    }

    /// Every entry read modulo `2^bits`.
    pub fn reduce_bits(&self, bits: u32) -> Result<Self> {
        if bits == 0 || bits > self.modulus.bits() {
            return Err(Error::InvalidModulus(bits));
        }
        Ok(self.submatrix(&self.complement(&[]), bits))
    }

    /// Same entries under another degree cap (higher terms dropped).
    pub fn with_cap(&self, cap: usize) -> Self {
        SymPolyMatrix {
            size: self.size,
            modulus: self.modulus.with_cap(cap),
            entries: self.entries.iter().map(|e| e.truncate_cap(cap)).collect(),
        }
    }

    /// Simultaneously exchanges rows and columns `i` and `j`.
    pub fn swap_indices(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        let n = self.size;
        for r in 0..n {
            self.entries.swap(r * n + i, r * n + j);
        }
        for c in 0..n {
            self.entries.swap(i * n + c, j * n + c);
        }
    }

    /// `A(i,j;c)`: adds `c` times row/column `i` to row/column `j` and keeps
    /// the diagonal zero.
    pub fn apply_ijc(&self, i: usize, j: usize, c: &TruncatedPoly) -> Result<Self> {
        self.check_pair(i, j)?;
        if c.modulus() != self.modulus {
            return Err(Error::ModulusMismatch);
        }
        let mut out = self.clone();
        out.apply_ijc_in_place(i, j, c);
        Ok(out)
    }

    fn apply_ijc_in_place(&mut self, i: usize, j: usize, c: &TruncatedPoly) {
        if c.is_zero() {
            return;
        }
        for p in 0..self.size {
            if p == j || self.get(p, i).is_zero() {
                continue;
            }
            let mut v = self.get(p, j).clone();
            v.add_mul_assign(c, self.get(p, i));
            self.put(p, j, v);
        }
    }

    /// `A(i→j)`: row and column `j` replaced by row and column `i`; the
    /// `{i, j}` entry becomes the (zero) diagonal value.
    pub fn replace_row(&self, i: usize, j: usize) -> Result<Self> {
        self.check_pair(i, j)?;
        let mut out = self.clone();
        for p in 0..self.size {
            if p == i || p == j {
                continue;
            }
            out.put(p, j, self.get(p, i).clone());
        }
        out.put(i, j, TruncatedPoly::zero(self.modulus));
        Ok(out)
    }
}

/// Hafnian by summing over all pairings, using the default cap.
pub fn haf_bruteforce(a: &SymPolyMatrix) -> Result<TruncatedPoly> {
    haf_bruteforce_capped(a, BRUTEFORCE_CAP)
}

/// Hafnian by summing over all pairings of the index set.
///
/// Pairings through a zero entry contribute nothing and are skipped, so sparse
/// matrices larger than the default cap stay tractable.
pub fn haf_bruteforce_capped(a: &SymPolyMatrix, cap: usize) -> Result<TruncatedPoly> {
    if a.size() > cap || a.size() > 64 {
        return Err(Error::TooLarge { size: a.size(), cap: cap.min(64) });
    }
    let full = if a.size() == 64 { u64::MAX } else { (1u64 << a.size()) - 1 };
    let mut acc = TruncatedPoly::zero(a.modulus());
    let prefix = TruncatedPoly::one(a.modulus());
    pairings(a, full, &prefix, &mut acc);
    Ok(acc)
}

fn pairings(a: &SymPolyMatrix, free: u64, prefix: &TruncatedPoly, acc: &mut TruncatedPoly) {
    if free == 0 {
        *acc = &*acc + prefix;
        return;
    }
    let i = free.trailing_zeros() as usize;
    let rest = free & !(1u64 << i);
    let mut bits = rest;
    while bits != 0 {
        let j = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        let e = a.get(i, j);
        if e.is_zero() {
            continue;
        }
        let next = prefix * e;
        if next.is_zero() {
            continue;
        }
        pairings(a, rest & !(1u64 << j), &next, acc);
    }
}

/// Lower terms of `haf A` modulo 2 through the determinant route.
///
/// Over GF(2) the hafnian equals the Pfaffian, so `det(A mod 2) = haf(A)^2`.
/// The determinant is interpolated from its values at distinct points of
/// GF(2^t); the square root halves every exponent.
pub fn haf_mod2(a: &SymPolyMatrix) -> Result<TruncatedPoly> {
    let modulus = a.modulus().with_bits(1)?;
    let cap = modulus.cap();
    let n = a.size();
    if n == 0 {
        return Ok(TruncatedPoly::one(modulus));
    }
    let bits: Vec<Vec<u32>> = (0..n * n)
        .map(|idx| a.entries[idx].coeffs().iter().map(|c| (c & 1) as u32).collect())
        .collect();
    let mut degree_bound = 0usize;
    for i in 0..n {
        let row_max = (0..n).filter_map(|j| bits[i * n + j].iter().rposition(|&b| b == 1)).max();
        match row_max {
            None => return Ok(TruncatedPoly::zero(modulus)),
            Some(d) => degree_bound += d,
        }
    }
    let points = degree_bound + 1;
    let field = Gf2t::with_at_least(points).ok_or(Error::TooLarge {
        size: points,
        cap: 1 << crate::gf2t::MAX_DEGREE,
    })?;
    let mut values = Vec::with_capacity(points);
    let mut buf = Vec::with_capacity(n * n);
    for x in 0..points as u32 {
        buf.clear();
        for coeffs in &bits {
            buf.push(coeffs.iter().rev().fold(0u32, |acc, &b| field.mul(acc, x) ^ b));
        }
        values.push(field.determinant(core::mem::take(&mut buf), n));
        buf = Vec::with_capacity(n * n);
    }
    let det = field.interpolate(&values);
    assert!(
        det.iter().enumerate().all(|(i, &c)| c <= 1 && (i % 2 == 0 || c == 0)),
        "determinant of a symmetric zero-diagonal matrix over GF(2) must be a square"
    );
    let root: Vec<u64> = det.iter().step_by(2).take(cap + 1).map(|&c| c as u64).collect();
    Ok(TruncatedPoly::from_coeffs(modulus, &root))
}

/// How [`haf_mod2k`] evaluates its modulus-2 leaves.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Mod2Route {
    /// Run the same pivoting recursion at `k = 1`, where only the pivot
    /// term survives (a Pfaffian elimination over GF(2) power series).
    #[default]
    Elimination,
    /// Call [`haf_mod2`].
    Interpolation,
}

/// All lower terms of `haf A` modulo `2^bits`, degree cap `cap`.
///
/// `A` must carry at least `bits` bits; its entries are re-read under the
/// requested modulus and cap.
pub fn haf_mod2k(a: &SymPolyMatrix, bits: u32, cap: usize) -> Result<TruncatedPoly> {
    haf_mod2k_with(a, bits, cap, Mod2Route::default())
}

pub fn haf_mod2k_with(a: &SymPolyMatrix, bits: u32, cap: usize, route: Mod2Route) -> Result<TruncatedPoly> {
    let a = a.reduce_bits(bits)?.with_cap(cap);
    Ok(haf_rec(&a, route))
}

fn haf_rec(a: &SymPolyMatrix, route: Mod2Route) -> TruncatedPoly {
    let modulus = a.modulus();
    let bits = modulus.bits();
    let n = a.size();
    match n {
        0 => return TruncatedPoly::one(modulus),
        2 => return a.get(0, 1).clone(),
        _ => {}
    }
    if (0..n).any(|i| a.row_is_zero(i)) {
        return TruncatedPoly::zero(modulus);
    }
    if bits == 1 {
        return match route {
            Mod2Route::Elimination => {
                let keep: Vec<usize> = (0..n).collect();
                eliminate_mod2(&pack(a), n, &keep, modulus)
            }
            Mod2Route::Interpolation => haf_mod2(a).expect("modulus-2 interpolation"),
        };
    }

    // Pivot: the non-even entry of row 0 with the lowest odd degree.
    let pivot = (1..n)
        .filter_map(|j| a.get(0, j).lowest_odd_degree().map(|m| (m, j)))
        .min();
    let Some((_, p)) = pivot else {
        return all_even_row(a, route);
    };

    let mut cur = a.clone();
    cur.swap_indices(1, p);
    let pivot_entry = cur.get(0, 1).clone();
    let mut correction = TruncatedPoly::zero(modulus);
    for j in 2..n {
        let c = TruncatedPoly::series_div_mod2(cur.get(0, j), &pivot_entry)
            .expect("pivot minimizes the lowest odd degree");
        if c.is_zero() {
            continue;
        }
        correction.add_mul_assign(&c, &haf_replaced(&cur, 1, j, route));
        cur.apply_ijc_in_place(1, j, &c);
    }

    let mut acc = TruncatedPoly::zero(modulus);
    let keep: Vec<usize> = (2..n).collect();
    acc.add_mul_assign(&pivot_entry, &haf_rec(&cur.submatrix(&keep, bits), route));
    let mut minors = Minors::new(&cur, bits - 1, route);
    for j in 2..n {
        let b = cur.get(0, j);
        if b.is_zero() {
            continue;
        }
        let half = b.halve().expect("eliminated entries are even");
        let keep: Vec<usize> = (1..n).filter(|&i| i != j).collect();
        let minor = minors.haf(&keep);
        acc = &acc + &(&half * &minor).double_lift().expect("k >= 2");
    }
    &acc - &correction
}

/// Hafnians of principal minors of one matrix, read modulo `2^bits`.
/// Modulus-2 minors on the elimination route share one bit-packed copy.
struct Minors<'a> {
    a: &'a SymPolyMatrix,
    bits: u32,
    route: Mod2Route,
    packed: Option<Vec<Series>>,
}

impl<'a> Minors<'a> {
    fn new(a: &'a SymPolyMatrix, bits: u32, route: Mod2Route) -> Self {
        Minors { a, bits, route, packed: None }
    }

    fn haf(&mut self, keep: &[usize]) -> TruncatedPoly {
        if self.bits == 1 && self.route == Mod2Route::Elimination {
            let a = self.a;
            let packed = self.packed.get_or_insert_with(|| pack(a));
            let modulus = a.modulus().with_bits(1).expect("one bit");
            return eliminate_mod2(packed, a.size(), keep, modulus);
        }
        haf_rec(&self.a.submatrix(keep, self.bits), self.route)
    }
}

fn pack(a: &SymPolyMatrix) -> Vec<Series> {
    let cap = a.modulus().cap();
    a.entries.iter().map(|e| Series::from_parities(e.coeffs(), cap)).collect()
}

/// The `k = 1` case: only the pivot term survives, so the recursion is an
/// elimination over GF(2) power series, run on the minor `keep` of a
/// bit-packed `n x n` matrix.
///
/// After the column operations `j += c_j * (pivot column)`, the remaining
/// minor has entries `a(x,j) + c_j a(x,p) + c_x a(j,p)`.
fn eliminate_mod2(packed: &[Series], n: usize, keep: &[usize], modulus: Modulus) -> TruncatedPoly {
    let cap = modulus.cap();
    let size = keep.len();
    // Upper triangle only; `at` maps an unordered pair to its slot.
    let mut m: Vec<Series> = Vec::with_capacity(size * size);
    for (x, &r) in keep.iter().enumerate() {
        for (j, &c) in keep.iter().enumerate() {
            m.push(if x < j { packed[r * n + c].clone() } else { Series::empty() });
        }
    }
    let n = size;
    let at = |x: usize, j: usize| if x < j { x * n + j } else { j * n + x };
    let mut idx: Vec<usize> = (0..n).collect();
    let mut acc = Series::one(cap);
    while !idx.is_empty() {
        let r = idx[0];
        let pivot = idx[1..]
            .iter()
            .enumerate()
            .filter_map(|(x, &j)| m[at(r, j)].lowest().map(|d| (d, x + 1)))
            .min();
        let Some((low, pos)) = pivot else {
            return TruncatedPoly::zero(modulus);
        };
        let p = idx[pos];
        let mut next = Series::zero(cap);
        next.add_mul(&acc, &m[at(r, p)]);
        next.truncate(cap);
        if next.is_zero() {
            return TruncatedPoly::zero(modulus);
        }
        acc = next;
        idx.remove(pos);
        idx.remove(0);

        let span = cap - low;
        let inv = Series::inverse(&m[at(r, p)].shr(low), span);
        let c: Vec<Series> = idx
            .iter()
            .map(|&x| {
                let mut out = Series::zero(cap);
                out.add_mul(&m[at(r, x)].shr(low), &inv);
                out.truncate(span);
                out
            })
            .collect();
        for (u, &x) in idx.iter().enumerate() {
            for (v, &j) in idx.iter().enumerate().skip(u + 1) {
                let mut e = core::mem::take(&mut m[at(x, j)]);
                e.add_mul(&c[v], &m[at(x, p)]);
                e.add_mul(&c[u], &m[at(j, p)]);
                e.truncate(cap);
                m[at(x, j)] = e;
            }
        }
    }
    let coeffs: Vec<u64> = (0..=cap).map(|i| u64::from(acc.get(i))).collect();
    TruncatedPoly::from_coeffs(modulus, &coeffs)
}

/// Row 0 has only even entries: expand along it with every minor taken
/// modulo `2^(k-1)`.
fn all_even_row(a: &SymPolyMatrix, route: Mod2Route) -> TruncatedPoly {
    let modulus = a.modulus();
    let bits = modulus.bits();
    let mut acc = TruncatedPoly::zero(modulus);
    let n = a.size();
    let mut minors = Minors::new(a, bits - 1, route);
    for j in 1..n {
        let e = a.get(0, j);
        if e.is_zero() {
            continue;
        }
        let half = e.halve().expect("row is even");
        let keep: Vec<usize> = (1..n).filter(|&i| i != j).collect();
        let minor = minors.haf(&keep);
        acc = &acc + &(&half * &minor).double_lift().expect("k >= 2");
    }
    acc
}

/// `haf A(i→j)` modulo `2^k` as `sum_{p<q} 2 a_ip a_iq haf A[i,j,p,q]`, with the
/// four-index minors taken modulo `2^(k-1)`.
fn haf_replaced(a: &SymPolyMatrix, i: usize, j: usize, route: Mod2Route) -> TruncatedPoly {
    let bits = a.modulus().bits();
    let lower = a.modulus().with_bits(bits - 1).expect("k >= 2");
    let n = a.size();
    let support: Vec<(usize, TruncatedPoly)> = (0..n)
        .filter(|&p| p != i && p != j)
        .filter_map(|p| {
            let e = a.get(i, p).reduce_bits(bits - 1).expect("fewer bits");
            (!e.is_zero()).then_some((p, e))
        })
        .collect();
    let mut acc = TruncatedPoly::zero(lower);
    let mut minors = Minors::new(a, bits - 1, route);
    for (x, (p, ep)) in support.iter().enumerate() {
        for (q, eq) in &support[x + 1..] {
            let coeff = ep * eq;
            if coeff.is_zero() {
                continue;
            }
            let keep: Vec<usize> = (0..n).filter(|&r| r != i && r != j && r != *p && r != *q).collect();
            let minor = minors.haf(&keep);
            acc.add_mul_assign(&coeff, &minor);
        }
    }
    acc.double_lift().expect("k >= 2")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn md(k: u32, d: usize) -> Modulus {
        Modulus::new(k, d).unwrap()
    }

    fn uniform(size: usize, modulus: Modulus, entry: &TruncatedPoly) -> SymPolyMatrix {
        let mut m = SymPolyMatrix::zeros(size, modulus).unwrap();
        for i in 0..size {
            for j in i + 1..size {
                m.set(i, j, entry.clone()).unwrap();
            }
        }
        m
    }

    #[test]
    fn bruteforce_small_cases() {
        let m = md(4, 4);
        let a = SymPolyMatrix::from_entries(2, m, [(0, 1, TruncatedPoly::constant(m, 3))]).unwrap();
        assert_eq!(haf_bruteforce(&a).unwrap(), TruncatedPoly::constant(m, 3));

        let x = |d| TruncatedPoly::monomial(m, d, 1);
        let a = SymPolyMatrix::from_entries(
            4,
            m,
            [(0, 1, x(1)), (2, 3, x(1)), (0, 2, x(2)), (1, 3, x(2)), (0, 3, x(0)), (1, 2, x(0))],
        )
        .unwrap();
        assert_eq!(haf_bruteforce(&a).unwrap(), TruncatedPoly::from_coeffs(m, &[1, 0, 1, 0, 1]));

        let ones = uniform(6, m, &TruncatedPoly::one(m));
        assert_eq!(haf_bruteforce(&ones).unwrap(), TruncatedPoly::constant(m, 15));
    }

    #[test]
    fn bruteforce_refuses_large_dense_input() {
        let m = md(2, 1);
        let a = SymPolyMatrix::zeros(14, m).unwrap();
        assert!(matches!(haf_bruteforce(&a), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn empty_matrix_has_unit_hafnian() {
        let m = md(3, 2);
        let a = SymPolyMatrix::from_entries(2, m, [(0, 1, TruncatedPoly::constant(m, 5))]).unwrap();
        let empty = a.minor2(0, 1).unwrap();
        assert_eq!(empty.size(), 0);
        assert_eq!(haf_bruteforce(&empty).unwrap(), TruncatedPoly::one(m));
        assert_eq!(haf_mod2k(&empty, 3, 2).unwrap(), TruncatedPoly::one(m));
        assert_eq!(haf_mod2(&empty).unwrap(), TruncatedPoly::one(md(1, 2)));
    }

    #[test]
    fn minors_and_operations() {
        let m = md(3, 3);
        let c = |v| TruncatedPoly::constant(m, v);
        let a = SymPolyMatrix::from_entries(
            4,
            m,
            [(0, 1, c(1)), (0, 2, c(2)), (0, 3, c(3)), (1, 2, c(4)), (1, 3, c(5)), (2, 3, c(6))],
        )
        .unwrap();
        let minor = a.minor2(2, 3).unwrap();
        assert_eq!(minor.size(), 2);
        assert_eq!(minor.get(0, 1), &c(1));
        assert_eq!(a.minor2(0, 1).unwrap().minor2(0, 1).unwrap().size(), 0);
        assert!(a.minor2(1, 1).is_err());
        assert!(a.minor2(0, 4).is_err());

        assert_eq!(a.apply_ijc(1, 2, &TruncatedPoly::zero(m)).unwrap(), a);
        let b = a.apply_ijc(1, 2, &c(1)).unwrap();
        assert_eq!(b.get(0, 2), &(&c(2) + &c(1)));
        assert_eq!(b.get(2, 3), &(&c(6) + &c(5)));
        assert_eq!(b.get(1, 2), &c(4));
        assert!(b.get(2, 2).is_zero());
        assert!(a.apply_ijc(2, 2, &c(1)).is_err());

        let r = a.replace_row(1, 2).unwrap();
        assert!(r.get(1, 2).is_zero());
        assert_eq!(r.get(0, 2), r.get(0, 1));
        assert_eq!(r.get(3, 2), r.get(3, 1));
        assert!(a.replace_row(0, 0).is_err());

        let two = SymPolyMatrix::from_entries(2, m, [(0, 1, c(3))]).unwrap();
        assert!(haf_bruteforce(&two.replace_row(0, 1).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn mod2_examples() {
        let m = md(2, 4);
        let x = TruncatedPoly::monomial(m, 1, 1);
        let a = uniform(4, m, &x);
        assert_eq!(haf_mod2(&a).unwrap(), TruncatedPoly::monomial(md(1, 4), 2, 1));
        let ones = uniform(6, md(4, 0), &TruncatedPoly::one(md(4, 0)));
        assert_eq!(haf_mod2(&ones).unwrap(), TruncatedPoly::one(md(1, 0)));
    }

    #[test]
    fn mod2k_examples() {
        let m = md(2, 4);
        let a = uniform(4, m, &TruncatedPoly::monomial(m, 1, 1));
        assert_eq!(haf_mod2k(&a, 2, 4).unwrap(), TruncatedPoly::monomial(m, 2, 3));
        let m3 = md(3, 0);
        let ones = uniform(6, m3, &TruncatedPoly::one(m3));
        assert_eq!(haf_mod2k(&ones, 3, 0).unwrap(), TruncatedPoly::constant(m3, 7));
        for route in [Mod2Route::Elimination, Mod2Route::Interpolation] {
            assert_eq!(haf_mod2k_with(&ones, 3, 0, route).unwrap(), TruncatedPoly::constant(m3, 7));
        }
    }

    #[test]
    fn mod2k_cannot_invent_bits() {
        let m = md(2, 1);
        let a = SymPolyMatrix::zeros(4, m).unwrap();
        assert!(haf_mod2k(&a, 3, 1).is_err());
    }
}
