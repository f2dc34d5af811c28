//! Perfect matchings with parity (PMPs) on the terminal indices `0..2τ`,
//! bracket products, and h-representations of PMP families.
//!
//! Terminal `i` here is the `i`-th entry of `T = A ++ B`. All arithmetic is
//! exact over `i64`; reduction modulo `2^k` happens only in the membership
//! test.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::gallai::{build_s_chi, build_s_pq, GallaiGraph};
use crate::hafnian::haf_bruteforce;
use crate::poly2k::{Modulus, TruncatedPoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub fn of_length(len: usize) -> Self {
        if len % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Odd => "o",
            Parity::Even => "e",
        })
    }
}

/// A partition of `0..size` into pairs, each tagged with a parity. Stored
/// canonically: `s < t` in each pair, pairs sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pmp {
    size: usize,
    pairs: Vec<(usize, usize, Parity)>,
}

impl Pmp {
    pub fn new(size: usize, pairs: Vec<(usize, usize, Parity)>) -> Result<Self> {
        let mut seen = vec![false; size];
        let mut canon = Vec::with_capacity(pairs.len());
        for (s, t, parity) in pairs {
            for x in [s, t] {
                if x >= size {
                    return Err(Error::IndexOutOfRange { index: x, size });
                }
                if seen[x] {
                    return Err(Error::RepeatedIndex(x));
                }
                seen[x] = true;
            }
            canon.push((s.min(t), s.max(t), parity));
        }
        if let Some(x) = seen.iter().position(|&b| !b) {
            return Err(Error::InvalidTerminals(format!("terminal {x} is not paired")));
        }
        canon.sort();
        Ok(Pmp { size, pairs: canon })
    }

    /// Builds a PMP from 1-indexed pairs, e.g. `[(1, 2, Odd), (3, 4, Even)]`.
    pub fn from_one_based(pairs: &[(usize, usize, Parity)]) -> Result<Self> {
        let size = 2 * pairs.len();
        let zero = pairs.iter().map(|&(s, t, p)| (s.wrapping_sub(1), t.wrapping_sub(1), p)).collect();
        Pmp::new(size, zero)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn pairs(&self) -> &[(usize, usize, Parity)] {
        &self.pairs
    }
}

impl fmt::Display for Pmp {
    /// `{(12,o),(34,e)}` with 1-indexed terminals.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (s, t, p)) in self.pairs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            if self.size <= 9 {
                write!(f, "({}{},{})", s + 1, t + 1, p)?;
            } else {
                write!(f, "({} {},{})", s + 1, t + 1, p)?;
            }
        }
        f.write_str("}")
    }
}

/// All PMPs on `0..size`, in canonical order: the smallest free index is
/// paired with each later index in turn, odd before even.
pub fn enumerate_pmps(size: usize) -> Vec<Pmp> {
    fn rec(free: &mut Vec<usize>, cur: &mut Vec<(usize, usize, Parity)>, size: usize, out: &mut Vec<Pmp>) {
        if free.is_empty() {
            out.push(Pmp { size, pairs: cur.clone() });
            return;
        }
        let s = free.remove(0);
        for j in 0..free.len() {
            let t = free.remove(j);
            for parity in [Parity::Odd, Parity::Even] {
                cur.push((s, t, parity));
                rec(free, cur, size, out);
                cur.pop();
            }
            free.insert(j, t);
        }
        free.insert(0, s);
    }
    let mut out = Vec::new();
    if size.is_multiple_of(2) {
        rec(&mut (0..size).collect(), &mut Vec::new(), size, &mut out);
    }
    out
}

/// `[p,q]_{st,σ}`: `p_s p_t + q_s q_t` for odd `σ`, `p_s q_t + q_s p_t` for even.
pub fn bracket(p: &[i64], q: &[i64], s: usize, t: usize, parity: Parity) -> Result<i64> {
    if s == t {
        return Err(Error::RepeatedIndex(s));
    }
    for x in [s, t] {
        if x >= p.len() || x >= q.len() {
            return Err(Error::IndexOutOfRange { index: x, size: p.len().min(q.len()) });
        }
    }
    Ok(match parity {
        Parity::Odd => p[s] * p[t] + q[s] * q[t],
        Parity::Even => p[s] * q[t] + q[s] * p[t],
    })
}

/// Product of the brackets over the pairs of `m`.
pub fn pmp_product(p: &[i64], q: &[i64], m: &Pmp) -> Result<i64> {
    m.pairs.iter().try_fold(1i64, |acc, &(s, t, parity)| Ok(acc * bracket(p, q, s, t, parity)?))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HTerm {
    pub n: i64,
    pub p: Vec<i64>,
    pub q: Vec<i64>,
}

/// Integers `n_i`, vectors `p^i, q^i` and a modulus exponent `k`: a PMP `M`
/// is represented iff `Σ n_i Π [p^i,q^i]_{st,σ}` is nonzero modulo `2^k`.
///
/// Negative `n_i` are accepted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HRepresentation {
    tau: usize,
    k: u32,
    terms: Vec<HTerm>,
}

impl HRepresentation {
    pub fn new(tau: usize, k: u32, terms: Vec<HTerm>) -> Result<Self> {
        if !(1..=63).contains(&k) {
            return Err(Error::InvalidModulus(k));
        }
        if terms.is_empty() {
            return Err(Error::DimensionMismatch { expected: 1, got: 0 });
        }
        for t in &terms {
            for v in [&t.p, &t.q] {
                if v.len() != 2 * tau {
                    return Err(Error::DimensionMismatch { expected: 2 * tau, got: v.len() });
                }
            }
        }
        Ok(HRepresentation { tau, k, terms })
    }

    fn single(p: Vec<i64>, q: Vec<i64>, k: u32) -> Self {
        let tau = p.len() / 2;
        HRepresentation::new(tau, k, vec![HTerm { n: 1, p, q }]).expect("well-formed certificate")
    }

    /// Pairs inside `A` and inside `B`, any parities: `p = 1`, `q = ±1` by
    /// side, `k = τ + 1`.
    pub fn ab_certificate(a_len: usize, b_len: usize) -> Self {
        let p = vec![1; a_len + b_len];
        let q = (0..a_len + b_len).map(|i| if i < a_len { 1 } else { -1 }).collect();
        Self::single(p, q, ((a_len + b_len) / 2 + 1) as u32)
    }

    /// Two disjoint paths `1–2` and `3–4` modulo 4.
    pub fn two_paths() -> Self {
        Self::single(vec![1, 1, 1, 1], vec![0, 1, -1, -1], 2)
    }

    /// Two disjoint paths `1–2`, `3–4` of odd total length, modulo 4.
    pub fn two_paths_odd() -> Self {
        let term = |n, p: [i64; 4], q: [i64; 4]| HTerm { n, p: p.to_vec(), q: q.to_vec() };
        HRepresentation::new(
            2,
            2,
            vec![
                term(1, [1, 1, 1, 0], [0, 0, 0, 1]),
                term(1, [1, 1, 0, 1], [0, 0, 1, 0]),
                term(-1, [1, 0, 1, 1], [0, 1, 0, 0]),
                term(-1, [0, 1, 1, 1], [1, 0, 0, 0]),
            ],
        )
        .expect("well-formed certificate")
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn terms(&self) -> &[HTerm] {
        &self.terms
    }

    /// `Σ n_i Π [p^i,q^i]_{st,σ}` without reduction.
    pub fn value(&self, m: &Pmp) -> Result<i64> {
        if m.size() != 2 * self.tau {
            return Err(Error::DimensionMismatch { expected: 2 * self.tau, got: m.size() });
        }
        self.terms.iter().try_fold(0i64, |acc, t| Ok(acc + t.n * pmp_product(&t.p, &t.q, m)?))
    }

    pub fn contains(&self, m: &Pmp) -> Result<bool> {
        let mask = (1i64 << self.k) - 1;
        Ok(self.value(m)? & mask != 0)
    }
}

/// Whether `rep` represents `m`.
pub fn hrep_membership(rep: &HRepresentation, m: &Pmp) -> Result<bool> {
    rep.contains(m)
}

/// One row of the four-term table for odd two disjoint paths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OddTableRow {
    pub pmp: Pmp,
    pub c: [i64; 4],
    pub combined: i64,
}

/// `C_i = Π [p^i,q^i]_{st,σ}` for every PMP on four terminals, together with
/// `C_1 + C_2 − C_3 − C_4`.
pub fn odd_two_paths_table() -> Vec<OddTableRow> {
    let rep = HRepresentation::two_paths_odd();
    enumerate_pmps(4)
        .into_iter()
        .map(|pmp| {
            let mut c = [0; 4];
            for (ci, t) in c.iter_mut().zip(rep.terms()) {
                *ci = pmp_product(&t.p, &t.q, &pmp).expect("matching dimensions");
            }
            let combined = rep.value(&pmp).expect("matching dimensions");
            OddTableRow { pmp, c, combined }
        })
        .collect()
}

/// Products of the mod-4 two-paths certificate over every PMP on four terminals.
pub fn two_paths_table() -> Vec<(Pmp, i64)> {
    let rep = HRepresentation::two_paths();
    enumerate_pmps(4)
        .into_iter()
        .map(|m| {
            let v = rep.value(&m).expect("matching dimensions");
            (m, v)
        })
        .collect()
}

/// `b_{M,χ} = Π [χ, 1−χ]_{st,σ}`, always 0 or 1.
pub fn b_value(m: &Pmp, chi: &[bool]) -> Result<i64> {
    let p: Vec<i64> = chi.iter().map(|&c| c as i64).collect();
    let q: Vec<i64> = chi.iter().map(|&c| 1 - c as i64).collect();
    pmp_product(&p, &q, m)
}

/// The six PMPs on six terminals whose `b`-values are linearly dependent
/// although only the first pairs `12, 34, 56`.
pub fn three_paths_witnesses() -> [Pmp; 6] {
    use Parity::{Even as E, Odd as O};
    let m = |pairs: [(usize, usize, Parity); 3]| Pmp::from_one_based(&pairs).expect("valid PMP");
    [
        m([(1, 2, O), (3, 4, O), (5, 6, E)]),
        m([(1, 2, O), (3, 6, O), (4, 5, E)]),
        m([(1, 4, O), (2, 3, O), (5, 6, E)]),
        m([(1, 4, O), (3, 6, O), (2, 5, E)]),
        m([(1, 6, O), (2, 3, E), (4, 5, O)]),
        m([(1, 6, O), (3, 4, E), (2, 5, O)]),
    ]
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependenceCheck {
    /// Bit `i` of the mask is `χ_{i+1}`.
    pub chi: u8,
    pub lhs: i64,
    pub rhs: i64,
}

impl DependenceCheck {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// Checks `b_{M1,χ} = b_{M2,χ} + b_{M3,χ} − b_{M4,χ} + b_{M5,χ} − b_{M6,χ}`
/// for all 64 vectors `χ`.
pub fn verify_m3_certificate() -> Vec<DependenceCheck> {
    let ms = three_paths_witnesses();
    let signs = [1i64, 1, -1, 1, -1];
    (0u8..64)
        .map(|mask| {
            let chi: Vec<bool> = (0..6).map(|i| mask >> i & 1 == 1).collect();
            let b = |m: &Pmp| b_value(m, &chi).expect("six terminals");
            let rhs = ms[1..].iter().zip(signs).map(|(m, s)| s * b(m)).sum();
            DependenceCheck { chi: mask, lhs: b(&ms[0]), rhs }
        })
        .collect()
}

/// Both sides of the type decomposition of `haf S[p,q]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChiDecomposition {
    pub lhs: TruncatedPoly,
    pub rhs: TruncatedPoly,
}

impl ChiDecomposition {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// `haf S[p,q]` against `Σ_χ Π (χ_i p_i + (1−χ_i) q_i) haf S(χ)`, both by
/// pairing enumeration over `Z/2^64` (exact for small instances).
pub fn chi_decomposition_check(h: &GallaiGraph, p: &[i64], q: &[i64]) -> Result<ChiDecomposition> {
    let width = 2 * h.terminals().tau();
    let cap = h.edges().iter().map(|e| e.weight as usize).sum::<usize>();
    let modulus = Modulus::new(64, cap)?;
    let lhs = haf_bruteforce(&build_s_pq(h, modulus, p, q)?)?;
    let mut rhs = TruncatedPoly::zero(modulus);
    for mask in 0u64..1 << width {
        let chi: Vec<bool> = (0..width).map(|i| mask >> i & 1 == 1).collect();
        let factor: i64 = (0..width).map(|i| if chi[i] { p[i] } else { q[i] }).product();
        if factor == 0 {
            continue;
        }
        let haf = haf_bruteforce(&build_s_chi(h, modulus, &chi)?)?;
        rhs = &rhs + &haf.scale(factor);
    }
    Ok(ChiDecomposition { lhs, rhs })
}
