#![allow(dead_code)]

use hafpack_core::{Graph, Modulus, SymPolyMatrix, Terminals, TruncatedPoly};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random polynomial of degree at most `max_degree`, each coefficient zero
/// with probability `zero_prob`.
pub fn random_poly<R: Rng>(rng: &mut R, modulus: Modulus, max_degree: usize, zero_prob: f64) -> TruncatedPoly {
    let coeffs: Vec<u64> = (0..=max_degree)
        .map(|_| if rng.random_bool(zero_prob) { 0 } else { rng.random::<u64>() })
        .collect();
    TruncatedPoly::from_coeffs(modulus, &coeffs)
}

/// Random member of S(n, N) with `size = 2n` and entries of degree at most `max_degree`.
pub fn random_matrix<R: Rng>(rng: &mut R, size: usize, modulus: Modulus, max_degree: usize) -> SymPolyMatrix {
    let zero_prob = rng.random_range(0.0..0.6);
    let mut m = SymPolyMatrix::zeros(size, modulus).unwrap();
    for i in 0..size {
        for j in i + 1..size {
            m.set(i, j, random_poly(rng, modulus, max_degree, zero_prob)).unwrap();
        }
    }
    m
}

/// Random graph on `n` nodes with edge probability `density` and weights in
/// `1..=max_weight`. Terminals are nodes `0..a_len` (A) and
/// `a_len..a_len + b_len` (B). Terminal-terminal edges are dropped unless
/// `terminal_edges` is set.
pub fn random_instance<R: Rng>(
    rng: &mut R,
    n: usize,
    density: f64,
    a_len: usize,
    b_len: usize,
    max_weight: u64,
    terminal_edges: bool,
) -> (Graph, Terminals) {
    let tcount = a_len + b_len;
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if v < tcount && !terminal_edges {
                continue;
            }
            if rng.random_bool(density) {
                g.add_edge(u, v, rng.random_range(1..=max_weight)).unwrap();
            }
        }
    }
    let t = Terminals::new((0..a_len).collect(), (a_len..tcount).collect()).unwrap();
    (g, t)
}
