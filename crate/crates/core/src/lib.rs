//! Shortest perfect (A+B)-path packings through hafnians modulo `2^k`.
//!
//! The crate is `no_std` (it needs `alloc`). File formats and the command
//! line front end live in the `hafpack` crate.

#![no_std]

extern crate alloc;

pub mod error;
pub mod gallai;
mod gf2series;
pub mod gf2t;
pub mod hafnian;
pub mod oracle;
pub mod pmp;
pub mod poly2k;
pub mod solver;

pub use error::{Error, Result};
pub use hafnian::{haf_bruteforce, haf_mod2, haf_mod2k, Mod2Route, SymPolyMatrix};
pub use poly2k::{Modulus, TruncatedPoly};
pub use gallai::{build_gallai, subdivide_terminal_edges, GallaiGraph, Graph, PathPacking, Terminals};
pub use oracle::{enumerate_packings, shortest_packing_oracle, EnumerationBudget};
pub use pmp::{HRepresentation, Parity, Pmp};
pub use solver::{solve_hrep, solve_randomized, solve_unique, SolverConfig, Solution};
