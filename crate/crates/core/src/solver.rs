//! Shortest perfect packings from the leading term of a hafnian scalar.
//!
//! The scalar is `haf S'` modulo `2^(τ+1)` for `(A+B)`-packings, or
//! `Σ n_i haf S[p^i, q^i]` modulo `2^k` for a family given by an
//! h-representation. When the optimum is unique its weight is the degree of
//! the lowest nonzero term, and an edge lies on it exactly when deleting the
//! edge pushes that term up (or kills the scalar). Uniform-weight inputs are
//! perturbed at random until the optimum is unique.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gallai::{build_gallai, build_s_pq, build_s_signed, subdivide_terminal_edges, Graph, PathPacking, Terminals};
use crate::hafnian::haf_mod2k;
use crate::oracle::is_ab_packing;
use crate::pmp::HRepresentation;
use crate::poly2k::{Modulus, TruncatedPoly};

pub const DEFAULT_TRIALS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverConfig {
    pub seed: u64,
    /// Randomization rounds before giving up; at least 1.
    pub trials: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { seed: 0, trials: DEFAULT_TRIALS }
    }
}

/// The hafnian scalar whose leading term is tracked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Objective {
    /// `haf S'` modulo `2^(τ+1)`: paths inside `A` or inside `B`.
    AbPacking,
    /// `Σ n_i haf S[p^i, q^i]` modulo `2^k`.
    Certificate(HRepresentation),
}

impl Objective {
    fn bits(&self, t: &Terminals) -> u32 {
        match self {
            Objective::AbPacking => t.tau() as u32 + 1,
            Objective::Certificate(rep) => rep.k(),
        }
    }

    /// Evaluates the scalar on `g` (no terminal-terminal edges) up to degree `cap`.
    pub fn scalar(&self, g: &Graph, t: &Terminals, cap: usize) -> Result<TruncatedPoly> {
        let h = build_gallai(g, t)?;
        let bits = self.bits(t);
        let modulus = Modulus::new(bits, cap)?;
        match self {
            Objective::AbPacking => haf_mod2k(&build_s_signed(&h, modulus)?, bits, cap),
            Objective::Certificate(rep) => {
                let mut acc = TruncatedPoly::zero(modulus);
                for term in rep.terms() {
                    let haf = haf_mod2k(&build_s_pq(&h, modulus, &term.p, &term.q)?, bits, cap)?;
                    acc = &acc + &haf.scale(term.n);
                }
                Ok(acc)
            }
        }
    }

    /// Whether a packing belongs to the family.
    pub fn accepts(&self, packing: &PathPacking, t: &Terminals) -> bool {
        match self {
            Objective::AbPacking => is_ab_packing(packing, t),
            Objective::Certificate(rep) => {
                packing.pmp(t).is_some_and(|m| rep.contains(&m).unwrap_or(false))
            }
        }
    }
}

/// Lowest-degree nonzero term `(degree, coefficient)`, or `None` for zero.
pub fn leading_term(h: &TruncatedPoly) -> Option<(usize, u64)> {
    h.leading_term()
}

/// One weight per edge, uniform on `{2mn, …, 2mn + 2m − 1}`.
pub fn randomize_weights<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> Vec<u64> {
    let m = g.edge_count() as u64;
    let n = g.node_count() as u64;
    let low = 2 * m * n;
    (0..m).map(|_| rng.random_range(low..low + 2 * m)).collect()
}

/// A packing found by the solver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub packing: PathPacking,
    /// Weight under the input weights.
    pub weight: u64,
    /// Randomization rounds used (1 for the deterministic solvers).
    pub trials: usize,
}

/// Internals of one leading-term extraction, for inspection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extraction {
    /// Leading term of the scalar on the whole graph.
    pub leading: (usize, u64),
    /// Ids of the edges whose deletion raised the leading degree.
    pub selected: Vec<usize>,
    pub packing: PathPacking,
}

/// Leading-term extraction on a graph without terminal-terminal edges.
///
/// Returns [`Error::Infeasible`] when the scalar vanishes and
/// [`Error::NotUniqueOrInfeasible`] when the selected edges do not form a
/// perfect packing of the family with the leading weight.
pub fn extract(g: &Graph, t: &Terminals, objective: &Objective) -> Result<Extraction> {
    t.check_against(g)?;
    let bound = (g.node_count() as u64).saturating_mul(g.max_weight());
    let bound = usize::try_from(bound).map_err(|_| Error::BudgetExceeded("degree cap"))?;
    let Some(leading) = objective.scalar(g, t, bound)?.leading_term() else {
        return Err(Error::Infeasible);
    };
    let cap = leading.0;
    let mut selected = Vec::new();
    for e in 0..g.edge_count() {
        match objective.scalar(&g.without_edge(e), t, cap)?.leading_term() {
            None => selected.push(e),
            Some((d, _)) if d == cap => {}
            Some(_) => return Err(Error::NotUniqueOrInfeasible),
        }
    }
    let packing = paths_from_edges(g, t, &selected).ok_or(Error::NotUniqueOrInfeasible)?;
    let valid = validate_packing(g, t, &packing, |p| objective.accepts(p, t));
    if !valid || packing.weight(g) != Some(cap as u64) {
        return Err(Error::NotUniqueOrInfeasible);
    }
    Ok(Extraction { leading, selected, packing })
}

/// Removes edges from `A` to `B`; no `(A+B)`-path packing can use them.
fn drop_cross_edges(g: &Graph, t: &Terminals) -> Graph {
    g.filter_edges(|e| {
        let (a, b) = (t.side(e.u), t.side(e.v));
        a.is_none() || b.is_none() || a == b
    })
}

/// Walks the selected edges from each terminal. Fails on branching, cycles or
/// edges left over.
fn paths_from_edges(g: &Graph, t: &Terminals, edges: &[usize]) -> Option<PathPacking> {
    let mut adj = vec![Vec::new(); g.node_count()];
    for &e in edges {
        let edge = g.edges()[e];
        adj[edge.u].push(edge.v);
        adj[edge.v].push(edge.u);
    }
    let mut seen = vec![false; g.node_count()];
    let mut walked = 0;
    let mut paths = Vec::new();
    for s in t.all() {
        if seen[s] {
            continue;
        }
        if adj[s].len() != 1 {
            return None;
        }
        seen[s] = true;
        let mut path = vec![s];
        let (mut prev, mut cur) = (s, adj[s][0]);
        loop {
            if seen[cur] {
                return None;
            }
            seen[cur] = true;
            path.push(cur);
            walked += 1;
            if t.is_terminal(cur) {
                if adj[cur].len() != 1 {
                    return None;
                }
                break;
            }
            if adj[cur].len() != 2 {
                return None;
            }
            let next = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
            (prev, cur) = (cur, next);
        }
        paths.push(path);
    }
    (walked == edges.len()).then(|| PathPacking::new(paths))
}

/// Checks that `packing` is a perfect packing of terminal paths in `g` with
/// terminal endpoints and non-terminal interiors, node-disjoint, and accepted
/// by `family`.
pub fn validate_packing<F>(g: &Graph, t: &Terminals, packing: &PathPacking, family: F) -> bool
where
    F: Fn(&PathPacking) -> bool,
{
    if packing.paths.len() != t.tau() {
        return false;
    }
    let mut used = vec![false; g.node_count()];
    for p in &packing.paths {
        if p.len() < 2 {
            return false;
        }
        for (i, &v) in p.iter().enumerate() {
            if v >= g.node_count() || used[v] {
                return false;
            }
            used[v] = true;
            let end = i == 0 || i == p.len() - 1;
            if end != t.is_terminal(v) {
                return false;
            }
        }
        if p.windows(2).any(|w| g.edge_id(w[0], w[1]).is_none()) {
            return false;
        }
    }
    t.all().iter().all(|&x| used[x]) && family(packing)
}

/// The shortest perfect `(A+B)`-path packing under weights `w` (or the
/// graph's own weights), assuming it is unique. Terminal-terminal edges are
/// subdivided internally.
pub fn solve_unique(g: &Graph, t: &Terminals, w: Option<&[u64]>) -> Result<Solution> {
    let g = match w {
        Some(w) => g.with_weights(w)?,
        None => g.clone(),
    };
    let sub = subdivide_terminal_edges(&drop_cross_edges(&g, t), t);
    let ex = extract(&sub.graph, t, &Objective::AbPacking)?;
    let packing = sub.restore(&ex.packing);
    let weight = packing.weight(&g).expect("restored paths follow edges");
    Ok(Solution { packing, weight, trials: 1 })
}

/// Shortest perfect `(A+B)`-path packing of a uniform-weight graph.
///
/// Draws fresh weights from [`randomize_weights`] each round until the
/// extracted packing validates. If the scalar vanished in every round the
/// instance is reported [`Error::Infeasible`].
pub fn solve_randomized(g: &Graph, t: &Terminals, config: &SolverConfig) -> Result<Solution> {
    randomized(g, t, &Objective::AbPacking, config, true)
}

/// Shortest perfect packing in the family represented by `rep`, for a
/// uniform-weight graph without terminal-terminal edges.
pub fn solve_hrep(g: &Graph, t: &Terminals, rep: &HRepresentation, config: &SolverConfig) -> Result<Solution> {
    if rep.tau() != t.tau() {
        return Err(Error::DimensionMismatch { expected: 2 * t.tau(), got: 2 * rep.tau() });
    }
    randomized(g, t, &Objective::Certificate(rep.clone()), config, false)
}

fn randomized(g: &Graph, t: &Terminals, objective: &Objective, config: &SolverConfig, subdivide: bool) -> Result<Solution> {
    t.check_against(g)?;
    if !g.is_uniform() {
        return Err(Error::WeightsNotUniform);
    }
    if !subdivide {
        if let Some(e) = g.edges().iter().find(|e| t.is_terminal(e.u) && t.is_terminal(e.v)) {
            return Err(Error::TerminalEdge(e.u, e.v));
        }
    }
    let trials = config.trials.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut nonzero = false;
    for trial in 1..=trials {
        let perturbed = g.with_weights(&randomize_weights(g, &mut rng))?;
        let sub = match objective {
            Objective::AbPacking => subdivide_terminal_edges(&drop_cross_edges(&perturbed, t), t),
            Objective::Certificate(_) => subdivide_terminal_edges(&perturbed, t),
        };
        match extract(&sub.graph, t, objective) {
            Ok(ex) => {
                let packing = sub.restore(&ex.packing);
                let weight = packing.weight(g).expect("restored paths follow edges");
                return Ok(Solution { packing, weight, trials: trial });
            }
            Err(Error::Infeasible) => {}
            Err(Error::NotUniqueOrInfeasible) => nonzero = true,
            Err(e) => return Err(e),
        }
    }
    Err(if nonzero { Error::FailureBudgetExhausted(trials) } else { Error::Infeasible })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leading_term_examples() {
        let m = Modulus::new(3, 6).unwrap();
        let h = TruncatedPoly::from_coeffs(m, &[0, 0, 0, 2, 0, 4]);
        assert_eq!(leading_term(&h), Some((3, 2)));
        assert_eq!(leading_term(&TruncatedPoly::zero(m)), None);
        let h = TruncatedPoly::from_coeffs(m, &[0, 0, 8, 0, 2]);
        assert_eq!(leading_term(&h), Some((4, 2)));
    }

    #[test]
    fn weights_lie_in_range_and_repeat() {
        let g = Graph::from_edges(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1)]).unwrap();
        let mut a = ChaCha8Rng::seed_from_u64(5);
        let mut b = ChaCha8Rng::seed_from_u64(5);
        let w = randomize_weights(&g, &mut a);
        assert!(w.iter().all(|x| (24..30).contains(x)));
        assert_eq!(w, randomize_weights(&g, &mut b));
    }

    #[test]
    fn two_separate_paths() {
        // a1 - u - a2 and b1 - v - b2
        let g = Graph::from_edges(6, [(0, 4, 1), (4, 1, 1), (2, 5, 1), (5, 3, 1)]).unwrap();
        let t = Terminals::new(vec![0, 1], vec![2, 3]).unwrap();
        let sol = solve_unique(&g, &t, None).unwrap();
        assert_eq!(sol.weight, 4);
        assert_eq!(sol.packing.canonical(), PathPacking::new(vec![vec![0, 4, 1], vec![2, 5, 3]]));
        let sol = solve_randomized(&g, &t, &SolverConfig::default()).unwrap();
        assert_eq!((sol.weight, sol.trials), (4, 1));
    }

    #[test]
    fn direct_terminal_edge() {
        let g = Graph::from_edges(3, [(0, 1, 5), (0, 2, 1), (2, 1, 1)]).unwrap();
        let t = Terminals::new(vec![0, 1], vec![]).unwrap();
        let sol = solve_unique(&g, &t, None).unwrap();
        assert_eq!(sol.packing, PathPacking::new(vec![vec![0, 2, 1]]));
        let sol = solve_unique(&g, &t, Some(&[1, 1, 1])).unwrap();
        assert_eq!(sol.packing, PathPacking::new(vec![vec![0, 1]]));
        assert_eq!(sol.weight, 1);
    }

    #[test]
    fn infeasible_and_failures() {
        let g = Graph::from_edges(4, [(0, 2, 1), (1, 3, 1)]).unwrap();
        let t = Terminals::new(vec![0, 1], vec![]).unwrap();
        assert_eq!(solve_unique(&g, &t, None).unwrap_err(), Error::Infeasible);
        assert_eq!(solve_randomized(&g, &t, &SolverConfig::default()).unwrap_err(), Error::Infeasible);
        let w = Graph::from_edges(3, [(0, 2, 2), (2, 1, 1)]).unwrap();
        assert_eq!(solve_randomized(&w, &t, &SolverConfig::default()).unwrap_err(), Error::WeightsNotUniform);
    }

    #[test]
    fn validation_rejects_bad_packings() {
        let g = Graph::from_edges(5, [(0, 4, 1), (4, 1, 1), (2, 4, 1), (4, 3, 1)]).unwrap();
        let t = Terminals::new(vec![0, 1], vec![2, 3]).unwrap();
        let shared = PathPacking::new(vec![vec![0, 4, 1], vec![2, 4, 3]]);
        assert!(!validate_packing(&g, &t, &shared, |_| true));
        let g = Graph::from_edges(6, [(0, 4, 1), (4, 2, 1), (1, 5, 1), (5, 3, 1)]).unwrap();
        let cross = PathPacking::new(vec![vec![0, 4, 2], vec![1, 5, 3]]);
        assert!(validate_packing(&g, &t, &cross, |_| true));
        assert!(!validate_packing(&g, &t, &cross, |p| is_ab_packing(p, &t)));
    }
}
