//! Exhaustive ground truth: path packings by backtracking, perfect matchings
//! of the Gallai graph, and a term-by-term audit of `haf S'`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::gallai::{build_gallai, build_s_signed, subdivide_terminal_edges, GallaiGraph, Graph, PathPacking, Side, Terminals};
use crate::hafnian::{haf_bruteforce_capped, SymPolyMatrix};
use crate::poly2k::{Modulus, TruncatedPoly};

/// Caps on instance size and output size. Exceeding one aborts with
/// [`Error::BudgetExceeded`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationBudget {
    pub max_nodes: usize,
    pub max_matchings: usize,
    pub max_packings: usize,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget { max_nodes: 24, max_matchings: 1_000_000, max_packings: 1_000_000 }
    }
}

/// Whether every path joins two `A` terminals or two `B` terminals.
pub fn is_ab_packing(packing: &PathPacking, t: &Terminals) -> bool {
    packing.paths.iter().all(|p| match (p.first(), p.last()) {
        (Some(&s), Some(&e)) => t.side(s).is_some() && t.side(s) == t.side(e),
        _ => false,
    })
}

/// All perfect packings of terminal paths, any pairing of the terminals.
/// Internal nodes avoid terminals. Results are canonical and sorted.
pub fn enumerate_all_packings(g: &Graph, t: &Terminals, budget: &EnumerationBudget) -> Result<Vec<PathPacking>> {
    t.check_against(g)?;
    if g.node_count() > budget.max_nodes {
        return Err(Error::BudgetExceeded("node count"));
    }
    let adj = g.neighbors();
    let mut search = PackingSearch {
        adj: &adj,
        terminals: t.all(),
        is_terminal: (0..g.node_count()).map(|v| t.is_terminal(v)).collect(),
        used: vec![false; g.node_count()],
        paths: Vec::new(),
        out: Vec::new(),
        cap: budget.max_packings,
    };
    search.next_pair()?;
    let mut out: Vec<PathPacking> = search.out.into_iter().map(PathPacking::canonical).collect();
    out.sort();
    Ok(out)
}

/// All perfect `(A+B)`-path packings; with `B` empty, all perfect `A`-path packings.
pub fn enumerate_packings(g: &Graph, t: &Terminals, budget: &EnumerationBudget) -> Result<Vec<PathPacking>> {
    let mut all = enumerate_all_packings(g, t, budget)?;
    all.retain(|p| is_ab_packing(p, t));
    Ok(all)
}

struct PackingSearch<'a> {
    adj: &'a [Vec<usize>],
    terminals: Vec<usize>,
    is_terminal: Vec<bool>,
    used: Vec<bool>,
    paths: Vec<Vec<usize>>,
    out: Vec<PathPacking>,
    cap: usize,
}

impl PackingSearch<'_> {
    fn next_pair(&mut self) -> Result<()> {
        let Some(&s) = self.terminals.iter().find(|&&x| !self.used[x]) else {
            if self.out.len() == self.cap {
                return Err(Error::BudgetExceeded("packing count"));
            }
            self.out.push(PathPacking::new(self.paths.clone()));
            return Ok(());
        };
        self.used[s] = true;
        let mut path = vec![s];
        self.extend(&mut path)?;
        self.used[s] = false;
        Ok(())
    }

    fn extend(&mut self, path: &mut Vec<usize>) -> Result<()> {
        let last = *path.last().expect("non-empty path");
        for i in 0..self.adj[last].len() {
            let v = self.adj[last][i];
            if self.used[v] {
                continue;
            }
            self.used[v] = true;
            path.push(v);
            if self.is_terminal[v] {
                self.paths.push(path.clone());
                self.next_pair()?;
                self.paths.pop();
            } else {
                self.extend(path)?;
            }
            path.pop();
            self.used[v] = false;
        }
        Ok(())
    }
}

/// The optimum weight among packings accepted by a family predicate, and all
/// packings attaining it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Optimum {
    pub weight: u64,
    pub packings: Vec<PathPacking>,
}

impl Optimum {
    pub fn is_unique(&self) -> bool {
        self.packings.len() == 1
    }
}

/// Shortest perfect packing among those accepted by `family`, over every
/// pairing of the terminals. Fails with [`Error::Infeasible`] if none is.
pub fn shortest_packing_oracle<F>(g: &Graph, t: &Terminals, family: F, budget: &EnumerationBudget) -> Result<Optimum>
where
    F: Fn(&PathPacking) -> bool,
{
    let mut best: Option<Optimum> = None;
    for p in enumerate_all_packings(g, t, budget)? {
        if !family(&p) {
            continue;
        }
        let w = p.weight(g).expect("paths follow edges");
        match &mut best {
            Some(b) if w > b.weight => {}
            Some(b) if w == b.weight => b.packings.push(p),
            _ => best = Some(Optimum { weight: w, packings: vec![p] }),
        }
    }
    best.ok_or(Error::Infeasible)
}

/// All perfect matchings of `H`, each as a list of node pairs `(u, v)`, `u < v`.
pub fn enumerate_matchings(h: &GallaiGraph, budget: &EnumerationBudget) -> Result<Vec<Vec<(usize, usize)>>> {
    let nodes: Vec<usize> = (0..h.node_count()).collect();
    enumerate_matchings_on(h, &nodes, budget)
}

/// Perfect matchings of the subgraph of `H` induced by `nodes`.
fn enumerate_matchings_on(h: &GallaiGraph, nodes: &[usize], budget: &EnumerationBudget) -> Result<Vec<Vec<(usize, usize)>>> {
    if nodes.len() > 2 * budget.max_nodes {
        return Err(Error::BudgetExceeded("node count"));
    }
    let inside: BTreeSet<usize> = nodes.iter().copied().collect();
    let mut adj: BTreeMap<usize, Vec<usize>> = nodes.iter().map(|&v| (v, Vec::new())).collect();
    for e in h.edges() {
        if inside.contains(&e.u) && inside.contains(&e.v) {
            adj.get_mut(&e.u).expect("inside").push(e.v);
            adj.get_mut(&e.v).expect("inside").push(e.u);
        }
    }
    fn rec(
        adj: &BTreeMap<usize, Vec<usize>>,
        free: &mut BTreeSet<usize>,
        cur: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
        cap: usize,
    ) -> Result<()> {
        let Some(&u) = free.iter().next() else {
            if out.len() == cap {
                return Err(Error::BudgetExceeded("matching count"));
            }
            out.push(cur.clone());
            return Ok(());
        };
        free.remove(&u);
        for &v in &adj[&u] {
            if free.remove(&v) {
                cur.push((u.min(v), u.max(v)));
                rec(adj, free, cur, out, cap)?;
                cur.pop();
                free.insert(v);
            }
        }
        free.insert(u);
        Ok(())
    }
    let mut out = Vec::new();
    rec(&adj, &mut inside.clone(), &mut Vec::new(), &mut out, budget.max_matchings)?;
    Ok(out)
}

/// Product of the matrix entries over the edges of a matching.
pub fn matching_product(s: &SymPolyMatrix, m: &[(usize, usize)]) -> TruncatedPoly {
    let mut acc = TruncatedPoly::one(s.modulus());
    for &(u, v) in m {
        acc = &acc * s.get(u, v);
    }
    acc
}

/// Outcome of the term-by-term audit of `haf S'`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaReport {
    pub matchings: usize,
    pub packings: usize,
    /// `Σ_M s'(M)` equals the pairing-enumeration hafnian of `S'`.
    pub hafnian_matches: bool,
    /// The packings traced by matchings are exactly the perfect terminal-path packings.
    pub packing_sets_match: bool,
    /// Each path's two orientations sum to `0`, `−2x^w` or `2x^w` by type.
    pub sign_table_ok: bool,
    /// Matchings grouped by packing factor into per-path sums times a
    /// residual series with constant term 1.
    pub factorization_ok: bool,
    /// Minimum weight of a perfect `(A+B)`-path packing.
    pub min_weight: Option<u64>,
    /// Coefficient of `x^min_weight` in `haf S'`, as a signed integer.
    pub min_coefficient: i64,
    /// `Σ (−1)^θ 2^τ` over the shortest packings.
    pub expected_coefficient: i64,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.hafnian_matches
            && self.packing_sets_match
            && self.sign_table_ok
            && self.factorization_ok
            && self.min_coefficient == self.expected_coefficient
    }
}

/// Expands `haf S'` matching by matching and checks its structure: the
/// per-path sign table, the constant term of each residual series, and the
/// coefficient at the minimum packing weight. Edges between terminals are
/// subdivided first; all packings in the audit live in the subdivided graph.
pub fn verify_lemma_hafs(g: &Graph, t: &Terminals, budget: &EnumerationBudget) -> Result<LemmaReport> {
    let sub = subdivide_terminal_edges(g, t);
    let g = &sub.graph;
    let h = build_gallai(g, t)?;
    let total: u64 = h.edges().iter().map(|e| e.weight).sum();
    let modulus = Modulus::new(64, total as usize)?;
    let s = build_s_signed(&h, modulus)?;
    let tau = t.tau();

    let matchings = enumerate_matchings(&h, budget)?;
    let mut groups: BTreeMap<PathPacking, TruncatedPoly> = BTreeMap::new();
    let mut sum = TruncatedPoly::zero(modulus);
    for m in &matchings {
        let term = matching_product(&s, m);
        sum = &sum + &term;
        let p = crate::gallai::matching_to_packing(&h, m)?.canonical();
        let slot = groups.entry(p).or_insert_with(|| TruncatedPoly::zero(modulus));
        *slot = &*slot + &term;
    }
    let hafnian_matches = haf_bruteforce_capped(&s, budget.max_nodes)? == sum;
    let traced: Vec<PathPacking> = groups.keys().cloned().collect();
    let packing_sets_match = traced == enumerate_all_packings(g, t, budget)?;

    let mut sign_table_ok = true;
    let mut factorization_ok = true;
    for (packing, group_sum) in &groups {
        let mut product = TruncatedPoly::one(modulus);
        let mut covered = BTreeSet::new();
        for path in &packing.paths {
            let [m1, m2] = h.path_orientations(path).ok_or(Error::Infeasible)?;
            let both = &matching_product(&s, &m1) + &matching_product(&s, &m2);
            let w = PathPacking::new(vec![path.clone()]).weight(g).expect("path of g") as usize;
            let (first, last) = (path[0], *path.last().expect("path"));
            let expected = match (t.side(first), t.side(last)) {
                (a, b) if a != b => 0,
                (Some(Side::B), _) if (path.len() - 1) % 2 == 0 => -2,
                _ => 2,
            };
            sign_table_ok &= both == TruncatedPoly::monomial(modulus, w, expected);
            product = &product * &both;
            for &(u, v) in m1.iter().chain(&m2) {
                covered.insert(u);
                covered.insert(v);
            }
        }
        let rest: Vec<usize> = (0..h.node_count()).filter(|v| !covered.contains(v)).collect();
        let mut residual = TruncatedPoly::zero(modulus);
        for m in enumerate_matchings_on(&h, &rest, budget)? {
            residual = &residual + &matching_product(&s, &m);
        }
        factorization_ok &= residual.coeff(0) == 1;
        factorization_ok &= &product * &residual == *group_sum;
    }

    let ab: Vec<&PathPacking> = groups.keys().filter(|p| is_ab_packing(p, t)).collect();
    let min_weight = ab.iter().map(|p| p.weight(g).expect("path of g")).min();
    let (min_coefficient, expected_coefficient) = match min_weight {
        Some(w) => {
            let expected = ab
                .iter()
                .filter(|p| p.weight(g) == Some(w))
                .map(|p| if p.theta(t) % 2 == 0 { 1i64 << tau } else { -(1i64 << tau) })
                .sum();
            (modulus.to_signed(sum.coeff(w as usize)), expected)
        }
        None => (i64::from(!sum.is_zero()), 0),
    };

    Ok(LemmaReport {
        matchings: matchings.len(),
        packings: groups.len(),
        hafnian_matches,
        packing_sets_match,
        sign_table_ok,
        factorization_ok,
        min_weight,
        min_coefficient,
        expected_coefficient,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn budget() -> EnumerationBudget {
        EnumerationBudget::default()
    }

    #[test]
    fn single_path_instances() {
        let g = Graph::from_edges(3, [(0, 1, 1), (1, 2, 1)]).unwrap();
        let t = Terminals::new(vec![0, 2], vec![]).unwrap();
        let all = enumerate_packings(&g, &t, &budget()).unwrap();
        assert_eq!(all, vec![PathPacking::new(vec![vec![0, 1, 2]])]);
        let opt = shortest_packing_oracle(&g, &t, |_| true, &budget()).unwrap();
        assert_eq!(opt.weight, 2);
        assert!(opt.is_unique());
    }

    #[test]
    fn two_disjoint_paths_have_one_packing() {
        let g = Graph::from_edges(6, [(0, 1, 1), (1, 2, 1), (3, 4, 1), (4, 5, 1)]).unwrap();
        let t = Terminals::new(vec![0, 2], vec![3, 5]).unwrap();
        assert_eq!(enumerate_packings(&g, &t, &budget()).unwrap().len(), 1);
    }

    #[test]
    fn doubled_gadget_has_two_optima() {
        let g = Graph::from_edges(4, [(0, 1, 1), (1, 3, 1), (0, 2, 1), (2, 3, 1)]).unwrap();
        let t = Terminals::new(vec![0, 3], vec![]).unwrap();
        let opt = shortest_packing_oracle(&g, &t, |_| true, &budget()).unwrap();
        assert_eq!(opt.packings.len(), 2);
    }

    #[test]
    fn infeasible_when_no_packing() {
        let g = Graph::from_edges(4, [(0, 1, 1), (2, 3, 1)]).unwrap();
        let t = Terminals::new(vec![0, 2], vec![]).unwrap();
        assert_eq!(shortest_packing_oracle(&g, &t, |_| true, &budget()).unwrap_err(), Error::Infeasible);
    }

    #[test]
    fn matchings_of_the_path_gadget() {
        let g = Graph::from_edges(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1)]).unwrap();
        let t = Terminals::new(vec![0, 3], vec![]).unwrap();
        let h = build_gallai(&g, &t).unwrap();
        let ms = enumerate_matchings(&h, &budget()).unwrap();
        assert_eq!(ms.len(), 2);
        let r = verify_lemma_hafs(&g, &t, &budget()).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!((r.min_weight, r.min_coefficient), (Some(3), 2));
    }

    #[test]
    fn even_b_path_carries_a_minus_sign() {
        let g = Graph::from_edges(3, [(0, 1, 1), (1, 2, 1)]).unwrap();
        let t = Terminals::new(vec![], vec![0, 2]).unwrap();
        let r = verify_lemma_hafs(&g, &t, &budget()).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!((r.min_weight, r.min_coefficient), (Some(2), -2));
    }

    #[test]
    fn a_to_b_connections_contribute_nothing() {
        // a1 - u - b1 and a2 - v - b2: every packing pairs A with B.
        let g = Graph::from_edges(6, [(0, 4, 1), (4, 2, 1), (1, 5, 1), (5, 3, 1)]).unwrap();
        let t = Terminals::new(vec![0, 1], vec![2, 3]).unwrap();
        let r = verify_lemma_hafs(&g, &t, &budget()).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.packings, 1);
        assert_eq!(r.min_weight, None);
        assert_eq!(r.min_coefficient, 0);
    }

    #[test]
    fn budgets_abort() {
        let g = Graph::from_edges(4, [(0, 1, 1), (1, 3, 1), (0, 2, 1), (2, 3, 1)]).unwrap();
        let t = Terminals::new(vec![0, 3], vec![]).unwrap();
        let tight = EnumerationBudget { max_packings: 1, ..budget() };
        assert_eq!(enumerate_packings(&g, &t, &tight).unwrap_err(), Error::BudgetExceeded("packing count"));
        let small = EnumerationBudget { max_nodes: 3, ..budget() };
        assert!(enumerate_packings(&g, &t, &small).is_err());
    }
}
