//! Graphs with terminal sets, Gallai's auxiliary graph `H`, and the matrices
//! built from it.
//!
//! `H` keeps every node of `G`, adds a copy `v'` of each non-terminal `v`,
//! joins `v` to `v'` by a weight-0 edge and mirrors each non-terminal edge on
//! the copies. A perfect matching of `H` then traces out a perfect packing
//! of terminal paths in `G` (see [`matching_to_packing`]).

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::hafnian::SymPolyMatrix;
use crate::pmp::{Parity, Pmp};
use crate::poly2k::{Modulus, TruncatedPoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: u64,
}

/// Simple undirected graph with integer edge weights. Nodes are `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    index: BTreeMap<(usize, usize), usize>,
}

fn key(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph { n, edges: Vec::new(), index: BTreeMap::new() }
    }

    /// Builds a graph from `(u, v, weight)` triples; weights must be positive.
    pub fn from_edges<I: IntoIterator<Item = (usize, usize, u64)>>(n: usize, edges: I) -> Result<Self> {
        let mut g = Graph::new(n);
        for (u, v, w) in edges {
            g.add_edge(u, v, w)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize, weight: u64) -> Result<usize> {
        if weight == 0 {
            return Err(Error::InvalidGraph(format!("edge {u}-{v} has weight 0")));
        }
        self.push_edge(u, v, weight)
    }

    fn push_edge(&mut self, u: usize, v: usize, weight: u64) -> Result<usize> {
        if u >= self.n || v >= self.n {
            return Err(Error::InvalidGraph(format!("edge {u}-{v} leaves the node range 0..{}", self.n)));
        }
        if u == v {
            return Err(Error::InvalidGraph(format!("loop at node {u}")));
        }
        if self.index.contains_key(&key(u, v)) {
            return Err(Error::InvalidGraph(format!("parallel edge {u}-{v}")));
        }
        let (u, v) = key(u, v);
        let id = self.edges.len();
        self.edges.push(Edge { u, v, weight });
        self.index.insert((u, v), id);
        Ok(id)
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_id(&self, u: usize, v: usize) -> Option<usize> {
        self.index.get(&key(u, v)).copied()
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<u64> {
        self.edge_id(u, v).map(|e| self.edges[e].weight)
    }

    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for e in &self.edges {
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
        }
        adj
    }

    pub fn max_weight(&self) -> u64 {
        self.edges.iter().map(|e| e.weight).max().unwrap_or(0)
    }

    pub fn is_uniform(&self) -> bool {
        self.edges.iter().all(|e| e.weight == 1)
    }

    /// The graph with edge `id` deleted (other edge ids above it shift down).
    pub fn without_edge(&self, id: usize) -> Graph {
        let gone = self.edges[id];
        self.filter_edges(|e| *e != gone)
    }

    /// The edges satisfying `keep`, in their original order.
    pub fn filter_edges<F: Fn(&Edge) -> bool>(&self, keep: F) -> Graph {
        let mut g = Graph::new(self.n);
        for e in self.edges.iter().filter(|e| keep(e)) {
            g.push_edge(e.u, e.v, e.weight).expect("subgraph of a simple graph");
        }
        g
    }

    /// Same edges, new weights (indexed by edge id).
    pub fn with_weights(&self, weights: &[u64]) -> Result<Graph> {
        if weights.len() != self.edges.len() {
            return Err(Error::DimensionMismatch { expected: self.edges.len(), got: weights.len() });
        }
        let mut g = self.clone();
        for (e, &w) in g.edges.iter_mut().zip(weights) {
            e.weight = w;
        }
        Ok(g)
    }
}

/// Which terminal set a node belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

/// Disjoint even-size terminal sets `A` and `B`.
///
/// The terminal order `T = A ++ B` fixes the indices used by certificates
/// and PMPs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Terminals {
    a: Vec<usize>,
    b: Vec<usize>,
}

impl Terminals {
    pub fn new(a: Vec<usize>, b: Vec<usize>) -> Result<Self> {
        if !a.len().is_multiple_of(2) || !b.len().is_multiple_of(2) {
            return Err(Error::InvalidTerminals(format!("|A| = {} and |B| = {} must be even", a.len(), b.len())));
        }
        let mut all: Vec<usize> = a.iter().chain(&b).copied().collect();
        all.sort_unstable();
        if all.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidTerminals("A and B must be disjoint sets of distinct nodes".into()));
        }
        if all.is_empty() {
            return Err(Error::InvalidTerminals("no terminals".into()));
        }
        Ok(Terminals { a, b })
    }

    /// A single terminal set `T` (all perfect T-path packings).
    pub fn single(t: Vec<usize>) -> Result<Self> {
        Self::new(t, Vec::new())
    }

    pub fn a(&self) -> &[usize] {
        &self.a
    }

    pub fn b(&self) -> &[usize] {
        &self.b
    }

    /// `T = A ++ B`.
    pub fn all(&self) -> Vec<usize> {
        self.a.iter().chain(&self.b).copied().collect()
    }

    pub fn tau(&self) -> usize {
        (self.a.len() + self.b.len()) / 2
    }

    pub fn side(&self, v: usize) -> Option<Side> {
        if self.a.contains(&v) {
            Some(Side::A)
        } else if self.b.contains(&v) {
            Some(Side::B)
        } else {
            None
        }
    }

    pub fn is_terminal(&self, v: usize) -> bool {
        self.side(v).is_some()
    }

    /// Position of `v` in `T = A ++ B`.
    pub fn position(&self, v: usize) -> Option<usize> {
        self.a.iter().chain(&self.b).position(|&t| t == v)
    }

    pub fn check_against(&self, g: &Graph) -> Result<()> {
        match self.a.iter().chain(&self.b).find(|&&t| t >= g.node_count()) {
            Some(t) => Err(Error::InvalidTerminals(format!("terminal {t} is not a node"))),
            None => Ok(()),
        }
    }
}

/// Node-disjoint terminal paths, each a node sequence.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PathPacking {
    pub paths: Vec<Vec<usize>>,
}

impl PathPacking {
    pub fn new(paths: Vec<Vec<usize>>) -> Self {
        PathPacking { paths }
    }

    /// Each path oriented from its smaller endpoint, paths sorted.
    pub fn canonical(mut self) -> Self {
        for p in &mut self.paths {
            if p.first() > p.last() {
                p.reverse();
            }
        }
        self.paths.sort();
        self
    }

    /// Total weight, or `None` if some consecutive pair is not an edge.
    pub fn weight(&self, g: &Graph) -> Option<u64> {
        let mut total = 0;
        for p in &self.paths {
            for w in p.windows(2) {
                total += g.weight(w[0], w[1])?;
            }
        }
        Some(total)
    }

    /// Number of edges over all paths.
    pub fn length(&self) -> usize {
        self.paths.iter().map(|p| p.len().saturating_sub(1)).sum()
    }

    /// Number of even-length `B`-paths.
    pub fn theta(&self, t: &Terminals) -> usize {
        self.paths
            .iter()
            .filter(|p| {
                let ends_in_b = |v: &usize| t.side(*v) == Some(Side::B);
                p.first().is_some_and(ends_in_b) && p.last().is_some_and(ends_in_b) && (p.len() - 1) % 2 == 0
            })
            .count()
    }

    /// Edge ids used by the packing in `g`.
    pub fn edge_ids(&self, g: &Graph) -> Option<Vec<usize>> {
        let mut ids = Vec::new();
        for p in &self.paths {
            for w in p.windows(2) {
                ids.push(g.edge_id(w[0], w[1])?);
            }
        }
        ids.sort_unstable();
        Some(ids)
    }

    /// The PMP induced on `T = A ++ B`: which terminals each path joins and
    /// the parity of its length.
    pub fn pmp(&self, t: &Terminals) -> Option<Pmp> {
        let mut pairs = Vec::with_capacity(self.paths.len());
        for p in &self.paths {
            let s = t.position(*p.first()?)?;
            let e = t.position(*p.last()?)?;
            let parity = if (p.len() - 1) % 2 == 1 { Parity::Odd } else { Parity::Even };
            pairs.push((s, e, parity));
        }
        Pmp::new(2 * t.tau(), pairs).ok()
    }
}

/// A graph whose terminal-terminal edges were split through fresh nodes.
#[derive(Debug, Clone)]
pub struct Subdivision {
    pub graph: Graph,
    /// For each edge of `graph`, the id of the edge of the input it came from.
    pub origin: Vec<usize>,
    /// Number of nodes of the input graph; nodes at or above it are fresh.
    pub original_nodes: usize,
}

impl Subdivision {
    /// Drops fresh nodes from the paths, giving a packing of the input graph.
    pub fn restore(&self, packing: &PathPacking) -> PathPacking {
        let paths = packing
            .paths
            .iter()
            .map(|p| p.iter().copied().filter(|&v| v < self.original_nodes).collect())
            .collect();
        PathPacking::new(paths)
    }
}

/// Replaces every edge joining two terminals by a two-edge path through a
/// fresh node. Weight `w` is split as `(w, 0)`, so packing weights are kept.
pub fn subdivide_terminal_edges(g: &Graph, t: &Terminals) -> Subdivision {
    let fresh: Vec<usize> = (0..g.edge_count())
        .filter(|&i| {
            let e = g.edges()[i];
            t.is_terminal(e.u) && t.is_terminal(e.v)
        })
        .collect();
    let mut out = Graph::new(g.node_count() + fresh.len());
    let mut origin = Vec::new();
    let mut next = g.node_count();
    for (i, e) in g.edges().iter().enumerate() {
        if fresh.contains(&i) {
            out.push_edge(e.u, next, e.weight).expect("fresh node");
            out.push_edge(next, e.v, 0).expect("fresh node");
            origin.extend([i, i]);
            next += 1;
        } else {
            out.push_edge(e.u, e.v, e.weight).expect("copy of a simple graph");
            origin.push(i);
        }
    }
    Subdivision { graph: out, origin, original_nodes: g.node_count() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeClass {
    /// An edge of `G`.
    Original,
    /// A mirrored edge `uv'` or `u'v'`.
    Copy,
    /// The weight-0 edge `vv'`.
    Link,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GallaiEdge {
    pub u: usize,
    pub v: usize,
    pub weight: u64,
    pub class: EdgeClass,
    /// The terminal `t` when the edge lies in `E_t` (class `Original`) or
    /// `E'_t` (class `Copy`).
    pub terminal: Option<usize>,
}

/// Gallai's auxiliary graph. Nodes `0..n` are those of `G`; node `n + i` is
/// the copy of the `i`-th non-terminal in increasing order.
#[derive(Debug, Clone)]
pub struct GallaiGraph {
    node_count: usize,
    original_nodes: usize,
    copy_of: Vec<usize>,
    copy: Vec<Option<usize>>,
    edges: Vec<GallaiEdge>,
    index: BTreeMap<(usize, usize), usize>,
    terminals: Terminals,
}

impl GallaiGraph {
    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edges(&self) -> &[GallaiEdge] {
        &self.edges
    }

    pub fn terminals(&self) -> &Terminals {
        &self.terminals
    }

    pub fn edge(&self, u: usize, v: usize) -> Option<&GallaiEdge> {
        self.index.get(&key(u, v)).map(|&i| &self.edges[i])
    }

    /// Copy `v'` of a non-terminal `v`.
    pub fn copy_node(&self, v: usize) -> Option<usize> {
        self.copy.get(v).copied().flatten()
    }

    /// The node of `G` that `x` stands for (itself, or the original of a copy).
    pub fn original(&self, x: usize) -> usize {
        if x < self.original_nodes {
            x
        } else {
            self.copy_of[x - self.original_nodes]
        }
    }

    pub fn is_copy(&self, x: usize) -> bool {
        x >= self.original_nodes
    }

    /// Partner of `x` across its `E_=` edge.
    pub fn twin(&self, x: usize) -> Option<usize> {
        if self.is_copy(x) {
            Some(self.original(x))
        } else {
            self.copy_node(x)
        }
    }

    fn push(&mut self, u: usize, v: usize, weight: u64, class: EdgeClass, terminal: Option<usize>) {
        let (u, v) = key(u, v);
        self.index.insert((u, v), self.edges.len());
        self.edges.push(GallaiEdge { u, v, weight, class, terminal });
    }

    /// Perfect matchings' weight: sum of the edge weights.
    pub fn matching_weight(&self, m: &[(usize, usize)]) -> Option<u64> {
        m.iter().map(|&(u, v)| self.edge(u, v).map(|e| e.weight)).sum()
    }

    /// The two matchings covering a path `s, v1, .., vn, t` of `G` (internal
    /// nodes and their copies included): the first uses `s v1`, the second
    /// `s v1'`.
    pub fn path_orientations(&self, path: &[usize]) -> Option<[Vec<(usize, usize)>; 2]> {
        if path.len() < 3 {
            return None;
        }
        let inner = &path[1..path.len() - 1];
        let mut out = [Vec::new(), Vec::new()];
        for (start_primed, m) in [false, true].into_iter().zip(out.iter_mut()) {
            let side = |v: usize, primed: bool| if primed { self.copy_node(v) } else { Some(v) };
            let mut prev = path[0];
            let mut primed = start_primed;
            for &v in inner {
                let here = side(v, primed)?;
                m.push((prev, here));
                prev = self.twin(here)?;
                primed = !primed;
            }
            m.push((prev, *path.last()?));
            for &(a, b) in m.iter() {
                self.edge(a, b)?;
            }
        }
        Some(out)
    }
}

/// Gallai's construction. Fails if an edge joins two terminals.
pub fn build_gallai(g: &Graph, t: &Terminals) -> Result<GallaiGraph> {
    t.check_against(g)?;
    if let Some(e) = g.edges().iter().find(|e| t.is_terminal(e.u) && t.is_terminal(e.v)) {
        return Err(Error::TerminalEdge(e.u, e.v));
    }
    let n = g.node_count();
    let mut copy = vec![None; n];
    let mut copy_of = Vec::new();
    for v in (0..n).filter(|&v| !t.is_terminal(v)) {
        copy[v] = Some(n + copy_of.len());
        copy_of.push(v);
    }
    let mut h = GallaiGraph {
        node_count: n + copy_of.len(),
        original_nodes: n,
        copy_of,
        copy,
        edges: Vec::new(),
        index: BTreeMap::new(),
        terminals: t.clone(),
    };
    for e in g.edges() {
        let term = [e.u, e.v].into_iter().find(|&x| t.is_terminal(x));
        h.push(e.u, e.v, e.weight, EdgeClass::Original, term);
    }
    for e in g.edges() {
        let (cu, cv) = (h.copy[e.u], h.copy[e.v]);
        match (cu, cv) {
            (Some(a), Some(b)) => h.push(a, b, e.weight, EdgeClass::Copy, None),
            (None, Some(b)) => h.push(e.u, b, e.weight, EdgeClass::Copy, Some(e.u)),
            (Some(a), None) => h.push(a, e.v, e.weight, EdgeClass::Copy, Some(e.v)),
            (None, None) => unreachable!("terminal edges rejected above"),
        }
    }
    for v in 0..n {
        if let Some(c) = h.copy[v] {
            h.push(v, c, 0, EdgeClass::Link, None);
        }
    }
    Ok(h)
}

/// Entry scale for an edge: `p_t` on `E_t`, `q_t` on `E'_t`, 1 elsewhere.
fn build_scaled<F>(h: &GallaiGraph, modulus: Modulus, scale: F) -> Result<SymPolyMatrix>
where
    F: Fn(&GallaiEdge) -> i64,
{
    let mut s = SymPolyMatrix::zeros(h.node_count(), modulus)?;
    for e in h.edges() {
        let entry = match usize::try_from(e.weight) {
            Ok(w) => TruncatedPoly::monomial(modulus, w, scale(e)),
            Err(_) => TruncatedPoly::zero(modulus),
        };
        s.set(e.u, e.v, entry)?;
    }
    Ok(s)
}

/// `S`: entry `x^w(ij)` on every edge of `H`.
pub fn build_s(h: &GallaiGraph, modulus: Modulus) -> Result<SymPolyMatrix> {
    build_scaled(h, modulus, |_| 1)
}

/// `S'`: `S` with the entries of `E'_t`, `t` in `B`, negated.
pub fn build_s_signed(h: &GallaiGraph, modulus: Modulus) -> Result<SymPolyMatrix> {
    let t = h.terminals();
    build_scaled(h, modulus, |e| match (e.class, e.terminal) {
        (EdgeClass::Copy, Some(x)) if t.side(x) == Some(Side::B) => -1,
        _ => 1,
    })
}

/// `S[p,q]`: entries of `E_t` scaled by `p_t`, of `E'_t` by `q_t`, with `t`
/// indexed in the order `T = A ++ B`.
pub fn build_s_pq(h: &GallaiGraph, modulus: Modulus, p: &[i64], q: &[i64]) -> Result<SymPolyMatrix> {
    let t = h.terminals();
    let width = 2 * t.tau();
    for v in [p, q] {
        if v.len() != width {
            return Err(Error::DimensionMismatch { expected: width, got: v.len() });
        }
    }
    build_scaled(h, modulus, |e| match (e.class, e.terminal) {
        (EdgeClass::Original, Some(x)) => p[t.position(x).expect("terminal")],
        (EdgeClass::Copy, Some(x)) => q[t.position(x).expect("terminal")],
        _ => 1,
    })
}

/// `S(chi) = S[chi, 1 - chi]` for a 0/1 vector `chi`.
pub fn build_s_chi(h: &GallaiGraph, modulus: Modulus, chi: &[bool]) -> Result<SymPolyMatrix> {
    let p: Vec<i64> = chi.iter().map(|&c| c as i64).collect();
    let q: Vec<i64> = chi.iter().map(|&c| 1 - c as i64).collect();
    build_s_pq(h, modulus, &p, &q)
}

/// The packing `P_M` traced by a perfect matching `M` of `H`: from each
/// terminal, follow `M`-edges and `E_=` edges alternately until another
/// terminal, then project copies onto their originals.
pub fn matching_to_packing(h: &GallaiGraph, m: &[(usize, usize)]) -> Result<PathPacking> {
    let mut mate = vec![usize::MAX; h.node_count()];
    for &(u, v) in m {
        if h.edge(u, v).is_none() {
            return Err(Error::NotPerfectMatching(format!("{u}-{v} is not an edge")));
        }
        for (a, b) in [(u, v), (v, u)] {
            if mate[a] != usize::MAX {
                return Err(Error::NotPerfectMatching(format!("node {a} is covered twice")));
            }
            mate[a] = b;
        }
    }
    if let Some(x) = mate.iter().position(|&x| x == usize::MAX) {
        return Err(Error::NotPerfectMatching(format!("node {x} is uncovered")));
    }
    let t = h.terminals();
    let mut done = vec![false; h.node_count()];
    let mut paths = Vec::new();
    for s in t.all() {
        if done[s] {
            continue;
        }
        done[s] = true;
        let mut path = vec![s];
        let mut x = mate[s];
        while !t.is_terminal(x) {
            path.push(h.original(x));
            let twin = h.twin(x).expect("non-terminals have twins");
            x = mate[twin];
        }
        done[x] = true;
        path.push(x);
        paths.push(path);
    }
    Ok(PathPacking::new(paths))
}
