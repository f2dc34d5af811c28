//! Text formats for graphs, polynomial matrices and h-representations.
//!
//! Every format is whitespace separated, with `#` starting a comment that runs
//! to the end of the line. Node and matrix indices are 1-based on disk and
//! 0-based in memory.

use std::fmt;

use hafpack_core::pmp::HTerm;
use hafpack_core::{Graph, HRepresentation, Modulus, PathPacking, SymPolyMatrix, TruncatedPoly};

/// A malformed input, located by 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

impl Token<'_> {
    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError { line: self.line, column: self.column, message: message.into() }
    }

    fn parse<T: std::str::FromStr>(&self, what: &str) -> Result<T, ParseError> {
        self.text.parse().map_err(|_| self.error(format!("expected {what}, found `{}`", self.text)))
    }
}

/// Non-empty lines as token lists, comments removed.
fn lines(text: &str) -> Vec<Vec<Token<'_>>> {
    text.lines()
        .enumerate()
        .map(|(i, raw)| {
            let body = raw.split('#').next().unwrap_or("");
            let mut out = Vec::new();
            let mut start = None;
            for (pos, ch) in body.char_indices().chain([(body.len(), ' ')]) {
                match (ch.is_whitespace(), start) {
                    (false, None) => start = Some(pos),
                    (true, Some(s)) => {
                        let column = body[..s].chars().count() + 1;
                        out.push(Token { text: &body[s..pos], line: i + 1, column });
                        start = None;
                    }
                    _ => {}
                }
            }
            out
        })
        .filter(|l| !l.is_empty())
        .collect()
}

fn eof(text: &str, message: impl Into<String>) -> ParseError {
    ParseError { line: text.lines().count().max(1), column: 1, message: message.into() }
}

fn expect_arity<'a>(line: &'a [Token<'a>], arity: usize, what: &str) -> Result<&'a [Token<'a>], ParseError> {
    match line.len() {
        n if n == arity => Ok(line),
        n if n > arity => Err(line[arity].error(format!("unexpected token after {what}"))),
        _ => Err(line[line.len() - 1].error(format!("{what} needs {arity} fields, found {}", line.len()))),
    }
}

fn index(tok: &Token<'_>, size: usize, what: &str) -> Result<usize, ParseError> {
    let i: usize = tok.parse(what)?;
    if i == 0 || i > size {
        return Err(tok.error(format!("{what} {i} outside 1..={size}")));
    }
    Ok(i - 1)
}

/// Graph file: a header `n m`, then `m` lines `u v w` with 1-based nodes and
/// positive integer weights.
pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let lines = lines(text);
    let (header, body) = lines.split_first().ok_or_else(|| eof(text, "missing header `n m`"))?;
    let header = expect_arity(header, 2, "header `n m`")?;
    let n: usize = header[0].parse("node count")?;
    let m: usize = header[1].parse("edge count")?;
    let mut g = Graph::new(n);
    for line in body {
        if g.edge_count() == m {
            return Err(line[0].error(format!("more than the declared {m} edges")));
        }
        let f = expect_arity(line, 3, "edge `u v w`")?;
        let u = index(&f[0], n, "node")?;
        let v = index(&f[1], n, "node")?;
        let w: u64 = f[2].parse("weight")?;
        if u == v {
            return Err(f[1].error("self-loop"));
        }
        if w == 0 {
            return Err(f[2].error("weight must be positive"));
        }
        if g.edge_id(u, v).is_some() {
            return Err(f[0].error(format!("duplicate edge {}-{}", u + 1, v + 1)));
        }
        g.add_edge(u, v, w).map_err(|e| f[0].error(e.to_string()))?;
    }
    if g.edge_count() != m {
        return Err(eof(text, format!("declared {m} edges, found {}", g.edge_count())));
    }
    Ok(g)
}

/// A polynomial matrix with the modulus exponent `k` and degree cap `d` it was
/// declared with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixFile {
    pub matrix: SymPolyMatrix,
    pub bits: u32,
    pub cap: usize,
}

/// Coefficient list, lowest degree first: `3,0,1` is `3 + x^2`. Negative
/// coefficients are taken modulo `2^k`.
pub fn parse_poly(text: &str, modulus: Modulus) -> Result<TruncatedPoly, (usize, String)> {
    let mut coeffs = Vec::new();
    let mut offset = 0;
    for part in text.split(',') {
        let c: i64 = part.parse().map_err(|_| (offset, format!("bad coefficient `{part}`")))?;
        coeffs.push(c);
        offset += part.chars().count() + 1;
    }
    Ok(TruncatedPoly::from_signed_coeffs(modulus, &coeffs))
}

/// Inverse of [`parse_poly`]; the zero polynomial prints as `0`.
pub fn format_poly(p: &TruncatedPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    p.coeffs().iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

/// Matrix file: a header `2n k d`, then one line `i j <poly>` per nonzero
/// unordered pair.
pub fn parse_matrix(text: &str) -> Result<MatrixFile, ParseError> {
    let lines = lines(text);
    let (header, body) = lines.split_first().ok_or_else(|| eof(text, "missing header `2n k d`"))?;
    let header = expect_arity(header, 3, "header `2n k d`")?;
    let size: usize = header[0].parse("matrix size")?;
    if size % 2 == 1 {
        return Err(header[0].error(format!("matrix size {size} is odd")));
    }
    let bits: u32 = header[1].parse("modulus exponent")?;
    let cap: usize = header[2].parse("degree cap")?;
    let modulus = Modulus::new(bits, cap).map_err(|e| header[1].error(e.to_string()))?;
    let mut matrix = SymPolyMatrix::zeros(size, modulus).map_err(|e| header[0].error(e.to_string()))?;
    let mut seen = std::collections::BTreeSet::new();
    for line in body {
        let f = expect_arity(line, 3, "entry `i j <poly>`")?;
        let i = index(&f[0], size, "row")?;
        let j = index(&f[1], size, "column")?;
        if i == j {
            return Err(f[1].error("diagonal entries are not allowed"));
        }
        if !seen.insert((i.min(j), i.max(j))) {
            return Err(f[0].error(format!("pair {} {} listed twice", i + 1, j + 1)));
        }
        let poly = parse_poly(f[2].text, modulus)
            .map_err(|(off, msg)| ParseError { line: f[2].line, column: f[2].column + off, message: msg })?;
        matrix.set(i, j, poly).map_err(|e| f[0].error(e.to_string()))?;
    }
    Ok(MatrixFile { matrix, bits, cap })
}

/// Certificate file: a header `tau N k`, then per term `n_i`, the `2 tau`
/// entries of `p^i` and the `2 tau` entries of `q^i`, split across lines
/// freely.
pub fn parse_cert(text: &str) -> Result<HRepresentation, ParseError> {
    let lines = lines(text);
    let (header, body) = lines.split_first().ok_or_else(|| eof(text, "missing header `tau N k`"))?;
    let header = expect_arity(header, 3, "header `tau N k`")?;
    let tau: usize = header[0].parse("tau")?;
    let count: usize = header[1].parse("term count")?;
    let k: u32 = header[2].parse("modulus exponent")?;
    if tau == 0 {
        return Err(header[0].error("tau must be positive"));
    }
    if count == 0 {
        return Err(header[1].error("at least one term is required"));
    }
    if !(1..=63).contains(&k) {
        return Err(header[2].error(format!("k = {k} outside 1..=63")));
    }
    let mut tokens = body.iter().flatten();
    let mut next = |what: &str| -> Result<i64, ParseError> {
        match tokens.next() {
            Some(t) => t.parse(what),
            None => Err(eof(text, format!("file ends before {what}"))),
        }
    };
    let mut terms = Vec::with_capacity(count);
    for _ in 0..count {
        let n = next("n_i")?;
        let p = (0..2 * tau).map(|_| next("an entry of p")).collect::<Result<_, _>>()?;
        let q = (0..2 * tau).map(|_| next("an entry of q")).collect::<Result<_, _>>()?;
        terms.push(HTerm { n, p, q });
    }
    if let Some(extra) = tokens.next() {
        return Err(extra.error(format!("more than the declared {count} terms")));
    }
    HRepresentation::new(tau, k, terms).map_err(|e| header[0].error(e.to_string()))
}

/// Comma-separated 1-based node ids, converted to 0-based. The empty string
/// is the empty list.
pub fn parse_ids(text: &str) -> Result<Vec<usize>, String> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|s| match s.trim().parse::<usize>() {
            Ok(0) | Err(_) => Err(format!("bad node id `{s}`")),
            Ok(i) => Ok(i - 1),
        })
        .collect()
}

/// One path per line, 1-based node ids separated by spaces.
pub fn format_packing(p: &PathPacking) -> String {
    let mut out = String::new();
    for path in &p.paths {
        let ids: Vec<String> = path.iter().map(|v| (v + 1).to_string()).collect();
        out.push_str(&ids.join(" "));
        out.push('\n');
    }
    out
}
