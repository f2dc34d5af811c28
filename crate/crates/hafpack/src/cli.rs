//! The `hafpack` command line.
//!
//! Exit codes: 0 success, 1 malformed input or a failed check, 2 infeasible,
//! 3 no certified answer within the trial or enumeration budget, 64 flag
//! misuse.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use hafpack_core::gallai::matching_to_packing;
use hafpack_core::hafnian::BRUTEFORCE_CAP;
use hafpack_core::oracle::{enumerate_all_packings, enumerate_matchings, is_ab_packing, verify_lemma_hafs};
use hafpack_core::pmp::{enumerate_pmps, odd_two_paths_table, two_paths_table, verify_m3_certificate};
use hafpack_core::solver::DEFAULT_TRIALS;
use hafpack_core::{
    build_gallai, haf_bruteforce, haf_mod2k, shortest_packing_oracle, solve_hrep, solve_randomized, solve_unique,
    subdivide_terminal_edges, EnumerationBudget, Error, Graph, HRepresentation, Modulus, Pmp, Solution,
    SolverConfig, SymPolyMatrix, Terminals, TruncatedPoly,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::format::{format_packing, format_poly, parse_cert, parse_graph, parse_ids, parse_matrix, ParseError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MALFORMED: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

/// Default trial budget when `--trials` is absent.
pub const TRIALS_ENV: &str = "HAFPACK_TRIALS";

#[derive(Debug, Parser)]
#[command(name = "hafpack", version, about = "Shortest perfect (A+B)-path packing via hafnians modulo 2^k")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Find a shortest packing in a family of terminal-path packings.
    Solve(SolveArgs),
    /// Print the lower terms of the hafnian of a matrix file.
    Haf {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Cross-check the algebra against exhaustive enumeration on one instance.
    Verify(VerifyArgs),
    /// Check the built-in PMP certificates or evaluate a certificate file.
    PmpCheck(PmpCheckArgs),
    /// Time the modular hafnian against pairing enumeration.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct InstanceArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Comma-separated 1-based terminal ids of A.
    #[arg(long = "A", default_value = "")]
    a: String,
    /// Comma-separated 1-based terminal ids of B.
    #[arg(long = "B", default_value = "")]
    b: String,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Trial budget; falls back to $HAFPACK_TRIALS, then to the solver default.
    #[arg(long)]
    trials: Option<usize>,
    /// abpack, two-paths, two-paths-odd or cert:<file>.
    #[arg(long, default_value = "abpack")]
    family: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Lemma24,
    Roundtrip,
    Oracle,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Run a single suite; all three run by default.
    #[arg(long, value_enum)]
    suite: Option<Suite>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("check").required(true).args(["table1", "m3_cert", "prop34", "cert"])))]
struct PmpCheckArgs {
    /// The four-term mod-4 certificate for odd two disjoint paths.
    #[arg(long)]
    table1: bool,
    /// The 64 linear dependences ruling out three disjoint paths.
    #[arg(long)]
    m3_cert: bool,
    /// The single-term mod-4 certificate for two disjoint paths.
    #[arg(long)]
    prop34: bool,
    #[arg(long)]
    cert: Option<PathBuf>,
    /// List every PMP with its value and membership.
    #[arg(long, requires = "cert")]
    enumerate: bool,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Comma-separated even matrix sizes.
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    /// Comma-separated modulus exponents.
    #[arg(long, value_delimiter = ',', required = true)]
    k: Vec<u32>,
    /// Maximum entry degree.
    #[arg(long, default_value_t = 1)]
    degree: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// A command outcome other than success: exit code plus message for stderr.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }

    fn usage(message: impl Into<String>) -> Self {
        Failure::new(EXIT_USAGE, message)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::new(EXIT_MALFORMED, format!("write failed: {e}"))
    }
}

fn core_failure(e: Error) -> Failure {
    let code = match e {
        Error::Infeasible => EXIT_INFEASIBLE,
        Error::FailureBudgetExhausted(_)
        | Error::NotUniqueOrInfeasible
        | Error::BudgetExceeded(_)
        | Error::TooLarge { .. } => EXIT_BUDGET,
        Error::InvalidTerminals(_) | Error::DimensionMismatch { .. } => EXIT_USAGE,
        _ => EXIT_MALFORMED,
    };
    Failure::new(code, e.to_string())
}

type Outcome = Result<(), Failure>;

/// Runs one invocation, writing the report to `out` and diagnostics to `err`.
/// `trials_env` is the value of [`TRIALS_ENV`], if set.
pub fn run<I, T>(args: I, trials_env: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match cli.command {
        Command::Solve(a) => solve(&a, trials_env, out),
        Command::Haf { matrix } => haf(&matrix, out),
        Command::Verify(a) => verify(&a, out),
        Command::PmpCheck(a) => pmp_check(&a, out),
        Command::Bench(a) => bench(&a, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "hafpack: {}", f.message);
            f.code
        }
    }
}

/// Process entry point reading the real environment and standard streams.
pub fn main() -> i32 {
    let env = std::env::var(TRIALS_ENV).ok();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = run(std::env::args_os(), env.as_deref(), &mut stdout.lock(), &mut stderr.lock());
    let _ = std::io::stdout().flush();
    code
}

fn load<T>(path: &Path, parse: impl Fn(&str) -> Result<T, ParseError>) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_MALFORMED, format!("{}: cannot read: {e}", path.display())))?;
    parse(&text).map_err(|e| Failure::new(EXIT_MALFORMED, format!("{}:{e}", path.display())))
}

fn load_instance(args: &InstanceArgs) -> Result<(Graph, Terminals), Failure> {
    let a = parse_ids(&args.a).map_err(|e| Failure::usage(format!("--A: {e}")))?;
    let b = parse_ids(&args.b).map_err(|e| Failure::usage(format!("--B: {e}")))?;
    let t = Terminals::new(a, b).map_err(|e| Failure::usage(e.to_string()))?;
    let g = load(&args.graph, parse_graph)?;
    t.check_against(&g).map_err(|e| Failure::usage(e.to_string()))?;
    Ok((g, t))
}

fn trials(flag: Option<usize>, env: Option<&str>) -> Result<usize, Failure> {
    let trials = match (flag, env) {
        (Some(t), _) => t,
        (None, Some(v)) => v
            .trim()
            .parse()
            .map_err(|_| Failure::usage(format!("{TRIALS_ENV}: expected a positive integer, found `{v}`")))?,
        (None, None) => DEFAULT_TRIALS,
    };
    if trials == 0 {
        return Err(Failure::usage("the trial budget must be positive"));
    }
    Ok(trials)
}

enum Family {
    AbPacking,
    Certificate(HRepresentation),
}

fn family(name: &str) -> Result<Family, Failure> {
    match name {
        "abpack" => Ok(Family::AbPacking),
        "two-paths" => Ok(Family::Certificate(HRepresentation::two_paths())),
        "two-paths-odd" => Ok(Family::Certificate(HRepresentation::two_paths_odd())),
        _ => match name.strip_prefix("cert:") {
            Some(path) if !path.is_empty() => Ok(Family::Certificate(load(Path::new(path), parse_cert)?)),
            _ => Err(Failure::usage(format!(
                "unknown family `{name}` (expected abpack, two-paths, two-paths-odd or cert:<file>)"
            ))),
        },
    }
}

fn report_solution(out: &mut dyn Write, sol: &Solution) -> Outcome {
    out.write_all(format_packing(&sol.packing).as_bytes())?;
    writeln!(out, "weight={} trials={}", sol.weight, sol.trials)?;
    Ok(())
}

fn solve(args: &SolveArgs, trials_env: Option<&str>, out: &mut dyn Write) -> Outcome {
    let family = family(&args.family)?;
    let config = SolverConfig { seed: args.seed, trials: trials(args.trials, trials_env)? };
    let (g, t) = load_instance(&args.instance)?;
    let result = match &family {
        Family::AbPacking if g.is_uniform() => solve_randomized(&g, &t, &config),
        Family::AbPacking => weighted(&g, &t, &config),
        Family::Certificate(rep) => {
            if rep.tau() != t.tau() {
                return Err(Failure::usage(format!(
                    "the family has {} terminals but --A/--B name {}",
                    2 * rep.tau(),
                    2 * t.tau()
                )));
            }
            solve_hrep(&g, &t, rep, &config)
        }
    };
    match result {
        Ok(sol) => report_solution(out, &sol),
        Err(Error::Infeasible) => {
            writeln!(out, "INFEASIBLE")?;
            Err(core_failure(Error::Infeasible))
        }
        Err(e) => Err(core_failure(e)),
    }
}

/// Arbitrary weights go to the unique-optimum solver. Its scalar also vanishes
/// when shortest packings cancel, so feasibility is settled on unit weights.
fn weighted(g: &Graph, t: &Terminals, config: &SolverConfig) -> hafpack_core::Result<Solution> {
    match solve_unique(g, t, None) {
        Err(Error::Infeasible) => {
            let unit = g.with_weights(&vec![1; g.edge_count()])?;
            match solve_randomized(&unit, t, config) {
                Ok(_) => Err(Error::NotUniqueOrInfeasible),
                Err(e) => Err(e),
            }
        }
        other => other,
    }
}

fn haf(path: &Path, out: &mut dyn Write) -> Outcome {
    let file = load(path, parse_matrix)?;
    let h = haf_mod2k(&file.matrix, file.bits, file.cap).map_err(core_failure)?;
    writeln!(out, "{}", format_poly(&h))?;
    Ok(())
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn verify(args: &VerifyArgs, out: &mut dyn Write) -> Outcome {
    let (g, t) = load_instance(&args.instance)?;
    let budget = EnumerationBudget::default();
    let suites = match args.suite {
        Some(s) => vec![s],
        None => vec![Suite::Lemma24, Suite::Roundtrip, Suite::Oracle],
    };
    let mut all = true;
    for suite in suites {
        let ok = match suite {
            Suite::Lemma24 => verify_lemma(&g, &t, &budget, out)?,
            Suite::Roundtrip => verify_roundtrip(&g, &t, &budget, out)?,
            Suite::Oracle => verify_oracle(&g, &t, &budget, args.seed, out)?,
        };
        all &= ok;
    }
    if all {
        Ok(())
    } else {
        Err(Failure::new(EXIT_MALFORMED, "verification failed"))
    }
}

fn verify_lemma(g: &Graph, t: &Terminals, budget: &EnumerationBudget, out: &mut dyn Write) -> Result<bool, Failure> {
    let r = verify_lemma_hafs(g, t, budget).map_err(core_failure)?;
    let min = r.min_weight.map_or("none".into(), |w| w.to_string());
    writeln!(
        out,
        "lemma24 {} matchings={} packings={} hafnian={} packing_sets={} sign_table={} factorization={} min_weight={} coefficient={} expected={}",
        verdict(r.passed()),
        r.matchings,
        r.packings,
        verdict(r.hafnian_matches),
        verdict(r.packing_sets_match),
        verdict(r.sign_table_ok),
        verdict(r.factorization_ok),
        min,
        r.min_coefficient,
        r.expected_coefficient,
    )?;
    Ok(r.passed())
}

fn verify_roundtrip(g: &Graph, t: &Terminals, budget: &EnumerationBudget, out: &mut dyn Write) -> Result<bool, Failure> {
    let family = |p: &hafpack_core::PathPacking| is_ab_packing(p, t);
    let sub = subdivide_terminal_edges(g, t);
    let direct = shortest_packing_oracle(g, t, family, budget);
    let via = shortest_packing_oracle(&sub.graph, t, family, budget);
    let (optimum_ok, optimum) = match (direct, via) {
        (Ok(x), Ok(y)) => {
            let mut restored: Vec<_> = y.packings.iter().map(|p| sub.restore(p).canonical()).collect();
            restored.sort();
            (x.weight == y.weight && restored == x.packings, x.weight.to_string())
        }
        (Err(Error::Infeasible), Err(Error::Infeasible)) => (true, "infeasible".into()),
        (Err(e), _) | (_, Err(e)) if !matches!(e, Error::Infeasible) => return Err(core_failure(e)),
        _ => (false, "mismatch".into()),
    };

    let h = build_gallai(&sub.graph, t).map_err(core_failure)?;
    let mut traced = Vec::new();
    for m in enumerate_matchings(&h, budget).map_err(core_failure)? {
        traced.push(matching_to_packing(&h, &m).map_err(core_failure)?.canonical());
    }
    traced.sort();
    traced.dedup();
    let all = enumerate_all_packings(&sub.graph, t, budget).map_err(core_failure)?;
    let trace_ok = traced == all;
    let ok = optimum_ok && trace_ok;
    writeln!(
        out,
        "roundtrip {} optimum={optimum} subdivision={} matchings_to_packings={} packings={}",
        verdict(ok),
        verdict(optimum_ok),
        verdict(trace_ok),
        all.len()
    )?;
    Ok(ok)
}

fn verify_oracle(
    g: &Graph,
    t: &Terminals,
    budget: &EnumerationBudget,
    seed: u64,
    out: &mut dyn Write,
) -> Result<bool, Failure> {
    let oracle = match shortest_packing_oracle(g, t, |p| is_ab_packing(p, t), budget) {
        Ok(o) => Some(o),
        Err(Error::Infeasible) => None,
        Err(e) => return Err(core_failure(e)),
    };
    let uniform = g.is_uniform();
    if !uniform && oracle.as_ref().is_some_and(|o| !o.is_unique()) {
        writeln!(out, "oracle SKIP weights are not uniform and the optimum is not unique")?;
        return Ok(true);
    }
    let solved = if uniform {
        solve_randomized(g, t, &SolverConfig { seed, trials: DEFAULT_TRIALS })
    } else {
        solve_unique(g, t, None)
    };
    let (ok, detail) = match (&oracle, solved) {
        (Some(o), Ok(s)) => {
            let member = o.packings.contains(&s.packing.clone().canonical());
            (s.weight == o.weight && member, format!("optimum={} solver={}", o.weight, s.weight))
        }
        (None, Err(Error::Infeasible)) => (true, "optimum=infeasible solver=infeasible".into()),
        (None, Err(Error::NotUniqueOrInfeasible)) if !uniform => {
            (true, "optimum=infeasible solver=infeasible".into())
        }
        (Some(o), Err(e)) => (false, format!("optimum={} solver=error({e})", o.weight)),
        (None, Ok(s)) => (false, format!("optimum=infeasible solver={}", s.weight)),
        (None, Err(e)) => (false, format!("optimum=infeasible solver=error({e})")),
    };
    writeln!(out, "oracle {} {detail}", verdict(ok))?;
    Ok(ok)
}

fn pair_sets(m: &Pmp) -> Vec<(usize, usize)> {
    m.pairs().iter().map(|&(s, t, _)| (s, t)).collect()
}

fn pmp_check(args: &PmpCheckArgs, out: &mut dyn Write) -> Outcome {
    let ok = if args.table1 {
        table1(out)?
    } else if args.m3_cert {
        m3_cert(out)?
    } else if args.prop34 {
        prop34(out)?
    } else {
        let path = args.cert.as_deref().expect("group requires one check");
        let rep = load(path, parse_cert)?;
        cert(&rep, args.enumerate, out)?
    };
    if ok {
        Ok(())
    } else {
        Err(Failure::new(EXIT_MALFORMED, "certificate check failed"))
    }
}

fn table1(out: &mut dyn Write) -> Result<bool, Failure> {
    let rows = odd_two_paths_table();
    writeln!(out, "{:<18}{:>4}{:>4}{:>4}{:>4}{:>14}", "PMP", "C1", "C2", "C3", "C4", "C1+C2-C3-C4")?;
    let mut ok = true;
    for r in &rows {
        writeln!(
            out,
            "{:<18}{:>4}{:>4}{:>4}{:>4}{:>14}",
            r.pmp.to_string(),
            r.c[0],
            r.c[1],
            r.c[2],
            r.c[3],
            r.combined
        )?;
        let p = r.pmp.pairs();
        let wanted = pair_sets(&r.pmp) == [(0, 1), (2, 3)] && p[0].2 != p[1].2;
        ok &= (r.combined.rem_euclid(4) != 0) == wanted;
    }
    writeln!(out, "represents exactly {{(12,o),(34,e)}} and {{(12,e),(34,o)}} mod 4: {}", verdict(ok))?;
    Ok(ok)
}

fn prop34(out: &mut dyn Write) -> Result<bool, Failure> {
    writeln!(out, "{:<18}{:>6}", "PMP", "value")?;
    let mut ok = true;
    for (m, v) in two_paths_table() {
        writeln!(out, "{:<18}{:>6}", m.to_string(), v)?;
        ok &= (v.rem_euclid(4) != 0) == (pair_sets(&m) == [(0, 1), (2, 3)]);
    }
    writeln!(out, "represents exactly the PMPs pairing 12 and 34 mod 4: {}", verdict(ok))?;
    Ok(ok)
}

fn m3_cert(out: &mut dyn Write) -> Result<bool, Failure> {
    let checks = verify_m3_certificate();
    let held = checks.iter().filter(|c| c.holds()).count();
    for c in checks.iter().filter(|c| !c.holds()) {
        let chi: String = (0..6).map(|i| if c.chi >> i & 1 == 1 { '1' } else { '0' }).collect();
        writeln!(out, "chi={chi} lhs={} rhs={}", c.lhs, c.rhs)?;
    }
    writeln!(out, "{held}/{} equations hold", checks.len())?;
    Ok(held == checks.len())
}

/// Largest `tau` whose PMPs are listed; beyond it the list has millions of rows.
const MAX_ENUMERATE_TAU: usize = 6;

fn cert(rep: &HRepresentation, enumerate: bool, out: &mut dyn Write) -> Result<bool, Failure> {
    writeln!(out, "tau={} terms={} k={}", rep.tau(), rep.terms().len(), rep.k())?;
    if !enumerate {
        return Ok(true);
    }
    if rep.tau() > MAX_ENUMERATE_TAU {
        return Err(Failure::usage(format!("--enumerate supports tau <= {MAX_ENUMERATE_TAU}")));
    }
    let pmps = enumerate_pmps(2 * rep.tau());
    let mut members = 0;
    for m in &pmps {
        let value = rep.value(m).map_err(core_failure)?;
        let member = rep.contains(m).map_err(core_failure)?;
        members += usize::from(member);
        writeln!(out, "{m} value={value} member={}", if member { "yes" } else { "no" })?;
    }
    writeln!(out, "members: {members} of {}", pmps.len())?;
    Ok(true)
}

/// Symmetric matrix with independent uniform coefficients of degree at most `degree`.
fn random_matrix(rng: &mut ChaCha8Rng, size: usize, modulus: Modulus, degree: usize) -> Result<SymPolyMatrix, Failure> {
    let mut a = SymPolyMatrix::zeros(size, modulus).map_err(core_failure)?;
    for i in 0..size {
        for j in i + 1..size {
            let coeffs: Vec<u64> = (0..=degree).map(|_| rng.random()).collect();
            a.set(i, j, TruncatedPoly::from_coeffs(modulus, &coeffs)).map_err(core_failure)?;
        }
    }
    Ok(a)
}

fn bench(args: &BenchArgs, out: &mut dyn Write) -> Outcome {
    if let Some(s) = args.sizes.iter().find(|&&s| s == 0 || s % 2 == 1) {
        return Err(Failure::usage(format!("--sizes: {s} is not a positive even size")));
    }
    if let Some(k) = args.k.iter().find(|&&k| !(1..=63).contains(&k)) {
        return Err(Failure::usage(format!("--k: {k} outside 1..=63")));
    }
    writeln!(out, "{:>5}{:>4}{:>5}{:>14}{:>14}{:>7}", "size", "k", "d", "haf_ms", "brute_ms", "agree")?;
    let mut all = true;
    for &size in &args.sizes {
        let cap = size / 2 * args.degree;
        for &k in &args.k {
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed ^ (size as u64) << 8 ^ u64::from(k));
            let modulus = Modulus::new(k, cap).map_err(core_failure)?;
            let a = random_matrix(&mut rng, size, modulus, args.degree)?;
            let start = Instant::now();
            let fast = haf_mod2k(&a, k, cap).map_err(core_failure)?;
            let fast_ms = start.elapsed().as_secs_f64() * 1e3;
            let (brute_ms, agree) = if size <= BRUTEFORCE_CAP {
                let start = Instant::now();
                let slow = haf_bruteforce(&a).map_err(core_failure)?;
                let ms = start.elapsed().as_secs_f64() * 1e3;
                all &= slow == fast;
                (format!("{ms:.3}"), verdict(slow == fast).to_lowercase())
            } else {
                ("-".into(), "-".into())
            };
            writeln!(out, "{size:>5}{k:>4}{cap:>5}{fast_ms:>14.3}{brute_ms:>14}{agree:>7}")?;
        }
    }
    if all {
        Ok(())
    } else {
        Err(Failure::new(EXIT_MALFORMED, "modular hafnian disagrees with pairing enumeration"))
    }
}
