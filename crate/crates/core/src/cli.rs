//! The `ctn` command-line front end.
//!
//! Every report embeds the parsed configuration and [`VERSION`]; reports are
//! byte-stable for identical configurations. Wall-clock data goes to an
//! optional `<out>.log` sidecar.
//!
//! Exit codes: 0 success, 1 a checked identity or lemma failed, 2 usage error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::auxiliary::{self, AuxKind};
use crate::cycles::{self, Adjacency, CensusStatus, CENSUS_MAX_N};
use crate::error::CtnError;
use crate::extremal::{self, SearchReport, EXACT_MAX_N, LOCAL_MAX_LENGTH_N5, LOCAL_MAX_N};
use crate::graph::{SubgraphMask, TranspositionGraph};
use crate::io;
use crate::perm::{Permutation, MAX_DEGREE, MIN_DEGREE};
use crate::stats::{self, BoundKind};
use crate::{Rational, VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Largest `n` for the enumeration-heavy commands.
pub const ENUMERATION_MAX_N: usize = 5;
/// Longest cycle swept by `verify --suite lemmas` at `n <= 4` and at `n = 5`.
pub const SWEEP_MAX_LENGTH: usize = 12;
pub const SWEEP_MAX_LENGTH_N5: usize = 8;
pub const BOUNDS_MAX_L: usize = 100;
pub const THREADS_ENV: &str = "CTN_THREADS";

#[derive(Parser, Debug, Clone, Serialize)]
#[command(name = "ctn", version, about = "Complete transposition graph toolkit")]
pub struct Cli {
    /// Worker threads; overrides CTN_THREADS. Defaults to available parallelism.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Report path (stdout when omitted). A `<out>.log` sidecar gets timings.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Structure of CT_n, or of a subgraph given by --mask.
    Build(BuildArgs),
    /// Exhaustive 4-cycle census with the closed-form comparison.
    Census(NArgs),
    /// Counting identities on a mask, or the lemma suite.
    Verify(VerifyArgs),
    /// Search for a dense C_2l-free subgraph.
    Search(SearchArgs),
    /// Colour the edges and look for a monochromatic C_2l.
    Ramsey(RamseyArgs),
    /// Classification of the mask against every 4-cycle.
    Chi(MaskArgs),
    /// Envelope of the known upper bounds on ex(CT_n, C_2l).
    Bounds(BoundsArgs),
    /// Build one auxiliary graph and lift its cycles.
    LiftDemo(LiftArgs),
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct NArgs {
    #[arg(long)]
    pub n: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct MaskArgs {
    #[arg(long)]
    pub n: usize,
    /// Subgraph JSON file; the full graph when omitted.
    #[arg(long)]
    pub mask: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct BuildArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub mask: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Lemmas,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct VerifyArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub mask: Option<PathBuf>,
    /// Identities to check, from {1, 2, 8}.
    #[arg(long, value_delimiter = ',', default_values_t = [1u8, 2, 8])]
    pub identities: Vec<u8>,
    #[arg(long, value_enum)]
    pub suite: Option<Suite>,
    /// Also require the mask to be free of cycles of this length.
    #[arg(long)]
    pub forbid: Option<usize>,
    /// Seed for the random masks of the lemma suite.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Longest cycle length in the support sweep of the lemma suite.
    #[arg(long)]
    pub max_length: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Exact,
    Greedy,
    Local,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SearchArgs {
    #[arg(long)]
    pub n: usize,
    /// Forbidden cycle length 2l.
    #[arg(long)]
    pub forbid: usize,
    #[arg(long, value_enum, default_value_t = MethodArg::Local)]
    pub method: MethodArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 10_000)]
    pub budget: u64,
    /// Number of consecutive seeds, starting at --seed, run in parallel.
    #[arg(long, default_value_t = 1)]
    pub seeds: u64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct RamseyArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub colors: u32,
    #[arg(long)]
    pub forbid: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Colouring JSON file; a seeded uniform colouring when omitted.
    #[arg(long)]
    pub coloring: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct BoundsArgs {
    /// A single `l` or an inclusive range `a..b`.
    #[arg(long)]
    pub l: String,
    /// Also express exact bounds as edge counts of CT_n.
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct LiftArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub mask: Option<PathBuf>,
    /// Base vertex, in cycle or one-line notation.
    #[arg(long, default_value = "id")]
    pub x: String,
    /// Family index in 0..=n.
    #[arg(long, default_value_t = 1)]
    pub i: usize,
    /// Auxiliary cycle length (>= 3).
    #[arg(long, default_value_t = 3)]
    pub l: usize,
    /// Maximum number of auxiliary cycles to lift.
    #[arg(long, default_value_t = 20)]
    pub limit: usize,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] CtnError),
    #[error("{0}")]
    Io(String),
}

/// A finished run: the report text and whether every check passed.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub text: String,
    pub passed: bool,
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    version: &'static str,
    config: &'a Cli,
    passed: bool,
    report: T,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn check_n(n: usize, cap: usize, what: &str) -> Result<(), CliError> {
    if n < MIN_DEGREE || n > cap {
        return Err(usage(format!("{what}: n = {n} is outside the supported range {MIN_DEGREE} <= n <= {cap}")));
    }
    Ok(())
}

fn check_forbid(len: usize) -> Result<(), CliError> {
    cycles::check_cycle_length(len).map_err(|e| usage(e.to_string()))
}

/// Thread count from the flag, then `CTN_THREADS`; `None` means the default.
pub fn resolve_threads(flag: Option<usize>, env: Option<&str>) -> Result<Option<usize>, CliError> {
    if let Some(t) = flag {
        return Ok((t > 0).then_some(t));
    }
    match env.map(str::trim).filter(|s| !s.is_empty()) {
        None => Ok(None),
        Some(s) => s
            .parse::<usize>()
            .map(|t| (t > 0).then_some(t))
            .map_err(|_| usage(format!("{THREADS_ENV} must be a non-negative integer, got {s:?}"))),
    }
}

fn load_mask_for(graph: &TranspositionGraph, path: Option<&Path>) -> Result<SubgraphMask, CliError> {
    match path {
        None => Ok(SubgraphMask::full(graph)),
        Some(p) => {
            let file = io::read_subgraph(p).map_err(|e| usage(e.to_string()))?;
            file.to_mask(graph).map_err(|e| usage(format!("{}: {e}", p.display())))
        }
    }
}

fn envelope<T: Serialize>(cli: &Cli, passed: bool, report: T) -> Outcome {
    let text = serde_json::to_string_pretty(&Envelope { version: VERSION, config: cli, passed, report })
        .expect("reports serialize");
    Outcome { text: text + "\n", passed }
}

fn csv_preamble(cli: &Cli) -> String {
    format!(
        "# {VERSION} config={}\n",
        serde_json::to_string(cli).expect("config serializes")
    )
}

fn csv_unsupported(what: &str) -> CliError {
    usage(format!("--format csv is not available for {what}"))
}

/// Runs a parsed command on the current rayon pool.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Build(a) => run_build(cli, a),
        Command::Census(a) => run_census(cli, a),
        Command::Verify(a) => run_verify(cli, a),
        Command::Search(a) => run_search(cli, a),
        Command::Ramsey(a) => run_ramsey(cli, a),
        Command::Chi(a) => run_chi(cli, a),
        Command::Bounds(a) => run_bounds(cli, a),
        Command::LiftDemo(a) => run_lift(cli, a),
    }
}

fn run_build(cli: &Cli, a: &BuildArgs) -> Result<Outcome, CliError> {
    check_n(a.n, MAX_DEGREE, "build")?;
    let graph = TranspositionGraph::new(a.n)?;
    let mask = load_mask_for(&graph, a.mask.as_deref())?;
    if cli.format == Format::Csv {
        let text = csv_preamble(cli) + &io::degree_csv(&graph, &mask);
        return Ok(Outcome { text, passed: true });
    }
    let degrees = graph.degree_sequence(&mask);
    let enumerated_edges = degrees.iter().sum::<usize>() / 2;
    let even = (0..graph.vertex_count()).filter(|&v| graph.class_of(v) == 0).count();
    let girth = cycles::girth(&graph, &mask);
    let report = json!({
        "n": a.n,
        "vertex_count": graph.vertex_count(),
        "edge_count": graph.edge_count(),
        "valency": graph.valency(),
        "class_sizes": [even, graph.vertex_count() - even],
        "subgraph": {
            "edges": enumerated_edges,
            "min_degree": degrees.iter().min(),
            "max_degree": degrees.iter().max(),
            "support": graph.subgraph_support(&mask),
            "girth": girth.map_or(json!("acyclic"), |g| json!(g)),
        },
    });
    Ok(envelope(cli, true, report))
}

fn run_census(cli: &Cli, a: &NArgs) -> Result<Outcome, CliError> {
    check_n(a.n, CENSUS_MAX_N, "census")?;
    let graph = TranspositionGraph::new(a.n)?;
    let census = cycles::four_cycle_census(&graph)?;
    let passed = census.status != CensusStatus::Mismatch;
    if cli.format == Format::Csv {
        let mut text = csv_preamble(cli) + "edge,even,odd,four_cycles\n";
        for (e, c) in census.per_edge_counts.iter().enumerate() {
            let (u, z, _) = graph.edge_endpoints(crate::EdgeId(e))?;
            let _ = writeln!(text, "{e},{},{},{c}", graph.vertex(u).to_one_line(), graph.vertex(z).to_one_line());
        }
        return Ok(Outcome { text, passed });
    }
    Ok(envelope(cli, passed, census))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Pass,
    Fail,
    DocumentedMismatch,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub status: CheckStatus,
    pub detail: Value,
}

impl Check {
    fn new(name: &'static str, ok: bool, detail: Value) -> Self {
        let status = if ok { CheckStatus::Pass } else { CheckStatus::Fail };
        Check { name, status, detail }
    }
}

/// Every 2-path `(u, x, z)` of `CT_n`: the formula's 4-cycles match a direct
/// common-neighbour scan, one cycle for disjoint supports and two otherwise.
pub fn two_path_dichotomy(graph: &TranspositionGraph) -> Result<Value, CtnError> {
    let m = graph.valency();
    let rows: Vec<(u64, u64, u64)> = (0..graph.vertex_count())
        .into_par_iter()
        .map(|x| {
            let px = graph.vertex(x);
            let (mut disjoint, mut shared, mut bad) = (0, 0, 0);
            for t1 in 0..m {
                for t2 in t1 + 1..m {
                    let (u, z) = (graph.neighbor(x, t1), graph.neighbor(x, t2));
                    let mut common: Vec<usize> = graph
                        .neighbor_ranks(u)
                        .filter(|&w| w != x && graph.is_adjacent(w, z))
                        .collect();
                    common.sort_unstable();
                    let overlap = graph.transpositions()[t1]
                        .support()
                        .intersection(graph.transpositions()[t2].support())
                        .len();
                    let expected = if overlap == 0 { 1 } else { 2 };
                    if overlap == 0 {
                        disjoint += 1;
                    } else {
                        shared += 1;
                    }
                    let found = cycles::four_cycles_through_two_path(graph, &graph.vertex(u), &px, &graph.vertex(z));
                    let ok = match found {
                        Ok(ws) => {
                            let mut fourth: Vec<usize> = ws
                                .iter()
                                .map(|w| *w.vertices().iter().find(|&&v| v != u && v != x && v != z).expect("4-cycle"))
                                .collect();
                            fourth.sort_unstable();
                            ws.len() == expected && fourth == common
                        }
                        Err(_) => false,
                    };
                    bad += (!ok) as u64;
                }
            }
            (disjoint, shared, bad)
        })
        .collect();
    let (d, s, b) = rows.iter().fold((0, 0, 0), |a, r| (a.0 + r.0, a.1 + r.1, a.2 + r.2));
    Ok(json!({ "two_paths": d + s, "disjoint_support": d, "shared_support": s, "exceptions": b }))
}

/// Counts cycles of each even length up to `max_len` in the full graph whose
/// support exceeds their length.
pub fn support_sweep(graph: &TranspositionGraph, max_len: usize) -> Vec<Value> {
    let adj = Adjacency::full(graph);
    (cycles::MIN_CYCLE_LENGTH..=max_len)
        .step_by(2)
        .map(|len| {
            let (total, bad) =
                cycles::count_cycles_where(&adj, len, |p| cycles::vertex_cycle_support(graph, p).len() > len);
            json!({ "length": len, "cycles": total, "violations": bad })
        })
        .collect()
}

fn suite_masks(graph: &TranspositionGraph, seed: u64) -> Vec<(String, SubgraphMask)> {
    let mut rng = extremal::rng_from_seed(seed);
    let mut masks = vec![
        ("full".to_string(), SubgraphMask::full(graph)),
        ("empty".to_string(), SubgraphMask::empty(graph)),
    ];
    for k in 0..4 {
        masks.push((format!("random-{k}"), extremal::random_mask(graph, &mut rng, 0.5)));
    }
    masks
}

fn lemma_suite(graph: &TranspositionGraph, a: &VerifyArgs, user_mask: Option<SubgraphMask>) -> Result<Vec<Check>, CliError> {
    let n = graph.degree();
    let cap = if n >= ENUMERATION_MAX_N { SWEEP_MAX_LENGTH_N5 } else { SWEEP_MAX_LENGTH };
    let default_len = match n {
        3 => 6,
        4 => 8,
        _ => 6,
    };
    let max_len = a.max_length.unwrap_or(default_len);
    if max_len > cap {
        return Err(usage(format!("--max-length {max_len} exceeds the cap {cap} at n = {n}")));
    }
    check_forbid(max_len)?;

    let mut checks = Vec::new();
    let full = SubgraphMask::full(graph);
    let enumerated = graph.degree_sequence(&full).iter().sum::<usize>() / 2;
    let expected = crate::perm::factorial(n) / 2 * crate::perm::binomial2(n);
    checks.push(Check::new(
        "structure",
        graph.vertex_count() == crate::perm::factorial(n) && enumerated == expected,
        json!({ "vertices": graph.vertex_count(), "edges": enumerated, "expected_edges": expected }),
    ));
    let g = cycles::girth(graph, &full);
    checks.push(Check::new("girth", g == Some(4), json!({ "girth": g })));

    let dich = two_path_dichotomy(graph)?;
    let ok = dich["exceptions"] == 0;
    checks.push(Check::new("two-path-four-cycles", ok, dich));

    let sweep = support_sweep(graph, max_len);
    let ok = sweep.iter().all(|r| r["violations"] == 0);
    checks.push(Check::new("cycle-support", ok, json!(sweep)));

    let census = cycles::four_cycle_census(graph)?;
    let status = match census.status {
        CensusStatus::Match => CheckStatus::Pass,
        CensusStatus::DocumentedMismatch => CheckStatus::DocumentedMismatch,
        CensusStatus::Mismatch => CheckStatus::Fail,
    };
    checks.push(Check {
        name: "four-cycle-census",
        status,
        detail: json!({
            "measured_per_edge": census.per_edge_constant,
            "measured_total": census.total,
            "closed_form_per_edge": census.closed_form_per_edge.to_string(),
            "closed_form_total": census.closed_form_total.to_string(),
            "observed_formula_per_edge": census.observed_formula_per_edge,
        }),
    });

    let masks = match user_mask {
        Some(m) => vec![("mask".to_string(), m)],
        None => suite_masks(graph, a.seed),
    };
    let mut ident = Vec::new();
    let mut chi = Vec::new();
    let (mut ident_ok, mut chi_ok) = (true, true);
    for (label, m) in &masks {
        let r = auxiliary::verify_identities(graph, m)?;
        ident_ok &= r.eq1.holds && r.eq2.holds && r.eq8.holds && r.h_vertices.holds;
        ident.push(json!({ "mask": label, "eq1": r.eq1, "eq2": r.eq2, "eq8": r.eq8, "h_vertices": r.h_vertices }));
        let c = stats::chi_vector(graph, m)?;
        chi_ok &= c.identities_hold();
        chi.push(json!({
            "mask": label,
            "residual_sum": c.residual_sum.to_string(),
            "residual_weighted": c.residual_weighted.to_string(),
            "double_count": c.double_count,
        }));
    }
    checks.push(Check::new("aux-identities", ident_ok, json!(ident)));
    checks.push(Check::new("chi-identities", chi_ok, json!(chi)));

    // every short cycle of every auxiliary graph around the identity lifts
    let mut lifts = 0u64;
    let mut failures = 0u64;
    for i in 0..=n {
        let aux = auxiliary::build_aux(graph, &full, 0, i, AuxKind::G)?;
        for l in 3..=aux.vertex_count().min(5) {
            for c in aux.cycles(l) {
                lifts += 1;
                failures += auxiliary::lift_cycle(graph, &full, &aux, &c).is_err() as u64;
            }
        }
    }
    checks.push(Check::new("aux-cycle-lifting", failures == 0, json!({ "lifts": lifts, "failures": failures })));
    Ok(checks)
}

fn run_verify(cli: &Cli, a: &VerifyArgs) -> Result<Outcome, CliError> {
    check_n(a.n, auxiliary::IDENTITY_SWEEP_MAX_N, "verify")?;
    if cli.format == Format::Csv {
        return Err(csv_unsupported("verify"));
    }
    if let Some(bad) = a.identities.iter().find(|i| ![1, 2, 8].contains(*i)) {
        return Err(usage(format!("--identities accepts 1, 2 and 8, got {bad}")));
    }
    if let Some(f) = a.forbid {
        check_forbid(f)?;
    }
    let graph = TranspositionGraph::new(a.n)?;
    let mask = load_mask_for(&graph, a.mask.as_deref())?;

    let freeness = match a.forbid {
        Some(len) => {
            let f = extremal::verify_cycle_free(&graph, &mask, len)?;
            Some(json!({
                "forbidden_length": len,
                "free": f.free,
                "witness": f.witness.map(|w| io::witness_json(&graph, &w)),
            }))
        }
        None => None,
    };
    let free_ok = freeness.as_ref().is_none_or(|f| f["free"] == true);

    if a.suite == Some(Suite::Lemmas) {
        let checks = lemma_suite(&graph, a, a.mask.is_some().then(|| mask.clone()))?;
        let passed = free_ok && checks.iter().all(|c| c.status != CheckStatus::Fail);
        let report = json!({ "n": a.n, "suite": "lemmas", "checks": checks, "freeness": freeness });
        return Ok(envelope(cli, passed, report));
    }

    let r = auxiliary::verify_identities(&graph, &mask)?;
    let mut report = serde_json::Map::new();
    report.insert("n".into(), json!(a.n));
    report.insert("edges".into(), json!(r.edges));
    let mut passed = free_ok;
    for id in [1u8, 2, 8] {
        if a.identities.contains(&id) {
            let c = match id {
                1 => r.eq1,
                2 => r.eq2,
                _ => r.eq8,
            };
            passed &= c.holds;
            report.insert(format!("eq{id}"), json!(c));
        }
    }
    if a.identities.contains(&8) {
        passed &= r.h_vertices.holds;
        report.insert("h_vertices".into(), json!(r.h_vertices));
    }
    report.insert("freeness".into(), json!(freeness));
    Ok(envelope(cli, passed, Value::Object(report)))
}

#[derive(Serialize)]
struct SearchOutput<'a> {
    search: &'a SearchReport,
    bound: stats::BoundReport,
    /// Whether `pi` respects the bound, when the bound is exact.
    within_exact_bound: Option<bool>,
    lower_bound_only: bool,
}

fn run_search(cli: &Cli, a: &SearchArgs) -> Result<Outcome, CliError> {
    check_forbid(a.forbid)?;
    match a.method {
        MethodArg::Exact => check_n(a.n, EXACT_MAX_N, "exact search")?,
        _ => check_n(a.n, LOCAL_MAX_N, "heuristic search")?,
    }
    if a.method != MethodArg::Exact && a.n == LOCAL_MAX_N && a.forbid > LOCAL_MAX_LENGTH_N5 {
        return Err(usage(format!(
            "heuristic search at n = {LOCAL_MAX_N} caps --forbid at {LOCAL_MAX_LENGTH_N5}"
        )));
    }
    if a.seeds == 0 {
        return Err(usage("--seeds must be at least 1"));
    }
    let graph = TranspositionGraph::new(a.n)?;
    let report = match a.method {
        MethodArg::Exact => extremal::exact_max_cycle_free(&graph, a.forbid)?,
        MethodArg::Greedy => {
            let seeds: Vec<u64> = (0..a.seeds).map(|k| a.seed.wrapping_add(k)).collect();
            extremal::local_search_multi(&graph, a.forbid, &seeds, 0)?
        }
        MethodArg::Local => {
            let seeds: Vec<u64> = (0..a.seeds).map(|k| a.seed.wrapping_add(k)).collect();
            extremal::local_search_multi(&graph, a.forbid, &seeds, a.budget)?
        }
    };
    if cli.format == Format::Csv {
        let mut text = csv_preamble(cli) + "even,odd\n";
        for [u, z] in &report.subgraph.edges {
            let _ = writeln!(text, "{u},{z}");
        }
        return Ok(Outcome { text, passed: report.verified });
    }
    let bound = stats::bound_envelope(Some(a.n), a.forbid / 2)?;
    let within = (bound.kind == BoundKind::ExactRatio).then(|| report.pi <= Rational::new(3, 4));
    let passed = report.verified && within != Some(false);
    let out = SearchOutput {
        search: &report,
        bound,
        within_exact_bound: within,
        lower_bound_only: !report.optimal,
    };
    Ok(envelope(cli, passed, out))
}

fn run_ramsey(cli: &Cli, a: &RamseyArgs) -> Result<Outcome, CliError> {
    check_n(a.n, ENUMERATION_MAX_N, "ramsey")?;
    check_forbid(a.forbid)?;
    if a.n == ENUMERATION_MAX_N && a.forbid > LOCAL_MAX_LENGTH_N5 {
        return Err(usage(format!("ramsey at n = {ENUMERATION_MAX_N} caps --forbid at {LOCAL_MAX_LENGTH_N5}")));
    }
    if a.colors == 0 {
        return Err(usage("--colors must be at least 1"));
    }
    if cli.format == Format::Csv {
        return Err(csv_unsupported("ramsey"));
    }
    let graph = TranspositionGraph::new(a.n)?;
    let (coloring, source) = match &a.coloring {
        Some(p) => {
            let f = io::read_coloring(p).map_err(|e| usage(e.to_string()))?;
            f.validate(&graph).map_err(|e| usage(e.to_string()))?;
            (f.colors, "file")
        }
        None => (extremal::random_coloring(&graph, a.colors, a.seed), "random"),
    };
    let r = extremal::ramsey_experiment(&graph, a.colors, a.forbid, coloring).map_err(|e| usage(e.to_string()))?;
    let classes: Vec<Value> = r
        .classes
        .iter()
        .map(|c| {
            json!({
                "color": c.color,
                "edges": c.edges,
                "contains_cycle": c.witness.is_some(),
                "witness": c.witness.as_ref().map(|w| io::witness_json(&graph, w)),
            })
        })
        .collect();
    let report = json!({
        "n": r.n,
        "colors": r.colors,
        "forbidden_length": r.forbidden_length,
        "source": source,
        "coloring": r.coloring,
        "classes": classes,
        "monochromatic": r.monochromatic.as_ref().map(|(c, w)| json!({ "color": c, "witness": io::witness_json(&graph, w) })),
    });
    Ok(envelope(cli, true, report))
}

fn run_chi(cli: &Cli, a: &MaskArgs) -> Result<Outcome, CliError> {
    check_n(a.n, CENSUS_MAX_N, "chi")?;
    let graph = TranspositionGraph::new(a.n)?;
    let mask = load_mask_for(&graph, a.mask.as_deref())?;
    let chi = stats::chi_vector(&graph, &mask)?;
    let g5 = stats::graph5_claim_check(&graph, &mask)?;
    let passed = chi.identities_hold();
    if cli.format == Format::Csv {
        let mut text = csv_preamble(cli);
        text.push_str("chi0,chi1,chi2_adj,chi2_opp,chi3,chi4,pi,n4,residual_sum,residual_weighted\n");
        let _ = writeln!(
            text,
            "{},{},{},{},{},{},{},{},{},{}",
            chi.chi0, chi.chi1, chi.chi2_adj, chi.chi2_opp, chi.chi3, chi.chi4, chi.pi, chi.n4,
            chi.residual_sum, chi.residual_weighted
        );
        return Ok(Outcome { text, passed });
    }
    let report = json!({
        "n": a.n,
        "edges": mask.count(),
        "class_mapping": { "chi2_adj": "two_adjacent", "chi2_opp": "two_opposite" },
        "chi": chi,
        "graph5": { "max_per_edge": g5.max_per_edge, "edges_over_two": g5.witness_edges.len() },
    });
    Ok(envelope(cli, passed, report))
}

/// Parses `"a"` or `"a..b"` (inclusive).
pub fn parse_l_range(s: &str) -> Result<(usize, usize), CliError> {
    let bad = || usage(format!("--l expects `l` or `a..b`, got {s:?}"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let l = s.trim().parse().map_err(|_| bad())?;
            (l, l)
        }
    };
    if lo < 2 || hi > BOUNDS_MAX_L || lo > hi {
        return Err(usage(format!("--l range must satisfy 2 <= a <= b <= {BOUNDS_MAX_L}, got {s:?}")));
    }
    Ok((lo, hi))
}

fn run_bounds(cli: &Cli, a: &BoundsArgs) -> Result<Outcome, CliError> {
    let (lo, hi) = parse_l_range(&a.l)?;
    if let Some(n) = a.n {
        check_n(n, MAX_DEGREE, "bounds")?;
    }
    let rows = (lo..=hi)
        .map(|l| stats::bound_envelope(a.n, l))
        .collect::<Result<Vec<_>, _>>()?;
    if cli.format == Format::Csv {
        let mut text = csv_preamble(cli) + "l,kind,value,part\n";
        for r in &rows {
            let _ = writeln!(text, "{},{},{},{}", r.l, r.kind.short(), r.value, r.part.label());
        }
        return Ok(Outcome { text, passed: true });
    }
    Ok(envelope(cli, true, rows))
}

fn run_lift(cli: &Cli, a: &LiftArgs) -> Result<Outcome, CliError> {
    check_n(a.n, ENUMERATION_MAX_N, "lift-demo")?;
    if a.i > a.n {
        return Err(usage(format!("--i must be in 0..={}, got {}", a.n, a.i)));
    }
    if a.l < 3 {
        return Err(usage(format!("--l must be at least 3, got {}", a.l)));
    }
    if cli.format == Format::Csv {
        return Err(csv_unsupported("lift-demo"));
    }
    let graph = TranspositionGraph::new(a.n)?;
    let mask = load_mask_for(&graph, a.mask.as_deref())?;
    let x = Permutation::parse(&a.x, a.n).map_err(|e| usage(e.to_string()))?;
    let xr = graph.rank_of(&x)?;
    let aux = auxiliary::build_aux(&graph, &mask, xr, a.i, AuxKind::G)?;
    let name = |r: usize| graph.vertex(r).to_one_line();
    let all = aux.cycles(a.l);
    let mut passed = true;
    let lifted: Vec<Value> = all
        .iter()
        .take(a.limit)
        .map(|c| {
            let aux_cycle: Vec<String> = c.iter().map(|&k| name(aux.vertices[k])).collect();
            match auxiliary::lift_cycle(&graph, &mask, &aux, c) {
                Ok(w) => json!({ "aux_cycle": aux_cycle, "lift": io::witness_json(&graph, &w), "valid": true }),
                Err(e) => {
                    passed = false;
                    json!({ "aux_cycle": aux_cycle, "error": e.to_string(), "valid": false })
                }
            }
        })
        .collect();
    let report = json!({
        "n": a.n,
        "x": x.to_one_line(),
        "i": a.i,
        "l": a.l,
        "aux_vertices": aux.vertices.iter().map(|&r| name(r)).collect::<Vec<_>>(),
        "aux_edges": aux.edges.iter().map(|e| json!({
            "pair": [name(aux.vertices[e.a]), name(aux.vertices[e.b])],
            "connectors": e.connectors.iter().map(|&w| name(w)).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "aux_cycles": all.len(),
        "lifted": lifted,
    });
    Ok(envelope(cli, passed, report))
}

fn write_sidecar(out: &Path, started: SystemTime, elapsed_ms: u128, threads: usize, code: i32) {
    let unix = |t: SystemTime| t.duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let mut log = out.as_os_str().to_owned();
    log.push(".log");
    let text = format!(
        "version={VERSION}\nstarted_unix={}\nfinished_unix={}\nelapsed_ms={elapsed_ms}\nthreads={threads}\nexit={code}\n",
        unix(started),
        unix(SystemTime::now()),
    );
    let _ = std::fs::write(PathBuf::from(log), text);
}

/// Parses `args`, runs the command and writes the report. Returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let env = std::env::var(THREADS_ENV).ok();
    let threads = match resolve_threads(cli.threads, env.as_deref()) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        builder = builder.num_threads(t);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start thread pool: {e}");
            return EXIT_USAGE;
        }
    };
    let started = SystemTime::now();
    let clock = Instant::now();
    let result = pool.install(|| run(&cli));
    let code = match result {
        Ok(outcome) => {
            let written = match &cli.out {
                Some(p) => std::fs::write(p, &outcome.text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
                None => {
                    print!("{}", outcome.text);
                    Ok(())
                }
            };
            match written {
                Ok(()) if outcome.passed => EXIT_OK,
                Ok(()) => {
                    eprintln!("verification failed; see report");
                    EXIT_VERIFICATION
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    EXIT_USAGE
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    };
    if let Some(out) = &cli.out {
        write_sidecar(out, started, clock.elapsed().as_millis(), pool.current_num_threads(), code);
    }
    code
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("ctn").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn thread_resolution() {
        assert_eq!(resolve_threads(Some(3), Some("5")).unwrap(), Some(3));
        assert_eq!(resolve_threads(None, Some("5")).unwrap(), Some(5));
        assert_eq!(resolve_threads(None, None).unwrap(), None);
        assert_eq!(resolve_threads(Some(0), None).unwrap(), None);
        assert!(resolve_threads(None, Some("many")).is_err());
    }

    #[test]
    fn l_ranges() {
        assert_eq!(parse_l_range("2").unwrap(), (2, 2));
        assert_eq!(parse_l_range("2..10").unwrap(), (2, 10));
        assert!(parse_l_range("1..3").is_err());
        assert!(parse_l_range("5..3").is_err());
        assert!(parse_l_range("x").is_err());
    }

    #[test]
    fn bounds_csv_row() {
        let out = run(&parse(&["bounds", "--l", "2", "--format", "csv"])).unwrap();
        let lines: Vec<&str> = out.text.lines().collect();
        assert!(lines[0].starts_with("# "));
        assert_eq!(lines[1], "l,kind,value,part");
        assert_eq!(lines[2], "2,exact,3/4,iv");
    }

    #[test]
    fn caps_are_usage_errors() {
        let e = run(&parse(&["census", "--n", "6"])).unwrap_err();
        assert!(matches!(e, CliError::Usage(ref m) if m.contains("<= 5")));
        let e = run(&parse(&["search", "--n", "4", "--forbid", "4", "--method", "exact"])).unwrap_err();
        assert!(matches!(e, CliError::Usage(ref m) if m.contains("<= 3")));
        assert!(run(&parse(&["search", "--n", "3", "--forbid", "5"])).is_err());
    }

    #[test]
    fn exact_search_report() {
        let out = run(&parse(&["search", "--n", "3", "--forbid", "4", "--method", "exact"])).unwrap();
        assert!(out.passed);
        let v: Value = serde_json::from_str(&out.text).unwrap();
        assert_eq!(v["report"]["search"]["edges"], 6);
        assert_eq!(v["report"]["search"]["pi"], "2/3");
        assert_eq!(v["version"], VERSION);
        assert_eq!(v["config"]["command"]["command"], "search");
    }
}
