//! Command-line front end.
//!
//! Results go to stdout as JSON (CSV for `check-bounds`, the text format for
//! `gen`). Errors go to stderr as one JSON line. Exit codes: 0 success,
//! 1 usage, 2 input, 3 internal invariant failure, 4 a bound was violated.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::bounds::{check_bounds, default_suite, to_csv, BoundsSummary};
use crate::decomposition::{decompose_rooted, Outcome};
use crate::digraph::{parse_digraph, Digraph};
use crate::error::{BoundsError, DecomposeError, GenError, GraphError, JsonError, ParseError, SolveError};
use crate::generators::{gen, Family, GenSpec};
use crate::json::{decompose_outcome_to_json, parse_artifact, solve_result_to_json, tree_to_json, Artifact};
use crate::scc::{has_out_branching, in_l_sufficient};
use crate::solver::{brute_force_out_branching, brute_force_out_tree, solve, Problem, SolverConfig, BRUTE_FORCE_MAX_N};
use crate::tree::{validate_out_tree, OutTree};

#[derive(Parser, Debug)]
#[command(name = "leafbranch", version, about = "Out-trees and out-branchings with many leaves")]
pub struct Cli {
    /// Progress and diagnostics on stderr.
    #[arg(short, long, global = true)]
    pub verbose: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide whether an out-branching (dmlob) or out-tree (dmlot) with k leaves exists.
    Solve {
        #[arg(long, value_parser = parse_problem)]
        problem: Problem,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        /// Digraph files; stdin when omitted. One JSON line per file.
        inputs: Vec<PathBuf>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Run the decomposition: a k-leaf witness or a path decomposition.
    Decompose {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        /// Root of the starting out-branching (1-based).
        #[arg(long)]
        root: Option<usize>,
        /// Also write a DOT drawing of the witness here.
        #[arg(long)]
        dot: Option<PathBuf>,
        input: Option<PathBuf>,
    },
    /// Exact leaf counts by exhaustive search (small digraphs only).
    Oracle { input: Option<PathBuf> },
    /// Generate a digraph in the text format.
    Gen {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Measure known lower bounds on generated instances; CSV on stdout.
    CheckBounds {
        #[command(flatten)]
        family: FamilyArgs,
        /// Seed range `a..b` (inclusive) for the given family.
        #[arg(long, default_value = "1..50")]
        seeds: String,
        #[arg(long, default_value_t = BRUTE_FORCE_MAX_N)]
        oracle_budget: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a witness, decomposition or solve result against a digraph.
    Validate {
        #[arg(long)]
        against: PathBuf,
        input: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
pub struct BudgetArgs {
    /// Maximum dynamic-programming table entries.
    #[arg(long, default_value_t = 10_000_000)]
    pub table_budget: usize,
    /// Maximum branch-and-bound nodes; 0 means unlimited.
    #[arg(long, default_value_t = 100_000_000)]
    pub node_budget: u64,
    /// Widest decomposition handed to the dynamic program.
    #[arg(long, default_value_t = 16)]
    pub width_budget: usize,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

impl BudgetArgs {
    fn config(&self) -> SolverConfig {
        SolverConfig {
            table_budget: self.table_budget,
            node_budget: (self.node_budget > 0).then_some(self.node_budget),
            width_budget: self.width_budget,
            jobs: self.jobs.max(1),
        }
    }
}

#[derive(Args, Debug)]
pub struct FamilyArgs {
    /// cycle, double-cycle, path, out-star, tournament-random,
    /// tournament-transitive, multipartite-tournament, min-in-degree-random,
    /// strong-random
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Minimum in-degree for min-in-degree-random.
    #[arg(long)]
    pub d: Option<usize>,
    /// Part sizes for multipartite-tournament, e.g. `2,3,3`.
    #[arg(long, value_delimiter = ',')]
    pub parts: Option<Vec<usize>>,
    /// Extra arcs for strong-random.
    #[arg(long)]
    pub extra: Option<usize>,
    #[arg(long)]
    pub oriented: bool,
}

impl FamilyArgs {
    fn family(&self) -> Result<Option<Family>, CliError> {
        match &self.family {
            None => Ok(None),
            Some(tag) => Family::from_tag(tag, self.n, self.d, self.parts.clone(), self.extra, self.oriented)
                .map(Some)
                .map_err(|e| CliError::Usage(e.to_string())),
        }
    }
}

fn parse_problem(s: &str) -> Result<Problem, String> {
    s.parse()
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Input(String),
    Internal(String),
    BoundViolated(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Input(_) => 2,
            CliError::Internal(_) => 3,
            CliError::BoundViolated(_) => 4,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Input(_) => "input",
            CliError::Internal(_) => "internal",
            CliError::BoundViolated(_) => "bound-violated",
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) | CliError::Input(m) | CliError::Internal(m) => m.clone(),
            CliError::BoundViolated(n) => format!("{n} bound report(s) violated"),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({"error": {"kind": self.kind(), "message": self.message()}})
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<JsonError> for CliError {
    fn from(e: JsonError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::Contract(_) => CliError::Internal(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<GenError> for CliError {
    fn from(e: GenError) -> Self {
        match e {
            GenError::InvalidParameters(_) => CliError::Usage(e.to_string()),
            GenError::SamplingExhausted { .. } => CliError::Input(e.to_string()),
        }
    }
}

impl From<DecomposeError> for CliError {
    fn from(e: DecomposeError) -> Self {
        match e {
            DecomposeError::Graph(g) => g.into(),
            DecomposeError::Invariant(_) => CliError::Internal(e.to_string()),
        }
    }
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::Decompose(d) => d.into(),
            SolveError::Graph(g) => g.into(),
            // Budgets and size guards: the input is too large for the limits.
            SolveError::OracleBudget { .. } | SolveError::NodeBudget(_) | SolveError::OverBudget(_) => {
                CliError::Input(e.to_string())
            }
            SolveError::InvalidDecomposition(_) => CliError::Internal(e.to_string()),
        }
    }
}

impl From<BoundsError> for CliError {
    fn from(e: BoundsError) -> Self {
        match e {
            BoundsError::Gen(g) => g.into(),
            BoundsError::Solve(s) => s.into(),
            BoundsError::Graph(g) => g.into(),
            BoundsError::Precondition(_) => CliError::Internal(e.to_string()),
        }
    }
}

fn io_error(path: Option<&Path>, e: io::Error) -> CliError {
    match path {
        Some(p) => CliError::Input(format!("{}: {e}", p.display())),
        None => CliError::Input(format!("stdin: {e}")),
    }
}

fn read_input(path: Option<&Path>) -> Result<String, CliError> {
    match path {
        Some(p) if p != Path::new("-") => std::fs::read_to_string(p).map_err(|e| io_error(Some(p), e)),
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(|e| io_error(None, e))?;
            Ok(s)
        }
    }
}

fn read_digraph(path: Option<&Path>) -> Result<Digraph, CliError> {
    let text = read_input(path)?;
    parse_digraph(&text).map_err(|e| match path {
        Some(p) => CliError::Input(format!("{}: {e}", p.display())),
        None => e.into(),
    })
}

fn write_output(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Input(format!("{}: {e}", p.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Internal(format!("stdout: {e}"))),
    }
}

/// DOT drawing: tree arcs solid, other arcs dashed, leaves double-circled.
pub fn to_dot(d: &Digraph, tree: Option<&OutTree>) -> String {
    let mut s = String::from("digraph G {\n  node [shape=circle];\n");
    let leaves: Vec<usize> = tree.map(OutTree::leaves).unwrap_or_default();
    for v in 0..d.n() {
        if leaves.binary_search(&v).is_ok() {
            let _ = writeln!(s, "  {} [shape=doublecircle];", v + 1);
        } else {
            let _ = writeln!(s, "  {};", v + 1);
        }
    }
    for (u, v) in d.arcs() {
        let in_tree = tree.is_some_and(|t| t.parent.get(&v) == Some(&u));
        let style = if in_tree { "solid" } else { "dashed" };
        let _ = writeln!(s, "  {} -> {} [style={style}];", u + 1, v + 1);
    }
    s.push_str("}\n");
    s
}

fn parse_seeds(s: &str) -> Result<std::ops::RangeInclusive<u64>, CliError> {
    let bad = || CliError::Usage(format!("--seeds expects `a..b`, got `{s}`"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let a: u64 = a.trim().parse().map_err(|_| bad())?;
    let b: u64 = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok(a..=b)
}

fn json_line(v: &Value) -> String {
    let mut s = v.to_string();
    s.push('\n');
    s
}

/// Runs a parsed invocation, writing results to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Solve { problem, k, inputs, budget } => {
            let cfg = budget.config();
            let k = *k as usize;
            let one = |path: Option<&Path>| -> Result<String, CliError> {
                let d = read_digraph(path)?;
                if *problem == Problem::Dmlob && has_out_branching(&d) && !in_l_sufficient(&d) {
                    log::warn!("digraph fails the sufficient membership test; the answer is still exact");
                }
                let r = solve(&d, *problem, k, &cfg)?;
                log::info!("{} k={k}: answer {} via {}", problem, r.answer, r.method);
                Ok(json_line(&solve_result_to_json(&r)))
            };
            let lines: Vec<Result<String, CliError>> = if inputs.is_empty() {
                vec![one(None)]
            } else if cfg.jobs > 1 && inputs.len() > 1 {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(cfg.jobs)
                    .build()
                    .map_err(|e| CliError::Internal(e.to_string()))?;
                pool.install(|| inputs.par_iter().map(|p| one(Some(p))).collect())
            } else {
                inputs.iter().map(|p| one(Some(p))).collect()
            };
            for line in lines {
                write_output(None, &line?, out)?;
            }
            Ok(())
        }
        Command::Decompose { k, root, dot, input } => {
            let d = read_digraph(input.as_deref())?;
            let root = match root {
                Some(0) => return Err(CliError::Usage("--root is 1-based".into())),
                Some(r) if *r > d.n() => {
                    return Err(CliError::Usage(format!("--root {r} exceeds n = {}", d.n())))
                }
                Some(r) => Some(r - 1),
                None => None,
            };
            let o = decompose_rooted(&d, root, *k as usize)?;
            log::info!("decompose finished at stage {}", o.final_stage());
            if let Some(path) = dot {
                let tree = match &o.outcome {
                    Outcome::Witness(t) => Some(t),
                    Outcome::Decomposition(_) => None,
                };
                write_output(Some(path), &to_dot(&d, tree), out)?;
            }
            write_output(None, &json_line(&decompose_outcome_to_json(&o)), out)
        }
        Command::Oracle { input } => {
            let d = read_digraph(input.as_deref())?;
            let (ls, tb) = brute_force_out_branching(&d)?;
            let (l, tt) = brute_force_out_tree(&d)?;
            let v = json!({
                "n": d.n(),
                "arcs": d.arc_count(),
                "ellS": ls,
                "ell": l,
                "inL": ls == 0 || ls == l,
                "inLSufficient": in_l_sufficient(&d),
                "outBranching": tb.as_ref().map(tree_to_json),
                "outTree": tt.as_ref().map(tree_to_json),
            });
            write_output(None, &json_line(&v), out)
        }
        Command::Gen { family, seed, out: path } => {
            let family = family
                .family()?
                .ok_or_else(|| CliError::Usage("gen needs --family".into()))?;
            let d = gen(&GenSpec::new(family, *seed))?;
            write_output(path.as_deref(), &d.to_text(), out)
        }
        Command::CheckBounds { family, seeds, oracle_budget, jobs, out: path } => {
            let specs: Vec<GenSpec> = match family.family()? {
                Some(f) => parse_seeds(seeds)?.map(|s| GenSpec::new(f.clone(), s)).collect(),
                None => default_suite(),
            };
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads((*jobs).max(1))
                .build()
                .map_err(|e| CliError::Internal(e.to_string()))?;
            let reports = pool.install(|| check_bounds(&specs, *oracle_budget))?;
            write_output(path.as_deref(), &to_csv(&reports), out)?;
            let summary = BoundsSummary::from_reports(&reports);
            eprintln!("check-bounds: {summary}");
            if summary.violations > 0 {
                return Err(CliError::BoundViolated(summary.violations));
            }
            Ok(())
        }
        Command::Validate { against, input } => {
            let d = read_digraph(Some(against))?;
            let text = read_input(input.as_deref())?;
            let artifact = parse_artifact(&text, d.n())?;
            write_output(None, &json_line(&validate_artifact(&d, &artifact)), out)
        }
    }
}

/// Validation report for an artifact; `valid` is false on any violation.
pub fn validate_artifact(d: &Digraph, a: &Artifact) -> Value {
    match a {
        Artifact::Tree { tree, k, answer, problem } => {
            let report = validate_out_tree(d, tree);
            let mut violations: Vec<String> = report.violations.iter().map(ToString::to_string).collect();
            if let (Some(k), Some(true)) = (k, answer) {
                if report.leaf_count < *k {
                    violations.push(format!("answer yes but witness has {} < {k} leaves", report.leaf_count));
                }
            }
            json!({
                "kind": "out-tree",
                "valid": violations.is_empty(),
                "violations": violations,
                "leafCount": report.leaf_count,
                "spanning": report.spanning,
                "k": k,
                "problem": problem,
            })
        }
        Artifact::Decomposition { pd, k } => {
            let mut violations: Vec<String> = pd
                .violations(&d.underlying_undirected())
                .iter()
                .map(ToString::to_string)
                .collect();
            if let Some(k) = k {
                let cap = k.pow(3) as isize;
                if pd.width() > cap {
                    violations.push(format!("width {} exceeds k^3 = {cap}", pd.width()));
                }
            }
            json!({
                "kind": "path-decomposition",
                "valid": violations.is_empty(),
                "violations": violations,
                "width": pd.width(),
                "k": k,
            })
        }
        Artifact::Answer { k, answer } => {
            let violations: Vec<String> = if *answer {
                vec!["answer yes without a witness".into()]
            } else {
                Vec::new()
            };
            json!({
                "kind": "answer",
                "valid": violations.is_empty(),
                "violations": violations,
                "k": k,
            })
        }
    }
}

fn init_logging(verbose: bool) {
    let level = if verbose { log::LevelFilter::Debug } else { log::LevelFilter::Off };
    let _ = env_logger::Builder::new()
        .filter_level(level)
        .target(env_logger::Target::Stderr)
        .try_init();
}

/// Entry point for the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let text = e.render().to_string();
            let message: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
            let err = CliError::Usage(message.join(" "));
            eprintln!("{}", err.to_json());
            return err.exit_code();
        }
    };
    init_logging(cli.verbose);
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    match run(&cli, &mut lock) {
        Ok(()) => 0,
        Err(e) => {
            let _ = lock.flush();
            eprintln!("{}", e.to_json());
            e.exit_code()
        }
    }
}
