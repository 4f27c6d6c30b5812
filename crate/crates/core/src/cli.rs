//! Command-line front end: reads problem files, runs one operation and
//! prints a single JSON report.
//!
//! Exit codes: `0` verdict computed, `1` invariant violation, `2` bad input,
//! `3` budget exhausted or undecided.

use std::fs::{File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{de::DeserializeOwned, Deserialize, Serialize};
use serde_json::{json, Value};

use crate::criteria::{cyclic_coset_condition, is_coset_free};
use crate::error::Error;
use crate::group::{Group, GroupSpec};
use crate::hom::{HomSpec, Homomorphism};
use crate::linear::{
    find_acyclic_linear_matching, find_scaling, is_matched_basis, match_basis, strong::product_span_meets,
    strong_matching, AlgebraElement, Ambient, BasisMatch, OrderedBasis, StrongVerdict, Subspace, SubspaceSpec,
};
use crate::matching::{AcyclicSearch, Matchability, PairSpec, SubsetPair};
use crate::primes::{self, ExhaustiveOptions, Family, ScanConfig};
use crate::relative::{find_relative_matching, verify_hom_transfer, TupleOfElements};

pub const TOOL: &str = "matchkit";
pub const THREADS_VAR: &str = "MATCHKIT_THREADS";

#[derive(Debug, Parser, Serialize)]
#[command(name = "matchkit", version, about = "Matchings in groups and field extensions")]
pub struct RunConfig {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Matchings between subsets of a group.
    #[command(subcommand)]
    Match(MatchCommand),
    /// Coset conditions that guarantee a matching.
    #[command(subcommand)]
    Criteria(CriteriaCommand),
    /// Matchings relative to a normal subgroup.
    #[command(subcommand)]
    Relative(RelativeCommand),
    /// Prime-order groups without acyclic matchings.
    #[command(subcommand)]
    Primes(PrimesCommand),
    /// Matched bases and strong matchings between subspaces.
    #[command(subcommand)]
    Linear(LinearCommand),
}

#[derive(Debug, Args, Serialize)]
pub struct PairArg {
    /// `{"group": {...}, "A": [...], "B": [...]}`
    #[arg(long)]
    pub pair: PathBuf,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchCommand {
    /// One matching, or a Hall violator.
    Find(PairArg),
    /// All matchings up to a cap.
    Enumerate {
        #[command(flatten)]
        #[serde(flatten)]
        pair: PairArg,
        #[arg(long, default_value_t = 10_000)]
        cap: usize,
    },
    /// The first acyclic matching.
    Acyclic {
        #[command(flatten)]
        #[serde(flatten)]
        pair: PairArg,
        /// Matchings to examine before giving up.
        #[arg(long, default_value_t = 1_000_000)]
        cap: usize,
    },
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CriteriaCommand {
    /// Coset-freeness of A and, for abelian groups, the cyclic coset condition.
    Check(PairArg),
}

#[derive(Debug, Args, Serialize)]
pub struct ProblemArg {
    #[arg(long)]
    pub problem: PathBuf,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RelativeCommand {
    /// `{"group": {...}, "a": [...], "b": [...], "normal": [...]}`
    Find(ProblemArg),
    /// `{"hom": {...}, "a": [...], "b": [...]}`: kernel-relative versus image matchability.
    Transfer(ProblemArg),
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyArg {
    /// Nonzero squares modulo `p ≡ 7 (mod 8)`.
    QuadraticResidues,
    /// Powers of two when the order of 2 is odd.
    PowersOfTwo,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PrimesCommand {
    /// Certificate table for a prime family.
    Family {
        #[arg(long, value_enum, required_unless_present = "prop")]
        family: Option<FamilyArg>,
        /// Older numeric family names: 22 for squares, 23 for powers of two.
        #[arg(long, hide = true, conflicts_with = "family")]
        prop: Option<u32>,
        #[arg(long, default_value_t = 1000)]
        upto: u64,
        /// Enumerate all matchings for primes up to this.
        #[arg(long, default_value_t = 31)]
        enumerate_upto: u64,
    },
    /// Search `Z/p` for pairs without an acyclic matching.
    Scan {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 3)]
        size_cap: usize,
        #[arg(long, default_value_t = 10_000)]
        budget: u64,
        /// JSONL log, appended to.
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Check that every acyclic matching `A → A` has a fixed point.
    Audit {
        /// `{"group": {...}, "A": [...]}`
        #[arg(long)]
        set: PathBuf,
    },
}

#[derive(Debug, Args, Serialize)]
pub struct LinearPairArg {
    /// `{"A": {"ambient": {...}, "basis": [...]}, "B": {...}}`
    #[arg(long)]
    pub pair: PathBuf,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LinearCommand {
    /// A basis of B matched to the given basis of A, or a Hall violator.
    Match {
        #[command(flatten)]
        #[serde(flatten)]
        pair: LinearPairArg,
        #[arg(long, default_value_t = crate::linear::matched::DEFAULT_RETRIES)]
        retries: usize,
    },
    /// Whether some product of nonzero elements of A and B lies in A.
    Strong(LinearPairArg),
    /// A scalar α with B = αA.
    Scaling(LinearPairArg),
    /// The multiplication-map matching and its certificate.
    Acyclic(LinearPairArg),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Match(MatchCommand::Find(_)) => "match find",
            Command::Match(MatchCommand::Enumerate { .. }) => "match enumerate",
            Command::Match(MatchCommand::Acyclic { .. }) => "match acyclic",
            Command::Criteria(CriteriaCommand::Check(_)) => "criteria check",
            Command::Relative(RelativeCommand::Find(_)) => "relative find",
            Command::Relative(RelativeCommand::Transfer(_)) => "relative transfer",
            Command::Primes(PrimesCommand::Family { .. }) => "primes family",
            Command::Primes(PrimesCommand::Scan { .. }) => "primes scan",
            Command::Primes(PrimesCommand::Audit { .. }) => "primes audit",
            Command::Linear(LinearCommand::Match { .. }) => "linear match",
            Command::Linear(LinearCommand::Strong(_)) => "linear strong",
            Command::Linear(LinearCommand::Scaling(_)) => "linear scaling",
            Command::Linear(LinearCommand::Acyclic(_)) => "linear acyclic",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitStatus {
    Ok = 0,
    InvariantViolation = 1,
    BadInput = 2,
    Inconclusive = 3,
}

/// The JSON document and exit status of one invocation.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub status: ExitStatus,
    pub document: Value,
}

/// A result body with its status.
struct Outcome {
    status: ExitStatus,
    result: Value,
}

impl Outcome {
    fn ok(result: Value) -> Self {
        Outcome { status: ExitStatus::Ok, result }
    }

    fn flagged(flag: bool, status: ExitStatus, result: Value) -> Self {
        Outcome { status: if flag { status } else { ExitStatus::Ok }, result }
    }
}

fn status_of(e: &Error) -> ExitStatus {
    match e {
        Error::InvariantViolation(_) => ExitStatus::InvariantViolation,
        Error::Undetermined => ExitStatus::Inconclusive,
        _ => ExitStatus::BadInput,
    }
}

fn error_kind(e: &Error) -> String {
    let debug = format!("{e:?}");
    let end = debug.find(|c: char| !c.is_alphanumeric()).unwrap_or(debug.len());
    debug[..end].to_string()
}

fn read_json<T: DeserializeOwned>(path: &Path) -> crate::Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn load_pair(path: &Path) -> crate::Result<SubsetPair> {
    SubsetPair::from_spec(&read_json::<PairSpec>(path)?)
}

#[derive(Deserialize)]
struct RelativeProblem {
    group: GroupSpec,
    a: Vec<Value>,
    b: Vec<Value>,
    #[serde(default)]
    normal: Vec<Value>,
}

#[derive(Deserialize)]
struct TransferProblem {
    hom: HomSpec,
    a: Vec<Value>,
    b: Vec<Value>,
}

#[derive(Deserialize)]
struct SetProblem {
    group: GroupSpec,
    #[serde(rename = "A")]
    a: Vec<Value>,
}

#[derive(Deserialize)]
struct LinearPair {
    #[serde(rename = "A")]
    a: SubspaceSpec,
    #[serde(rename = "B")]
    b: SubspaceSpec,
}

/// The vectors of a subspace file in the order given.
fn spec_vectors(spec: &SubspaceSpec) -> crate::Result<Vec<AlgebraElement>> {
    let amb = Ambient::from_spec(&spec.ambient)?;
    spec.basis.iter().map(|v| AlgebraElement::from_values(&amb, v)).collect()
}

fn load_linear(path: &Path) -> crate::Result<(OrderedBasis, Subspace, Subspace)> {
    let pair: LinearPair = read_json(path)?;
    let a = OrderedBasis::new(spec_vectors(&pair.a)?)?;
    let b = Subspace::from_spec(&pair.b)?;
    if b.dim() != pair.b.basis.len() {
        return Err(Error::Dependent);
    }
    let a_space = a.span().clone();
    Ok((a, a_space, b))
}

fn match_command(cmd: &MatchCommand) -> crate::Result<Outcome> {
    match cmd {
        MatchCommand::Find(PairArg { pair }) => {
            let pair = load_pair(pair)?;
            Ok(Outcome::ok(match pair.matchability() {
                Matchability::Matched(m) => json!({"matching": pair.matching_json(&m), "hall_violator": null}),
                Matchability::Blocked(v) => {
                    let s: Vec<_> = v.subset.iter().map(|&i| pair.a()[i]).collect();
                    let nbr: Vec<_> = v.neighbourhood.iter().map(|&j| pair.b()[j]).collect();
                    json!({
                        "matching": null,
                        "hall_violator": pair.elements_json(&s),
                        "neighbourhood": pair.elements_json(&nbr),
                        "verified": pair.verifies_violator(&v),
                    })
                }
            }))
        }
        MatchCommand::Enumerate { pair, cap } => {
            let pair = load_pair(&pair.pair)?;
            let e = pair.enumerate_matchings(*cap)?;
            Ok(Outcome::flagged(
                e.truncated,
                ExitStatus::Inconclusive,
                json!({
                    "count": e.matchings.len(),
                    "truncated": e.truncated,
                    "matchings": e.matchings.iter().map(|m| pair.matching_json(m)).collect::<Vec<_>>(),
                }),
            ))
        }
        MatchCommand::Acyclic { pair, cap } => {
            let pair = load_pair(&pair.pair)?;
            Ok(match pair.find_acyclic_matching(*cap)? {
                AcyclicSearch::Found { matching, examined } => Outcome::ok(
                    json!({"status": "found", "matching": pair.matching_json(&matching), "examined": examined}),
                ),
                AcyclicSearch::VerifiedAbsent { examined } => {
                    Outcome::ok(json!({"status": "verified_absent", "matching": null, "examined": examined}))
                }
                AcyclicSearch::Inconclusive { examined } => Outcome {
                    status: ExitStatus::Inconclusive,
                    result: json!({"status": "inconclusive", "matching": null, "examined": examined}),
                },
            })
        }
    }
}

fn criteria_command(cmd: &CriteriaCommand) -> crate::Result<Outcome> {
    let CriteriaCommand::Check(PairArg { pair }) = cmd;
    let pair = load_pair(pair)?;
    let g = pair.group();
    let free = is_coset_free(g, pair.a())?;
    let cyclic =
        if g.is_abelian() && g.is_finite() { Some(cyclic_coset_condition(g, pair.a(), pair.b())?) } else { None };
    let matched = pair.find_matching().is_some();
    // either condition forces a matching
    let contradiction = !matched && (free.coset_free || cyclic.as_ref().is_some_and(|c| c.holds));
    let result = json!({
        "coset_free": free.coset_free,
        "witness": free.witness.as_ref().map(|w| w.to_json(g)),
        "cyclic_coset_condition": cyclic.as_ref().map(|c| c.holds),
        "cyclic_witness": cyclic.as_ref().and_then(|c| c.witness.as_ref()).map(|w| json!({
            "b": g.element_value(w.b),
            "coset": pair.elements_json(&w.coset),
        })),
        "matching_exists": matched,
    });
    if contradiction {
        return Err(Error::InvariantViolation(format!(
            "a sufficient condition holds but no matching exists: {result}"
        )));
    }
    Ok(Outcome::ok(result))
}

fn relative_command(cmd: &RelativeCommand) -> crate::Result<Outcome> {
    match cmd {
        RelativeCommand::Find(ProblemArg { problem }) => {
            let p: RelativeProblem = read_json(problem)?;
            let g = Group::from_spec(&p.group)?;
            let a = TupleOfElements::from_values(&g, &p.a)?;
            let b = TupleOfElements::from_values(&g, &p.b)?;
            let normal = if p.normal.is_empty() {
                g.trivial_subgroup()
            } else {
                let xs = p.normal.iter().map(|v| g.parse_element(v)).collect::<crate::Result<Vec<_>>>()?;
                g.subgroup(&xs)?
            };
            let m = find_relative_matching(&a, &b, &normal)?;
            Ok(Outcome::ok(json!({"relative_matching": m.map(|m| m.to_json(&g))})))
        }
        RelativeCommand::Transfer(ProblemArg { problem }) => {
            let p: TransferProblem = read_json(problem)?;
            let h = Homomorphism::from_spec(&p.hom)?;
            let a = TupleOfElements::from_values(h.source(), &p.a)?;
            let b = TupleOfElements::from_values(h.source(), &p.b)?;
            let check = verify_hom_transfer(&h, &a, &b)?;
            let transfer = check.permutations_transfer(&h, &a, &b)?;
            let result = json!({
                "kernel_relative": check.kernel_relative.as_ref().map(|m| m.to_json(h.source())),
                "image": check.image.as_ref().map(|m| m.to_json(h.target())),
                "agrees": check.holds(),
                "permutations_transfer": transfer,
            });
            Ok(Outcome::flagged(!check.holds() || !transfer, ExitStatus::InvariantViolation, result))
        }
    }
}

fn primes_command(cmd: &PrimesCommand, seed: u64) -> crate::Result<Outcome> {
    match cmd {
        PrimesCommand::Family { family, prop, upto, enumerate_upto } => {
            let family = match (family, prop) {
                (Some(FamilyArg::QuadraticResidues), _) | (None, Some(22)) => Family::QuadraticResidues,
                (Some(FamilyArg::PowersOfTwo), _) | (None, Some(23)) => Family::PowersOfTwo,
                (None, Some(other)) => return Err(Error::Precondition(format!("unknown family {other}"))),
                (None, None) => return Err(Error::Precondition("a family is required".into())),
            };
            let opts = ExhaustiveOptions { max_p: *enumerate_upto, ..ExhaustiveOptions::default() };
            let table = primes::family_table(family, *upto, opts)?;
            let failing: Vec<u64> = table.iter().filter(|v| !v.no_acyclic_matching()).map(|v| v.p).collect();
            let result = json!({
                "family": family,
                "upto": upto,
                "primes": table.iter().map(|v| v.p).collect::<Vec<_>>(),
                "table": table,
                "all_hold": failing.is_empty(),
            });
            if !failing.is_empty() {
                return Err(Error::InvariantViolation(format!("certificate fails for {failing:?}")));
            }
            Ok(Outcome::ok(result))
        }
        PrimesCommand::Scan { p, size_cap, budget, log } => {
            let config = ScanConfig::new(*p, *size_cap, *budget, seed);
            let report = match log {
                Some(path) => {
                    let file = OpenOptions::new()
                        .create(true)
                        .append(true)
                        .open(path)
                        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
                    let mut w = BufWriter::new(file);
                    let report = primes::acyclic_property_scan(&config, Some(&mut w))?;
                    w.flush().map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
                    report
                }
                None => primes::acyclic_property_scan(&config, None)?,
            };
            let unfinished = report.inconclusive.is_some() || (report.witness.is_none() && !report.complete);
            Ok(Outcome::flagged(unfinished, ExitStatus::Inconclusive, report.to_json()))
        }
        PrimesCommand::Audit { set } => {
            let p: SetProblem = read_json(set)?;
            let g = Group::from_spec(&p.group)?;
            let a = p.a.iter().map(|v| g.parse_element(v)).collect::<crate::Result<Vec<_>>>()?;
            let audit = primes::fixed_point_audit(&g, &a)?;
            let sigmas = |ms: &[crate::Matching]| ms.iter().map(|m| m.sigma().to_vec()).collect::<Vec<_>>();
            let result = json!({
                "holds": audit.holds(),
                "matchings": audit.matchings,
                "acyclic": sigmas(&audit.acyclic),
                "violations": sigmas(&audit.violations),
            });
            Ok(Outcome::flagged(!audit.holds(), ExitStatus::InvariantViolation, result))
        }
    }
}

fn linear_command(cmd: &LinearCommand, seed: u64) -> crate::Result<Outcome> {
    match cmd {
        LinearCommand::Match { pair, retries } => {
            let (a, _, b) = load_linear(&pair.pair)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok(Outcome::ok(match match_basis(&a, &b, *retries, &mut rng)? {
                BasisMatch::Matched(basis) => json!({
                    "a_basis": a.to_json(),
                    "matched_basis": basis.to_json(),
                    "verified": is_matched_basis(&a, &basis)?,
                    "hall_violator": null,
                }),
                BasisMatch::Blocked(v) => json!({
                    "a_basis": a.to_json(),
                    "matched_basis": null,
                    "hall_violator": v.to_json(),
                }),
            }))
        }
        LinearCommand::Strong(LinearPairArg { pair }) => {
            let (_, a, b) = load_linear(pair)?;
            let verdict = strong_matching(&a, &b)?;
            let mut result = verdict.to_json();
            result["strong_matching"] = match verdict {
                StrongVerdict::Exists => json!(true),
                StrongVerdict::Blocked { .. } => json!(false),
                StrongVerdict::Undetermined => Value::Null,
            };
            result["product_span_meets_a"] = json!(product_span_meets(&a, &b)?);
            Ok(Outcome::flagged(verdict == StrongVerdict::Undetermined, ExitStatus::Inconclusive, result))
        }
        LinearCommand::Scaling(LinearPairArg { pair }) => {
            let (_, a, b) = load_linear(pair)?;
            let alpha = find_scaling(&a, &b)?;
            Ok(Outcome::ok(json!({
                "alpha": alpha.as_ref().map(AlgebraElement::to_json),
                "alpha_display": alpha.as_ref().map(ToString::to_string),
            })))
        }
        LinearCommand::Acyclic(LinearPairArg { pair }) => {
            let (_, a, b) = load_linear(pair)?;
            Ok(Outcome::ok(match find_acyclic_linear_matching(&a, &b) {
                Ok(m) => {
                    let mut v = m.to_json();
                    v["strong_matching"] = json!(true);
                    v
                }
                Err(Error::NoStrongMatching) => json!({"strong_matching": false, "certificate": null}),
                Err(e) => return Err(e),
            }))
        }
    }
}

fn execute(config: &RunConfig) -> crate::Result<Outcome> {
    match &config.command {
        Command::Match(cmd) => match_command(cmd),
        Command::Criteria(cmd) => criteria_command(cmd),
        Command::Relative(cmd) => relative_command(cmd),
        Command::Primes(cmd) => primes_command(cmd, config.seed),
        Command::Linear(cmd) => linear_command(cmd, config.seed),
    }
}

/// Runs one command and assembles its report.
pub fn run(config: &RunConfig) -> Report {
    let mut document = json!({
        "tool": TOOL,
        "version": env!("CARGO_PKG_VERSION"),
        "command": config.command.name(),
        "config": serde_json::to_value(&config.command).expect("config serializes"),
        "seed": config.seed,
    });
    let status = match execute(config) {
        Ok(Outcome { status, result }) => {
            document["result"] = result;
            status
        }
        Err(e) => {
            document["error"] = json!({"kind": error_kind(&e), "message": e.to_string()});
            status_of(&e)
        }
    };
    Report { status, document }
}

/// Sizes the rayon pool from `MATCHKIT_THREADS`.
pub fn configure_threads() -> std::result::Result<(), String> {
    let Ok(value) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = value.trim().parse().map_err(|_| format!("{THREADS_VAR} must be a positive integer"))?;
    if n == 0 {
        return Err(format!("{THREADS_VAR} must be a positive integer"));
    }
    // a pool may already exist when embedded; that is fine
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Parses arguments, runs, writes the report and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { ExitStatus::BadInput as i32 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("{msg}");
        return ExitStatus::BadInput as i32;
    }
    let report = run(&config);
    let text = serde_json::to_string_pretty(&report.document).expect("report serializes");
    let written = match &config.output {
        Some(path) => File::create(path).and_then(|mut f| writeln!(f, "{text}")),
        None => writeln!(std::io::stdout().lock(), "{text}"),
    };
    if let Err(e) = written {
        eprintln!("cannot write report: {e}");
        return ExitStatus::BadInput as i32;
    }
    report.status as i32
}
