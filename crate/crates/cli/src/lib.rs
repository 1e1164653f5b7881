//! Command-line front end for the finite algebra engine.

pub mod suite;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use ualg_core::engine::{CornerBound, Route};
use ualg_core::identities::{
    check_day_sequence, check_identity, find_day_terms, DaySearch, TermLibrary,
};
use ualg_core::{corpus, Engine, Error, FiniteAlgebra, Partition, Term};

use suite::{parse_checks, replay, run_suite, SuiteOptions, SuiteReport, Witness};

/// Exit status for success or passing checks.
pub const EXIT_OK: i32 = 0;
/// Exit status for malformed command lines.
pub const EXIT_USAGE: i32 = 1;
/// Exit status when a check fails.
pub const EXIT_FAILED: i32 = 2;
/// Exit status when a resource bound was hit.
pub const EXIT_BOUND: i32 = 3;
/// Exit status for unreadable or invalid input.
pub const EXIT_INVALID: i32 = 4;

/// Captured result of one invocation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(
    name = "ualg",
    version,
    about = "Congruences, matrices and higher commutators of finite algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct AlgebraArg {
    /// Algebra JSON file, or a bundled name (z4, s3, l22, set4, e1).
    algebra: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Size, operations and congruence lattice summary.
    Info(AlgebraArg),
    /// Lists the congruence lattice and reports modularity.
    Con(AlgebraArg),
    /// Principal congruence generated by pairs.
    Cg {
        #[command(flatten)]
        alg: AlgebraArg,
        /// Pairs such as `0-2,1-3`.
        #[arg(long)]
        pairs: String,
    },
    /// Binary or ternary commutator.
    Comm {
        #[command(flatten)]
        alg: AlgebraArg,
        #[arg(long, default_value_t = 2)]
        arity: usize,
        /// Congruences separated by `,` (or `;` when using block syntax).
        #[arg(long)]
        thetas: String,
        /// `tc` (term condition fixpoint) or `delta`.
        #[arg(long, default_value = "tc")]
        method: String,
        /// Pivot axis for the term condition; defaults to the last axis.
        #[arg(long)]
        axis: Option<usize>,
    },
    /// Binary or ternary Δ relation.
    Delta {
        #[command(flatten)]
        alg: AlgebraArg,
        #[arg(long)]
        thetas: String,
        /// Axis order for the ternary relation, e.g. `0,1,2`.
        #[arg(long, default_value = "0,1,2")]
        order: String,
        /// `generated` or `closure`.
        #[arg(long, default_value = "generated")]
        route: String,
        /// Labeling to test for membership, e.g. `0,0,1,1`.
        #[arg(long)]
        query: Option<String>,
    },
    /// Identity checks and Day terms.
    Term {
        #[command(flatten)]
        alg: AlgebraArg,
        /// Identity `lhs = rhs`.
        #[arg(long)]
        check_identity: Option<String>,
        /// Term file whose `m0, m1, ...` entries form a Day sequence.
        #[arg(long)]
        day_file: Option<PathBuf>,
        /// Searches the 4-ary clone for a Day sequence.
        #[arg(long)]
        find_day: bool,
        /// Clone size cap for `--find-day`.
        #[arg(long, default_value_t = 200_000)]
        cap: usize,
    },
    /// Runs the theorem checks.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    alg: AlgebraArg,
    /// `all` or a comma-separated list of check names.
    #[arg(long, default_value = "all")]
    check: String,
    /// Largest complex dimensions for the bounded centrality check.
    #[arg(long)]
    bound: Option<String>,
    #[arg(long)]
    json: bool,
    /// Witness or report JSON to rerun.
    #[arg(long)]
    replay: Option<PathBuf>,
    /// Adds per-check wall-clock times.
    #[arg(long)]
    timing: bool,
    /// Congruence tuple to quantify over; repeatable.
    #[arg(long)]
    tuple: Vec<String>,
    /// Term file with `d`, `h` and `m<i>` entries; defaults to the sidecar `.terms` file.
    #[arg(long)]
    terms: Option<PathBuf>,
    /// Sample complexes per axis pair for lines-preserved.
    #[arg(long, default_value_t = 100)]
    samples: usize,
}

/// Failure carrying its exit status.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: if e.is_resource() {
                EXIT_BOUND
            } else {
                EXIT_INVALID
            },
            message: e.to_string(),
        }
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INVALID,
        message: message.into(),
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

type CmdResult = std::result::Result<(i32, String), Failure>;

/// Parses `argv` (including the program name) and runs the subcommand.
pub fn run<I, T>(argv: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Output {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    match execute(cli.command) {
        Ok((code, stdout)) => Output {
            code,
            stdout,
            stderr: String::new(),
        },
        Err(f) => Output {
            code: f.code,
            stdout: String::new(),
            stderr: format!("error: {}\n", f.message),
        },
    }
}

/// Loads an algebra from a file, or from the bundled corpus when no such file exists.
pub fn load_algebra(source: &str) -> Result<(FiniteAlgebra, Option<PathBuf>), Error> {
    let path = Path::new(source);
    if path.exists() {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Malformed(format!("{source}: {e}")))?;
        return Ok((FiniteAlgebra::from_json(&text)?, Some(path.to_path_buf())));
    }
    let stem = source.strip_suffix(".json").unwrap_or(source);
    let stem = Path::new(stem)
        .file_name()
        .and_then(|s| s.to_str())
        .unwrap_or(stem);
    corpus::by_name(stem)
        .map(|a| (a, None))
        .ok_or_else(|| Error::Malformed(format!("{source}: no such file or bundled algebra")))
}

/// Term library for an algebra: explicit file, sidecar `<stem>.terms`, or bundled.
fn load_terms(
    source: &str,
    path: Option<&Path>,
    explicit: Option<&Path>,
) -> Result<Option<TermLibrary>, Failure> {
    let read = |p: &Path| -> Result<TermLibrary, Failure> {
        let text =
            std::fs::read_to_string(p).map_err(|e| invalid(format!("{}: {e}", p.display())))?;
        Ok(TermLibrary::parse(&text)?)
    };
    if let Some(p) = explicit {
        return read(p).map(Some);
    }
    if let Some(p) = path {
        let side = p.with_extension("terms");
        if side.exists() {
            return read(&side).map(Some);
        }
        return Ok(None);
    }
    let stem = source.strip_suffix(".json").unwrap_or(source);
    match corpus::terms_by_name(stem) {
        Some(text) => Ok(Some(TermLibrary::parse(text)?)),
        None => Ok(None),
    }
}

/// Splits a congruence list on `;` when present, else on `,`.
fn split_thetas(text: &str) -> Vec<&str> {
    let sep = if text.contains(';') { ';' } else { ',' };
    text.split(sep).map(str::trim).collect()
}

fn resolve_thetas(engine: &Engine, text: &str) -> Result<Vec<Partition>, Failure> {
    let lattice = engine.lattice()?;
    split_thetas(text)
        .into_iter()
        .map(|t| lattice.resolve(engine.algebra(), t).map_err(Failure::from))
        .collect()
}

fn parse_list(text: &str, what: &str) -> Result<Vec<usize>, Failure> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| usage(format!("bad {what} entry {s:?}")))
        })
        .collect()
}

fn execute(cmd: Command) -> CmdResult {
    match cmd {
        Command::Info(a) => info(&a.algebra),
        Command::Con(a) => con(&a.algebra),
        Command::Cg { alg, pairs } => cg(&alg.algebra, &pairs),
        Command::Comm {
            alg,
            arity,
            thetas,
            method,
            axis,
        } => comm(&alg.algebra, arity, &thetas, &method, axis),
        Command::Delta {
            alg,
            thetas,
            order,
            route,
            query,
        } => delta(&alg.algebra, &thetas, &order, &route, query.as_deref()),
        Command::Term {
            alg,
            check_identity,
            day_file,
            find_day,
            cap,
        } => term(
            &alg.algebra,
            check_identity.as_deref(),
            day_file.as_deref(),
            find_day,
            cap,
        ),
        Command::Verify(v) => verify(v),
    }
}

fn info(source: &str) -> CmdResult {
    let (alg, _) = load_algebra(source)?;
    let engine = Engine::new(&alg);
    let lattice = engine.lattice()?;
    let mut out = format!("name: {}\nsize: {}\noperations:", alg.name, alg.size);
    if alg.operations.is_empty() {
        out += " none";
    }
    for op in &alg.operations {
        out += &format!(" {}/{}", op.symbol, op.arity);
    }
    out += &format!(
        "\ncongruences: {}\nmodular: {}\n",
        lattice.len(),
        lattice.is_modular().is_none()
    );
    Ok((EXIT_OK, out))
}

fn con(source: &str) -> CmdResult {
    let (alg, _) = load_algebra(source)?;
    let engine = Engine::new(&alg);
    let lattice = engine.lattice()?;
    let mut out = String::new();
    for (i, p) in lattice.members().iter().enumerate() {
        out += &format!("con[{i}] = {}: {p}\n", lattice.name_of(p));
    }
    match lattice.is_modular() {
        None => out += "modular: true\n",
        Some(w) => {
            let names: Vec<String> = w.pentagon.iter().map(|&i| format!("con[{i}]")).collect();
            out += &format!("modular: false (pentagon {})\n", names.join(", "));
        }
    }
    Ok((EXIT_OK, out))
}

fn cg(source: &str, pairs: &str) -> CmdResult {
    let (alg, _) = load_algebra(source)?;
    let mut list = Vec::new();
    for tok in pairs.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (a, b) = tok
            .split_once('-')
            .ok_or_else(|| usage(format!("expected a pair like 0-2, found {tok:?}")))?;
        let parse = |s: &str| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| usage(format!("bad element {s:?}")))
        };
        list.push((parse(a)?, parse(b)?));
    }
    let p = ualg_core::cg(&alg, list)?;
    Ok((EXIT_OK, format!("blocks: {p}\n")))
}

fn comm(source: &str, arity: usize, thetas: &str, method: &str, axis: Option<usize>) -> CmdResult {
    let (alg, _) = load_algebra(source)?;
    if !(2..=3).contains(&arity) {
        return Err(usage(format!("arity must be 2 or 3, got {arity}")));
    }
    let engine = Engine::new(&alg);
    let ts = resolve_thetas(&engine, thetas)?;
    if ts.len() != arity {
        return Err(usage(format!(
            "expected {arity} congruences, got {}",
            ts.len()
        )));
    }
    let result = match method {
        "tc" => {
            let j = axis.unwrap_or(arity - 1);
            if j >= arity {
                return Err(usage(format!("axis {j} out of range for arity {arity}")));
            }
            engine.tc_commutator(&ts, j)?
        }
        "delta" if arity == 2 => engine.binary_commutator_via_delta(&ts[0], &ts[1])?,
        "delta" => engine.commutator_via_delta(&ts)?.commutator,
        other => return Err(usage(format!("unknown method {other:?}; use tc or delta"))),
    };
    let name = engine.lattice()?.name_of(&result);
    Ok((EXIT_OK, format!("commutator = {name} (blocks: {result})\n")))
}

fn delta(source: &str, thetas: &str, order: &str, route: &str, query: Option<&str>) -> CmdResult {
    let (alg, _) = load_algebra(source)?;
    let engine = Engine::new(&alg);
    let ts = resolve_thetas(&engine, thetas)?;
    let route: Route = route.parse()?;
    let query = query.map(|q| parse_list(q, "query")).transpose()?;
    let q: Option<Vec<u16>> = query.map(|v| v.into_iter().map(|x| x as u16).collect());
    let (kind, size, member) = match ts.len() {
        2 => {
            let d = engine.delta_binary(&ts[0], &ts[1], route)?;
            if let Some(q) = &q {
                if q.len() != 4 {
                    return Err(usage("binary query needs 4 labels (BL,BR,TL,TR)"));
                }
            }
            ("squares", d.len(), q.map(|q| d.contains(&q)))
        }
        3 => {
            let ord = parse_list(order, "order")?;
            let ord: [usize; 3] = ord
                .try_into()
                .map_err(|_| usage("order needs three axes"))?;
            let d = engine.delta_ternary(&ts, ord, route)?;
            if let Some(q) = &q {
                if q.len() != 8 {
                    return Err(usage("ternary query needs 8 labels"));
                }
            }
            ("cubes", d.len(), q.map(|q| d.contains(&q)))
        }
        n => return Err(usage(format!("expected 2 or 3 congruences, got {n}"))),
    };
    let mut out = format!("{kind}: {size}\n");
    if let Some(m) = member {
        out += &format!("member: {m}\n");
    }
    Ok((EXIT_OK, out))
}

fn term(
    source: &str,
    identity: Option<&str>,
    day_file: Option<&Path>,
    find_day: bool,
    cap: usize,
) -> CmdResult {
    let (alg, _) = load_algebra(source)?;
    if identity.is_none() && day_file.is_none() && !find_day {
        return Err(usage(
            "term needs --check-identity, --day-file or --find-day",
        ));
    }
    let mut out = String::new();
    let mut code = EXIT_OK;
    if let Some(text) = identity {
        let (l, r) = text
            .split_once('=')
            .ok_or_else(|| usage("identity must have the form `lhs = rhs`"))?;
        let lhs = Term::parse(l.trim())?;
        let rhs = Term::parse(r.trim())?;
        let mut vars = lhs.variables();
        for v in rhs.variables() {
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
        let names: Vec<&str> = vars.iter().map(String::as_str).collect();
        match check_identity(&alg, &lhs, &rhs, &names)? {
            None => out += "identity holds\n",
            Some(a) => {
                code = EXIT_FAILED;
                out += &format!("identity fails at {}\n", fmt_assignment(&a));
            }
        }
    }
    if let Some(p) = day_file {
        let text =
            std::fs::read_to_string(p).map_err(|e| invalid(format!("{}: {e}", p.display())))?;
        let seq = TermLibrary::parse(&text)?
            .day_sequence()
            .ok_or_else(|| invalid(format!("{}: no m0, m1, ... entries", p.display())))??;
        match check_day_sequence(&alg, &seq)? {
            None => out += &format!("Day sequence of {} terms holds\n", seq.len()),
            Some(f) => {
                code = EXIT_FAILED;
                out += &format!(
                    "Day identity ({}) fails at index {} with {}\n",
                    f.identity,
                    f.index,
                    fmt_assignment(&f.assignment)
                );
            }
        }
    }
    if find_day {
        match find_day_terms(&alg, cap)? {
            DaySearch::Found {
                sequence,
                clone_size,
            } => {
                out += &format!("Day sequence found (clone of {clone_size} functions):\n");
                for (i, t) in sequence.terms.iter().enumerate() {
                    out += &format!("m{i}(x, y, z, u) := {}\n", t.body);
                }
            }
            DaySearch::None { clone_size } => {
                code = EXIT_FAILED;
                out += &format!("no Day sequence in the 4-ary clone ({clone_size} functions)\n");
            }
            DaySearch::Exhausted { explored } => {
                if code == EXIT_OK {
                    code = EXIT_BOUND;
                }
                out += &format!("search exhausted after {explored} functions\n");
            }
        }
    }
    Ok((code, out))
}

fn fmt_assignment(a: &[(String, u16)]) -> String {
    let v: Vec<String> = a.iter().map(|(n, e)| format!("{n}={e}")).collect();
    v.join(", ")
}

fn verify(v: VerifyArgs) -> CmdResult {
    let (alg, path) = load_algebra(&v.alg.algebra)?;
    let mut opts = SuiteOptions {
        checks: parse_checks(&v.check).map_err(usage)?,
        timing: v.timing,
        samples: v.samples,
        terms: load_terms(&v.alg.algebra, path.as_deref(), v.terms.as_deref())?,
        ..SuiteOptions::default()
    };
    if let Some(b) = &v.bound {
        let dims: [usize; 3] = parse_list(b, "bound")?
            .try_into()
            .map_err(|_| usage("--bound needs three dimensions n0,n1,n2"))?;
        if dims.iter().any(|&d| d < 2) {
            return Err(usage("bound dimensions must be at least 2"));
        }
        opts.bound = CornerBound::with_dims(dims);
    }
    if !v.tuple.is_empty() {
        let engine = Engine::new(&alg);
        for t in &v.tuple {
            let ts = resolve_thetas(&engine, t)?;
            if !(2..=3).contains(&ts.len()) {
                return Err(usage(format!("tuple {t:?} must have 2 or 3 congruences")));
            }
            opts.tuples.push(ts);
        }
    }
    let report: SuiteReport = match &v.replay {
        Some(p) => {
            let text =
                std::fs::read_to_string(p).map_err(|e| invalid(format!("{}: {e}", p.display())))?;
            let witness = read_witness(&text).map_err(invalid)?;
            replay(&alg, &witness, &opts)?
        }
        None => run_suite(&alg, &opts)?,
    };
    let out = if v.json {
        let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
        s.push('\n');
        s
    } else {
        report.to_text()
    };
    Ok((report.exit_code(), out))
}

/// Accepts a bare witness or a suite report containing one.
fn read_witness(text: &str) -> Result<Witness, String> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| format!("replay file: {e}"))?;
    if value.get("check").is_some() && value.get("detail").is_some() {
        return serde_json::from_value(value).map_err(|e| format!("replay witness: {e}"));
    }
    let checks = value
        .get("checks")
        .and_then(|c| c.as_array())
        .ok_or("replay file holds neither a witness nor a report")?;
    let w = checks
        .iter()
        .find_map(|c| c.get("witness"))
        .ok_or("report contains no failing check")?;
    serde_json::from_value(w.clone()).map_err(|e| format!("replay witness: {e}"))
}
