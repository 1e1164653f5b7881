//! The verification suite: named theorem checks with verdicts and witnesses.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use ualg_core::congruence::ModularityWitness;
use ualg_core::engine::{check_lines_preserved, sample_complexes};
use ualg_core::engine::{CornerBound, Engine, Route, ORDERS};
use ualg_core::identities::{
    check_binary_delta_difference, check_day_sequence, check_difference_term, check_strong_cube,
    check_wobbly_completion, check_wobbly_identities, find_day_terms, wobbly_cube_term, DaySearch,
    TermLibrary,
};
use ualg_core::{CongruenceLattice, DaySequence, Error, FiniteAlgebra, Partition, Result, TermFn};

/// Check names in report order.
pub const CHECKS: &[&str] = &[
    "bin-delta-commutator",
    "bin-delta-symmetry",
    "delta-commutator",
    "delta-order",
    "delta-route",
    "lines-preserved",
    "nested-delta",
    "nested-inequality",
    "tc-vs-ctr",
    "wobbly",
];

/// Largest congruence lattice whose tuples are quantified over by default.
pub const DEFAULT_SCOPE_LIMIT: usize = 8;

/// Everything needed to rerun one failing instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub check: String,
    pub algebra: String,
    pub thetas: Vec<Partition>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<[usize; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axis: Option<usize>,
    /// Term text the check was run with.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub term: Option<String>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail { witness: Witness },
    HypothesisNotMet { reason: String },
    BoundExhausted { detail: String },
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail { .. } => "fail",
            Verdict::HypothesisNotMet { .. } => "hypothesis-not-met",
            Verdict::BoundExhausted { .. } => "bound-exhausted",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub name: String,
    #[serde(flatten)]
    pub verdict: Verdict,
    /// Instances examined (tuples, orders, axes, congruences, samples).
    pub instances: usize,
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<u64>,
}

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub hypothesis_not_met: usize,
    pub bound_exhausted: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub algebra: String,
    pub size: usize,
    pub congruences: usize,
    pub modular: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modularity_witness: Option<ModularityWitness>,
    pub pairs: usize,
    pub triples: usize,
    pub scope_note: Option<String>,
    pub checks: Vec<CheckReport>,
    pub summary: Summary,
}

impl SuiteReport {
    pub fn exit_code(&self) -> i32 {
        if self.summary.fail > 0 {
            2
        } else if self.summary.bound_exhausted > 0 {
            3
        } else {
            0
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "algebra: {} (size {}, {} congruences, {})\n",
            self.algebra,
            self.size,
            self.congruences,
            if self.modular {
                "modular"
            } else {
                "not modular"
            }
        );
        if let Some(w) = &self.modularity_witness {
            out += &format!("pentagon: {:?}\n", w.pentagon);
        }
        out += &format!("scope: {} pairs, {} triples\n", self.pairs, self.triples);
        if let Some(n) = &self.scope_note {
            out += &format!("note: {n}\n");
        }
        for c in &self.checks {
            out += &format!(
                "{:<22}{:<20}{} instances",
                c.name,
                c.verdict.label(),
                c.instances
            );
            if let Some(ms) = c.millis {
                out += &format!(", {ms} ms");
            }
            out += "\n";
            match &c.verdict {
                Verdict::Fail { witness } => {
                    out += &format!("  witness: {}\n", serde_json::to_string(witness).unwrap());
                }
                Verdict::HypothesisNotMet { reason } => out += &format!("  reason: {reason}\n"),
                Verdict::BoundExhausted { detail } => out += &format!("  bound: {detail}\n"),
                Verdict::Pass => {}
            }
            for n in &c.notes {
                out += &format!("  {n}\n");
            }
        }
        let s = &self.summary;
        out += &format!(
            "summary: {} pass, {} fail, {} hypothesis-not-met, {} bound-exhausted\n",
            s.pass, s.fail, s.hypothesis_not_met, s.bound_exhausted
        );
        out
    }
}

/// Suite configuration.
#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub checks: Vec<String>,
    /// Explicit tuples; arity 2 tuples feed binary checks, arity 3 ternary ones.
    pub tuples: Vec<Vec<Partition>>,
    pub bound: CornerBound,
    pub terms: Option<TermLibrary>,
    pub timing: bool,
    /// Samples per ordered axis pair for lines-preserved.
    pub samples: usize,
    /// Cap on partial cubes per congruence for the wobbly completion.
    pub completion_cap: usize,
    /// Cap on clone size for the Day-term search.
    pub day_search_cap: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            checks: CHECKS.iter().map(|s| s.to_string()).collect(),
            tuples: Vec::new(),
            bound: CornerBound::default(),
            terms: None,
            timing: false,
            samples: 100,
            completion_cap: 5_000_000,
            day_search_cap: 200_000,
        }
    }
}

/// Resolves a check selection: `all`, or a comma-separated list of names.
pub fn parse_checks(text: &str) -> std::result::Result<Vec<String>, String> {
    if text == "all" {
        return Ok(CHECKS.iter().map(|s| s.to_string()).collect());
    }
    let mut out = Vec::new();
    for name in text.split(',').map(str::trim) {
        if !CHECKS.contains(&name) {
            return Err(format!(
                "unknown check {name:?}; known: all, {}",
                CHECKS.join(", ")
            ));
        }
        if !out.iter().any(|c| c == name) {
            out.push(name.to_string());
        }
    }
    out.sort_by_key(|c| CHECKS.iter().position(|k| k == c));
    Ok(out)
}

struct Outcome {
    verdict: Verdict,
    instances: usize,
    notes: Vec<String>,
}

/// Iteration state for one check: counts instances and keeps the first failure.
struct Tally<'s> {
    ctx: &'s Context<'s>,
    name: &'static str,
    instances: usize,
    failure: Option<Witness>,
    notes: Vec<String>,
}

impl<'s> Tally<'s> {
    fn new(ctx: &'s Context<'s>, name: &'static str) -> Self {
        Tally {
            ctx,
            name,
            instances: 0,
            failure: None,
            notes: Vec::new(),
        }
    }

    fn fail(
        &mut self,
        thetas: &[Partition],
        order: Option<[usize; 3]>,
        axis: Option<usize>,
        term: Option<String>,
        detail: String,
    ) {
        if self.failure.is_none() {
            self.failure = Some(Witness {
                check: self.name.to_string(),
                algebra: self.ctx.alg.name.clone(),
                thetas: thetas.to_vec(),
                order,
                axis,
                term,
                detail,
            });
        }
    }

    /// Without a modular lattice the theorems promise nothing, so the
    /// outcome is recorded as a note instead of a verdict.
    fn finish(self) -> Outcome {
        let mut notes = self.notes;
        let verdict = if !self.ctx.modular {
            if let Some(w) = &self.failure {
                notes.push(format!("predicted property fails here: {}", w.detail));
            }
            Verdict::HypothesisNotMet {
                reason: "congruence lattice is not modular".into(),
            }
        } else {
            match self.failure {
                None => Verdict::Pass,
                Some(witness) => Verdict::Fail { witness },
            }
        };
        Outcome {
            verdict,
            instances: self.instances,
            notes,
        }
    }
}

struct Context<'a> {
    alg: &'a FiniteAlgebra,
    engine: Engine<'a>,
    lattice: std::rc::Rc<CongruenceLattice>,
    modular: bool,
    pairs: Vec<Vec<Partition>>,
    triples: Vec<Vec<Partition>>,
    opts: &'a SuiteOptions,
}

fn all_tuples(members: &[Partition], k: usize) -> Vec<Vec<Partition>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t: Vec<Partition>| {
                members.iter().map(move |m| {
                    let mut t = t.clone();
                    t.push(m.clone());
                    t
                })
            })
            .collect();
    }
    out
}

fn names(ctx: &Context, t: &[Partition]) -> String {
    let v: Vec<String> = t.iter().map(|p| ctx.lattice.name_of(p)).collect();
    format!("({})", v.join(", "))
}

fn fmt_cube(c: &[u16]) -> String {
    let v: Vec<String> = c.iter().map(|x| x.to_string()).collect();
    let kind = if c.len() == 4 { "sq" } else { "cube" };
    format!("{kind}[{}]", v.join(","))
}

fn bin_delta_symmetry(ctx: &Context) -> Result<Outcome> {
    let mut t = Tally::new(ctx, "bin-delta-symmetry");
    for p in &ctx.pairs {
        t.instances += 1;
        let ab = ctx.engine.delta_binary(&p[0], &p[1], Route::Generated)?;
        let ba = ctx.engine.delta_binary(&p[1], &p[0], Route::Generated)?;
        let (x, y) = (ab.squares(), ba.transposed_squares());
        if x != y {
            let sq = x
                .iter()
                .find(|s| !y.contains(s))
                .or_else(|| y.iter().find(|s| !x.contains(s)))
                .unwrap();
            t.fail(
                p,
                None,
                None,
                None,
                format!("{} lies in exactly one of the two relations", fmt_cube(sq)),
            );
        }
        let closure = ctx.engine.delta_binary(&p[0], &p[1], Route::Closure)?;
        if closure.squares() != x {
            t.fail(
                p,
                None,
                None,
                None,
                "generated and closure routes differ".into(),
            );
        }
    }
    Ok(t.finish())
}

fn bin_delta_commutator(ctx: &Context) -> Result<Outcome> {
    let mut t = Tally::new(ctx, "bin-delta-commutator");
    for p in &ctx.pairs {
        t.instances += 1;
        let r = ctx.engine.binary_conditions(&p[0], &p[1])?;
        if let Some(d) = r.disagreement {
            t.fail(
                p,
                None,
                None,
                None,
                format!(
                    "pair {:?}: holds for {:?}, fails for {:?}",
                    d.pair, d.holding, d.failing
                ),
            );
        }
    }
    Ok(t.finish())
}

fn delta_order(ctx: &Context) -> Result<Outcome> {
    let mut t = Tally::new(ctx, "delta-order");
    for p in &ctx.triples {
        let base = ctx
            .engine
            .delta_ternary(p, ORDERS[0], Route::Generated)?
            .sorted_cubes();
        t.instances += 1;
        for order in &ORDERS[1..] {
            t.instances += 1;
            let other = ctx
                .engine
                .delta_ternary(p, *order, Route::Generated)?
                .sorted_cubes();
            if other != base {
                let c = base
                    .iter()
                    .find(|c| other.binary_search(c).is_err())
                    .or_else(|| other.iter().find(|c| base.binary_search(c).is_err()))
                    .unwrap();
                t.fail(
                    p,
                    Some(*order),
                    None,
                    None,
                    format!("{} differs from order {:?}", fmt_cube(c), ORDERS[0]),
                );
            }
        }
    }
    Ok(t.finish())
}

fn delta_route(ctx: &Context) -> Result<Outcome> {
    let mut t = Tally::new(ctx, "delta-route");
    for p in &ctx.triples {
        for order in ORDERS {
            t.instances += 1;
            let a = ctx
                .engine
                .delta_ternary(p, order, Route::Generated)?
                .sorted_cubes();
            let b = ctx
                .engine
                .delta_ternary(p, order, Route::Closure)?
                .sorted_cubes();
            if a != b {
                t.fail(
                    p,
                    Some(order),
                    None,
                    None,
                    format!("generated {} cubes, closure {} cubes", a.len(), b.len()),
                );
            }
        }
    }
    Ok(t.finish())
}

fn nested_delta(ctx: &Context) -> Result<Outcome> {
    let mut t = Tally::new(ctx, "nested-delta");
    for p in &ctx.triples {
        for order in ORDERS {
            t.instances += 1;
            let r = ctx.engine.check_nested_delta(p, order)?;
            if let Some(c) = r.witness {
                t.fail(
                    p,
                    Some(order),
                    None,
                    None,
                    format!(
                        "{} lies in exactly one side ({} vs {} cubes)",
                        fmt_cube(&c),
                        r.ternary_size,
                        r.nested_size
                    ),
                );
            }
        }
    }
    Ok(t.finish())
}

fn delta_commutator(ctx: &Context) -> Result<Outcome> {
    let mut t = Tally::new(ctx, "delta-commutator");
    for p in &ctx.triples {
        t.instances += 1;
        let r = ctx.engine.commutator_via_delta(p)?;
        if !r.consistent() {
            let detail = match &r.conditions.disagreement {
                Some(d) => format!(
                    "pair {:?}: holds for {:?}, fails for {:?}",
                    d.pair, d.holding, d.failing
                ),
                None => format!(
                    "via cubes {} vs term condition {}",
                    r.commutator, r.term_condition
                ),
            };
            t.fail(p, None, None, None, detail);
        }
    }
    Ok(t.finish())
}

fn nested_inequality(ctx: &Context) -> Result<Outcome> {
    let mut t = Tally::new(ctx, "nested-inequality");
    for p in &ctx.triples {
        t.instances += 1;
        let r = ctx.engine.check_nested_inequality(p)?;
        if let Some(pair) = r.witness {
            t.fail(
                p,
                None,
                None,
                None,
                format!(
                    "pair {pair:?} in [[θ0,θ1],θ2] = {} but not in {}",
                    r.left, r.right
                ),
            );
        }
        if p.iter().all(|x| x.is_one()) {
            t.notes.push(format!(
                "{}: left {}, right {}",
                names(ctx, p),
                r.left,
                r.right
            ));
        }
    }
    Ok(t.finish())
}

fn tc_vs_ctr(ctx: &Context) -> Result<Outcome> {
    let mut t = Tally::new(ctx, "tc-vs-ctr");
    let mut exhausted = None;
    let mut corners = 0;
    for p in &ctx.triples {
        for j in 0..3 {
            t.instances += 1;
            let delta = ctx.engine.tc_commutator(p, j)?;
            if !ctx.engine.check_tc(p, j, &delta)?.holds {
                t.fail(
                    p,
                    None,
                    Some(j),
                    None,
                    format!("term condition fails at its own fixpoint {delta}"),
                );
                continue;
            }
            match ctx.engine.check_ctr(p, j, &delta, &ctx.opts.bound) {
                Ok(r) => {
                    corners += r.corners_checked;
                    if let Some((c, dims)) = r.witness {
                        t.fail(
                            p,
                            None,
                            Some(j),
                            None,
                            format!("corner {c} of a complex with dims {dims:?}, δ = {delta}"),
                        );
                    }
                }
                Err(e) if e.is_resource() => {
                    exhausted.get_or_insert_with(|| format!("{} axis {j}: {e}", names(ctx, p)));
                }
                Err(e) => return Err(e),
            }
        }
    }
    t.notes.push(format!(
        "{corners} corners checked up to dims {:?}",
        ctx.opts.bound.dims
    ));
    let mut out = t.finish();
    if let (Verdict::Pass, Some(detail)) = (&out.verdict, exhausted) {
        out.verdict = Verdict::BoundExhausted { detail };
    }
    Ok(out)
}

/// Looks up `name` in the term library.
fn library_term<'o>(ctx: &'o Context, name: &str) -> Option<&'o TermFn> {
    ctx.opts.terms.as_ref().and_then(|l| l.get(name))
}

fn wobbly(ctx: &Context) -> Result<Outcome> {
    let Some(d) = library_term(ctx, "d") else {
        return Ok(Outcome {
            verdict: Verdict::HypothesisNotMet {
                reason: "no difference term `d` supplied".into(),
            },
            instances: 0,
            notes: Vec::new(),
        });
    };
    let mut t = Tally::new(ctx, "wobbly");
    let term = Some(d.body.to_string());
    t.instances += 1;
    if let Some(f) = check_difference_term(&ctx.engine, d)? {
        t.fail(
            &[],
            None,
            None,
            term.clone(),
            format!("difference term fails: {f:?}"),
        );
        return Ok(t.finish());
    }
    let q = wobbly_cube_term(d)?;
    t.instances += 1;
    if let Some(f) = check_wobbly_identities(&ctx.engine, &q)? {
        t.fail(
            &[],
            None,
            None,
            term.clone(),
            format!(
                "cube term identity {} fails at {:?}",
                f.identity, f.assignment
            ),
        );
    }
    if let Some(h) = library_term(ctx, "h") {
        t.instances += 1;
        if let Some(f) = check_strong_cube(ctx.alg, h)? {
            t.fail(
                &[],
                None,
                None,
                Some(h.body.to_string()),
                format!(
                    "strong cube identity {} fails at {:?}",
                    f.identity, f.assignment
                ),
            );
        }
    }
    let mut completions = 0;
    for theta in ctx.lattice.members() {
        t.instances += 2;
        let th = std::slice::from_ref(theta);
        if let Some(w) = check_binary_delta_difference(&ctx.engine, theta, d)? {
            t.fail(
                th,
                None,
                None,
                term.clone(),
                format!("square sq[x,y,z,d(x,y,z)] missing for (x,y,z) = {w:?}"),
            );
        }
        let r = check_wobbly_completion(&ctx.engine, theta, &q, ctx.opts.completion_cap)?;
        completions += r.checked;
        if let Some(c) = r.witness {
            t.fail(
                th,
                None,
                None,
                term.clone(),
                format!(
                    "completed {} lies outside the ternary relation",
                    fmt_cube(&c)
                ),
            );
        }
    }
    t.notes
        .push(format!("{completions} partial cubes completed"));
    Ok(t.finish())
}

/// The Day sequence for lines-preserved: a found one, else the term library's.
fn day_sequence(ctx: &Context) -> Result<std::result::Result<(DaySequence, String), String>> {
    match find_day_terms(ctx.alg, ctx.opts.day_search_cap)? {
        DaySearch::Found {
            sequence,
            clone_size,
        } => {
            return Ok(Ok((
                sequence,
                format!("Day sequence found in a clone of {clone_size} functions"),
            )))
        }
        DaySearch::None { clone_size } => {
            return Ok(Err(format!(
                "no Day sequence in the full 4-ary clone ({clone_size} functions)"
            )))
        }
        DaySearch::Exhausted { .. } => {}
    }
    match ctx.opts.terms.as_ref().and_then(|l| l.day_sequence()) {
        Some(seq) => {
            let seq = seq?;
            if let Some(f) = check_day_sequence(ctx.alg, &seq)? {
                return Ok(Err(format!(
                    "supplied Day sequence fails identity ({}) at index {}",
                    f.identity, f.index
                )));
            }
            Ok(Ok((
                seq,
                "supplied Day sequence (clone search exhausted)".into(),
            )))
        }
        None => Ok(Err(
            "Day-term search exhausted and no sequence supplied".into()
        )),
    }
}

fn lines_preserved(ctx: &Context) -> Result<Outcome> {
    let (day, origin) = match day_sequence(ctx)? {
        Ok(found) => found,
        Err(reason) => {
            return Ok(Outcome {
                verdict: Verdict::HypothesisNotMet { reason },
                instances: 0,
                notes: Vec::new(),
            })
        }
    };
    let mut t = Tally::new(ctx, "lines-preserved");
    t.notes.push(format!("{origin}, {} terms", day.len()));
    let mut checks = 0;
    for p in &ctx.triples {
        for (j, l) in [(0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)] {
            let seed = (j * 3 + l) as u64;
            let samples = sample_complexes(&ctx.engine, p, j, l, ctx.opts.samples, seed)?;
            t.instances += samples.len();
            let r = check_lines_preserved(&ctx.engine, p, &day, j, l, &samples)?;
            checks += r.checks;
            if !r.holds() {
                let detail = match r.witness {
                    Some(w) => format!(
                        "axes ({j},{l}), m_{} on complex {:?} with dims {:?}, δ = {}",
                        w.index, w.input, w.dims, w.delta
                    ),
                    None => format!(
                        "axes ({j},{l}): {} outputs are not complexes",
                        r.non_complex_outputs
                    ),
                };
                t.fail(p, None, Some(j * 3 + l), None, detail);
            }
        }
    }
    t.notes
        .push(format!("{checks} implications with a true hypothesis"));
    Ok(t.finish())
}

fn run_check(ctx: &Context, name: &str) -> Result<Outcome> {
    match name {
        "bin-delta-symmetry" => bin_delta_symmetry(ctx),
        "bin-delta-commutator" => bin_delta_commutator(ctx),
        "delta-order" => delta_order(ctx),
        "delta-route" => delta_route(ctx),
        "nested-delta" => nested_delta(ctx),
        "delta-commutator" => delta_commutator(ctx),
        "tc-vs-ctr" => tc_vs_ctr(ctx),
        "nested-inequality" => nested_inequality(ctx),
        "wobbly" => wobbly(ctx),
        "lines-preserved" => lines_preserved(ctx),
        other => Err(Error::Precondition(format!("unknown check {other:?}"))),
    }
}

/// Runs the selected checks. Input errors abort; resource errors become
/// `bound-exhausted` verdicts.
pub fn run_suite(alg: &FiniteAlgebra, opts: &SuiteOptions) -> Result<SuiteReport> {
    let engine = Engine::new(alg);
    let lattice = engine.lattice()?;
    let modularity_witness = lattice.is_modular();
    let modular = modularity_witness.is_none();
    let members = lattice.members().to_vec();
    let (pairs, triples, scope_note) = if !opts.tuples.is_empty() {
        let pick = |k: usize| {
            opts.tuples
                .iter()
                .filter(|t| t.len() == k)
                .cloned()
                .collect::<Vec<_>>()
        };
        (pick(2), pick(3), Some("user-specified tuples".to_string()))
    } else if members.len() <= DEFAULT_SCOPE_LIMIT {
        (all_tuples(&members, 2), all_tuples(&members, 3), None)
    } else {
        let ends = [lattice.zero().clone(), lattice.one().clone()];
        (
            all_tuples(&ends, 2),
            all_tuples(&ends, 3),
            Some(format!(
                "{} congruences exceed the default scope of {DEFAULT_SCOPE_LIMIT}; tuples restricted to 0 and 1",
                members.len()
            )),
        )
    };
    let ctx = Context {
        alg,
        engine,
        lattice: lattice.clone(),
        modular,
        pairs,
        triples,
        opts,
    };
    let mut checks = Vec::new();
    let mut summary = Summary::default();
    for name in &opts.checks {
        let start = Instant::now();
        let outcome = match run_check(&ctx, name) {
            Ok(o) => o,
            Err(e) if e.is_resource() => Outcome {
                verdict: Verdict::BoundExhausted {
                    detail: e.to_string(),
                },
                instances: 0,
                notes: Vec::new(),
            },
            Err(e) => return Err(e),
        };
        match outcome.verdict {
            Verdict::Pass => summary.pass += 1,
            Verdict::Fail { .. } => summary.fail += 1,
            Verdict::HypothesisNotMet { .. } => summary.hypothesis_not_met += 1,
            Verdict::BoundExhausted { .. } => summary.bound_exhausted += 1,
        }
        checks.push(CheckReport {
            name: name.clone(),
            verdict: outcome.verdict,
            instances: outcome.instances,
            notes: outcome.notes,
            millis: opts.timing.then(|| start.elapsed().as_millis() as u64),
        });
    }
    Ok(SuiteReport {
        algebra: alg.name.clone(),
        size: alg.size,
        congruences: lattice.len(),
        modular,
        modularity_witness,
        pairs: ctx.pairs.len(),
        triples: ctx.triples.len(),
        scope_note,
        checks,
        summary,
    })
}

/// Reruns the instance recorded in a witness.
pub fn replay(alg: &FiniteAlgebra, witness: &Witness, base: &SuiteOptions) -> Result<SuiteReport> {
    if witness.algebra != alg.name {
        return Err(Error::Precondition(format!(
            "witness is for algebra {:?}, not {:?}",
            witness.algebra, alg.name
        )));
    }
    let mut opts = base.clone();
    opts.checks = vec![witness.check.clone()];
    if !witness.thetas.is_empty() && witness.thetas.len() >= 2 {
        opts.tuples = vec![witness.thetas.clone()];
    }
    if let Some(text) = &witness.term {
        let mut lib = opts.terms.take().unwrap_or_default();
        let d = TermFn::parse(&["x", "y", "z"], text)?;
        lib.entries.retain(|(n, _)| n != "d");
        lib.entries.push(("d".into(), d));
        opts.terms = Some(lib);
    }
    run_suite(alg, &opts)
}
