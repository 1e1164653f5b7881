//! Term identities: Day sequences, difference terms and cube terms.

use std::collections::{HashMap, VecDeque};

use indexmap::IndexSet;
use rustc_hash::{FxBuildHasher, FxHashMap};
use serde::Serialize;

use crate::algebra::{Elem, FiniteAlgebra};
use crate::congruence::cg;
use crate::engine::{Engine, Route};
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::term::{Compiled, Term, TermFn};

/// A variable assignment in declaration order.
pub type Assignment = Vec<(String, Elem)>;

/// Checks `lhs ≈ rhs` over all assignments to `vars`, returning the first
/// falsifying assignment (first variable most significant).
pub fn check_identity(
    alg: &FiniteAlgebra,
    lhs: &Term,
    rhs: &Term,
    vars: &[&str],
) -> Result<Option<Assignment>> {
    let params: Vec<String> = vars.iter().map(|v| v.to_string()).collect();
    let l = Compiled::new(alg, &params, lhs)?;
    let r = Compiled::new(alg, &params, rhs)?;
    let n = alg.size;
    let mut args = vec![0 as Elem; vars.len()];
    loop {
        if l.eval(alg, &args) != r.eval(alg, &args) {
            return Ok(Some(
                params.iter().cloned().zip(args.iter().copied()).collect(),
            ));
        }
        let mut pos = vars.len();
        loop {
            if pos == 0 {
                return Ok(None);
            }
            pos -= 1;
            args[pos] += 1;
            if (args[pos] as usize) < n {
                break;
            }
            args[pos] = 0;
        }
    }
}

fn vars(names: &str) -> Vec<Term> {
    names.split(',').map(Term::var).collect()
}

const DAY_PARAMS: [&str; 4] = ["x", "y", "z", "u"];

/// 4-ary terms `m_0, …, m_n` in the variables `x, y, z, u`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DaySequence {
    pub terms: Vec<TermFn>,
}

impl DaySequence {
    pub fn new(terms: Vec<TermFn>) -> Result<Self> {
        if terms.len() < 2 {
            return Err(Error::Precondition(
                "a Day sequence needs at least two terms".into(),
            ));
        }
        if let Some(t) = terms.iter().find(|t| t.arity() != 4) {
            return Err(Error::Precondition(format!(
                "Day term {} is not 4-ary",
                t.body
            )));
        }
        Ok(DaySequence { terms })
    }

    /// `x`, `p(u, z, y)`, `u` for a Mal'cev term `p(a, b, b) ≈ a`, `p(a, a, b) ≈ b`.
    pub fn from_maltsev(p: &TermFn) -> Result<Self> {
        let mid = p.apply(&vars("u,z,y"))?;
        DaySequence::new(vec![
            TermFn::projection(&DAY_PARAMS, 0),
            TermFn::new(&DAY_PARAMS, mid),
            TermFn::projection(&DAY_PARAMS, 3),
        ])
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Operation tables of every term, each of length `n⁴`.
    pub fn tables(&self, alg: &FiniteAlgebra) -> Result<Vec<Vec<Elem>>> {
        self.terms
            .iter()
            .map(|t| t.compile(alg)?.table(alg))
            .collect()
    }
}

/// A Day identity that fails: which family (1–5), which index `e`, and where.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DayFailure {
    pub identity: u8,
    pub index: usize,
    pub assignment: Assignment,
}

/// Verifies the five Day identity families.
pub fn check_day_sequence(alg: &FiniteAlgebra, seq: &DaySequence) -> Result<Option<DayFailure>> {
    let m = &seq.terms;
    let last = m.len() - 1;
    let fail = |identity, index, assignment| {
        Some(DayFailure {
            identity,
            index,
            assignment,
        })
    };
    for (e, t) in m.iter().enumerate() {
        let lhs = t.apply(&vars("x,y,y,x"))?;
        if let Some(a) = check_identity(alg, &lhs, &Term::var("x"), &["x", "y"])? {
            return Ok(fail(1, e, a));
        }
    }
    if let Some(a) = check_identity(
        alg,
        &m[0].apply(&vars("x,y,z,u"))?,
        &Term::var("x"),
        &DAY_PARAMS,
    )? {
        return Ok(fail(2, 0, a));
    }
    if let Some(a) = check_identity(
        alg,
        &m[last].apply(&vars("x,y,z,u"))?,
        &Term::var("u"),
        &DAY_PARAMS,
    )? {
        return Ok(fail(3, last, a));
    }
    for e in 0..last {
        let (identity, args, vs): (u8, &str, &[&str]) = if e % 2 == 0 {
            (4, "x,x,u,u", &["x", "u"])
        } else {
            (5, "x,y,y,u", &["x", "y", "u"])
        };
        let lhs = m[e].apply(&vars(args))?;
        let rhs = m[e + 1].apply(&vars(args))?;
        if let Some(a) = check_identity(alg, &lhs, &rhs, vs)? {
            return Ok(fail(identity, e, a));
        }
    }
    Ok(None)
}

/// Named terms loaded from a term file.
///
/// Without an explicit parameter list, `m0`, `m1`, … take `x, y, z, u`;
/// `d`, `h` and `p` take `x, y, z`; `q` takes the cube parameters; any other
/// name takes its variables in order of first occurrence.
#[derive(Clone, Debug, Default, Serialize)]
pub struct TermLibrary {
    pub entries: Vec<(String, TermFn)>,
}

fn day_index(name: &str) -> Option<usize> {
    name.strip_prefix('m').and_then(|r| r.parse().ok())
}

impl TermLibrary {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries: Vec<(String, TermFn)> = Vec::new();
        for (name, params, body) in crate::term::parse_term_file(text)? {
            let params: Vec<String> = match params {
                Some(p) => p,
                None if day_index(&name).is_some() => {
                    DAY_PARAMS.iter().map(|s| s.to_string()).collect()
                }
                None if matches!(name.as_str(), "d" | "h" | "p") => {
                    vec!["x".into(), "y".into(), "z".into()]
                }
                None if name == "q" => CUBE_PARAMS.iter().map(|s| s.to_string()).collect(),
                None => body.variables(),
            };
            if entries.iter().any(|(n, _)| *n == name) {
                return Err(Error::Precondition(format!("term {name:?} defined twice")));
            }
            let refs: Vec<&str> = params.iter().map(|s| s.as_str()).collect();
            entries.push((name, TermFn::new(&refs, body)));
        }
        Ok(TermLibrary { entries })
    }

    pub fn get(&self, name: &str) -> Option<&TermFn> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, t)| t)
    }

    /// `m0, m1, …` up to the first missing index, when at least two exist.
    pub fn day_sequence(&self) -> Option<Result<DaySequence>> {
        let mut terms = Vec::new();
        while let Some(t) = self.get(&format!("m{}", terms.len())) {
            terms.push(t.clone());
        }
        (terms.len() >= 2).then(|| DaySequence::new(terms))
    }
}

/// Result of the bounded Day-term search.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum DaySearch {
    Found {
        sequence: DaySequence,
        clone_size: usize,
    },
    /// The whole 4-ary clone was enumerated and no chain exists.
    None { clone_size: usize },
    /// The clone grew past the cap before closing.
    Exhausted { explored: usize },
}

/// Budget for clone enumeration: total stored function values.
pub const CLONE_CELL_BUDGET: usize = 1 << 26;

/// Enumerates the 4-ary clone as value vectors over `A⁴` (with one term per
/// function), then looks for a shortest Day chain by breadth-first search.
pub fn find_day_terms(alg: &FiniteAlgebra, max_functions: usize) -> Result<DaySearch> {
    let n = alg.size;
    let width = n.pow(4);
    let cap = max_functions.min(CLONE_CELL_BUDGET / width.max(1)).max(4);
    let point = |k: usize| -> [Elem; 4] {
        [
            (k / (n * n * n)) as Elem,
            (k / (n * n) % n) as Elem,
            (k / n % n) as Elem,
            (k % n) as Elem,
        ]
    };
    let rank = |p: [Elem; 4]| -> usize { p.iter().fold(0, |acc, &a| acc * n + a as usize) };

    let mut funcs: IndexSet<Vec<Elem>, FxBuildHasher> = IndexSet::default();
    let mut terms: Vec<Term> = Vec::new();
    let push = |f: Vec<Elem>,
                t: Term,
                funcs: &mut IndexSet<Vec<Elem>, FxBuildHasher>,
                terms: &mut Vec<Term>| {
        if funcs.insert(f) {
            terms.push(t);
        }
    };
    for (k, v) in DAY_PARAMS.iter().enumerate() {
        let f: Vec<Elem> = (0..width).map(|p| point(p)[k]).collect();
        push(f, Term::var(v), &mut funcs, &mut terms);
    }
    for op in alg.operations.iter().filter(|o| o.arity == 0) {
        push(
            vec![op.table[0]; width],
            Term::app(&op.symbol, vec![]),
            &mut funcs,
            &mut terms,
        );
    }

    let mut next = 0;
    while next < funcs.len() {
        let e = next;
        next += 1;
        for (op_idx, op) in alg.operations.iter().enumerate() {
            let r = op.arity;
            if r == 0 {
                continue;
            }
            for first in 0..r {
                if e == 0 && first > 0 {
                    break;
                }
                let mut idx = vec![0usize; r];
                idx[first] = e;
                loop {
                    let f: Vec<Elem> = (0..width)
                        .map(|p| {
                            let args: smallvec::SmallVec<[Elem; 4]> =
                                idx.iter().map(|&i| funcs[i][p]).collect();
                            alg.apply(op_idx, &args)
                        })
                        .collect();
                    if !funcs.contains(&f) {
                        let t =
                            Term::app(&op.symbol, idx.iter().map(|&i| terms[i].clone()).collect());
                        push(f, t, &mut funcs, &mut terms);
                        if funcs.len() > cap {
                            return Ok(DaySearch::Exhausted {
                                explored: funcs.len(),
                            });
                        }
                    }
                    let mut pos = r;
                    let mut advanced = false;
                    while pos > 0 {
                        pos -= 1;
                        if pos == first {
                            continue;
                        }
                        let limit = if pos < first { e } else { e + 1 };
                        idx[pos] += 1;
                        if idx[pos] < limit {
                            advanced = true;
                            break;
                        }
                        idx[pos] = 0;
                    }
                    if !advanced {
                        break;
                    }
                }
            }
        }
    }

    // node filter (1): m(x,y,y,x) = x
    let ok: Vec<bool> = funcs
        .iter()
        .map(|f| (0..n as Elem).all(|x| (0..n as Elem).all(|y| f[rank([x, y, y, x])] == x)))
        .collect();
    let key_even = |f: &Vec<Elem>| -> Vec<Elem> {
        (0..n * n)
            .map(|k| {
                f[rank([
                    (k / n) as Elem,
                    (k / n) as Elem,
                    (k % n) as Elem,
                    (k % n) as Elem,
                ])]
            })
            .collect()
    };
    let key_odd = |f: &Vec<Elem>| -> Vec<Elem> {
        (0..n * n * n)
            .map(|k| {
                let (x, y, u) = ((k / (n * n)) as Elem, (k / n % n) as Elem, (k % n) as Elem);
                f[rank([x, y, y, u])]
            })
            .collect()
    };
    let mut by_even: FxHashMap<Vec<Elem>, Vec<usize>> = FxHashMap::default();
    let mut by_odd: FxHashMap<Vec<Elem>, Vec<usize>> = FxHashMap::default();
    for (i, f) in funcs.iter().enumerate() {
        if ok[i] {
            by_even.entry(key_even(f)).or_default().push(i);
            by_odd.entry(key_odd(f)).or_default().push(i);
        }
    }
    // states (function, parity of e); start at the x projection with e = 0
    let proj = |k: usize| -> Vec<Elem> { (0..width).map(|p| point(p)[k]).collect() };
    let start_fn = funcs
        .get_index_of(&proj(0))
        .expect("projections are in the clone");
    let target = funcs
        .get_index_of(&proj(3))
        .expect("projections are in the clone");
    let states = funcs.len() * 2;
    let mut parent = vec![usize::MAX; states];
    let start = start_fn * 2;
    parent[start] = start;
    let mut queue = VecDeque::from([start]);
    let mut goal = None;
    while let Some(s) = queue.pop_front() {
        let (f, parity) = (s / 2, s % 2);
        if f == target && s != start {
            goal = Some(s);
            break;
        }
        let group = if parity == 0 {
            by_even.get(&key_even(&funcs[f]))
        } else {
            by_odd.get(&key_odd(&funcs[f]))
        };
        for &g in group.into_iter().flatten() {
            let t = g * 2 + (1 - parity);
            if parent[t] == usize::MAX {
                parent[t] = s;
                queue.push_back(t);
            }
        }
    }
    let clone_size = funcs.len();
    let Some(mut s) = goal else {
        return Ok(DaySearch::None { clone_size });
    };
    let mut chain = vec![target];
    while s != start {
        s = parent[s];
        chain.push(s / 2);
    }
    chain.reverse();
    let sequence = DaySequence::new(
        chain
            .into_iter()
            .map(|i| TermFn::new(&DAY_PARAMS, terms[i].clone()))
            .collect(),
    )?;
    Ok(DaySearch::Found {
        sequence,
        clone_size,
    })
}

/// Why a difference term was rejected.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum DifferenceFailure {
    /// `d(x,x,y) ≈ y` fails at the assignment.
    Identity(Assignment),
    /// `(d(x,y,x), y) ∉ [θ,θ]` for `θ = Cg(x,y)`.
    Commutator { x: Elem, y: Elem, value: Elem },
}

fn term_table_fn(alg: &FiniteAlgebra, f: &TermFn, arity: usize) -> Result<Compiled> {
    if f.arity() != arity {
        return Err(Error::Precondition(format!(
            "expected a {arity}-ary term, got {} parameters",
            f.arity()
        )));
    }
    f.compile(alg)
}

/// Per-pair commutators `[Cg(x,y), …]` with memoization on the principal congruence.
struct PrincipalCommutators<'e, 'a> {
    engine: &'e Engine<'a>,
    arity: usize,
    cache: HashMap<Partition, Partition>,
}

impl PrincipalCommutators<'_, '_> {
    fn get(&mut self, x: Elem, y: Elem) -> Result<Partition> {
        let theta = cg(self.engine.algebra(), [(x as usize, y as usize)])?;
        if let Some(d) = self.cache.get(&theta) {
            return Ok(d.clone());
        }
        let d = self
            .engine
            .tc_commutator(&vec![theta.clone(); self.arity], 0)?;
        self.cache.insert(theta, d.clone());
        Ok(d)
    }
}

/// `d(x,x,y) ≈ y` exactly and `d(x,y,x) ≡ y` modulo `[θ,θ]` for `θ = Cg(x,y)`.
pub fn check_difference_term(engine: &Engine, d: &TermFn) -> Result<Option<DifferenceFailure>> {
    let alg = engine.algebra();
    let c = term_table_fn(alg, d, 3)?;
    let lhs = d.apply(&vars("x,x,y"))?;
    if let Some(a) = check_identity(alg, &lhs, &Term::var("y"), &["x", "y"])? {
        return Ok(Some(DifferenceFailure::Identity(a)));
    }
    let mut comms = PrincipalCommutators {
        engine,
        arity: 2,
        cache: HashMap::new(),
    };
    for x in 0..alg.size as Elem {
        for y in 0..alg.size as Elem {
            let value = c.eval(alg, &[x, y, x]);
            if value == y {
                continue;
            }
            if !comms.get(x, y)?.related(value as usize, y as usize) {
                return Ok(Some(DifferenceFailure::Commutator { x, y, value }));
            }
        }
    }
    Ok(None)
}

/// Parameter names of the 7-ary cube terms, vertex `(0,0,0)` through `(0,1,1)`.
pub const CUBE_PARAMS: [&str; 7] = ["x000", "x100", "x010", "x110", "x001", "x101", "x011"];

/// `q = d(d(x000, x100, x010), x110, d(x001, x101, x011))`.
pub fn wobbly_cube_term(d: &TermFn) -> Result<TermFn> {
    let v: Vec<Term> = CUBE_PARAMS.iter().map(|p| Term::var(p)).collect();
    let lower = d.apply(&v[0..3])?;
    let upper = d.apply(&v[4..7])?;
    Ok(TermFn::new(
        &CUBE_PARAMS,
        d.apply(&[lower, v[3].clone(), upper])?,
    ))
}

/// The strong cube term `p` built from `h` in the same shape as the wobbly term.
pub fn strong_cube_term(h: &TermFn) -> Result<TermFn> {
    wobbly_cube_term(h)
}

/// A failing cube-term identity: its number and where it fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CubeIdentityFailure {
    pub identity: String,
    pub assignment: Assignment,
}

fn cube_identity(
    alg: &FiniteAlgebra,
    q: &TermFn,
    name: &str,
    args: &str,
    rhs: &str,
    vs: &[&str],
) -> Result<Option<CubeIdentityFailure>> {
    let lhs = q.apply(&vars(args))?;
    Ok(
        check_identity(alg, &lhs, &Term::var(rhs), vs)?.map(|assignment| CubeIdentityFailure {
            identity: name.to_string(),
            assignment,
        }),
    )
}

/// `q(x,x,x,x,y,y,y) ≈ y`, `q(x,x,y,y,x,x,y) ≈ y`, and
/// `q(x,y,x,y,x,y,x) ≡ y` modulo `[θ,θ,θ]` for `θ = Cg(x,y)`.
pub fn check_wobbly_identities(engine: &Engine, q: &TermFn) -> Result<Option<CubeIdentityFailure>> {
    let alg = engine.algebra();
    let c = term_table_fn(alg, q, 7)?;
    for (name, args) in [("1", "x,x,x,x,y,y,y"), ("2", "x,x,y,y,x,x,y")] {
        if let Some(f) = cube_identity(alg, q, name, args, "y", &["x", "y"])? {
            return Ok(Some(f));
        }
    }
    let mut comms = PrincipalCommutators {
        engine,
        arity: 3,
        cache: HashMap::new(),
    };
    for x in 0..alg.size as Elem {
        for y in 0..alg.size as Elem {
            let value = c.eval(alg, &[x, y, x, y, x, y, x]);
            if value != y && !comms.get(x, y)?.related(value as usize, y as usize) {
                return Ok(Some(CubeIdentityFailure {
                    identity: "3".into(),
                    assignment: vec![("x".into(), x), ("y".into(), y)],
                }));
            }
        }
    }
    Ok(None)
}

/// `h(x,x,y) ≈ y`, `h(x,y,x) ≈ y` and the three exact identities of the
/// derived 7-ary term `p`.
pub fn check_strong_cube(alg: &FiniteAlgebra, h: &TermFn) -> Result<Option<CubeIdentityFailure>> {
    term_table_fn(alg, h, 3)?;
    for (name, args) in [("h1", "x,x,y"), ("h2", "x,y,x")] {
        if let Some(f) = cube_identity(alg, h, name, args, "y", &["x", "y"])? {
            return Ok(Some(f));
        }
    }
    let p = strong_cube_term(h)?;
    for (name, args) in [
        ("p1", "w,w,x,x,y,y,z"),
        ("p2", "w,x,w,x,y,z,y"),
        ("p3", "w,x,y,z,w,x,y"),
    ] {
        if let Some(f) = cube_identity(alg, &p, name, args, "z", &["w", "x", "y", "z"])? {
            return Ok(Some(f));
        }
    }
    Ok(None)
}

/// For all `x θ y θ z`, the square `sq[x, y, z, d(x,y,z)]` lies in `Δ_{θ,θ}`.
pub fn check_binary_delta_difference(
    engine: &Engine,
    theta: &Partition,
    d: &TermFn,
) -> Result<Option<[Elem; 3]>> {
    let alg = engine.algebra();
    let c = term_table_fn(alg, d, 3)?;
    let delta = engine.delta_binary(theta, theta, Route::Generated)?;
    for block in theta.blocks() {
        for &x in &block {
            for &y in &block {
                for &z in &block {
                    let (x, y, z) = (x as Elem, y as Elem, z as Elem);
                    let w = c.eval(alg, &[x, y, z]);
                    if !delta.contains(&[x, y, z, w]) {
                        return Ok(Some([x, y, z]));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Outcome of the wobbly completion check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompletionReport {
    pub checked: usize,
    pub witness: Option<[Elem; 8]>,
}

/// For every partial cube whose three faces at the origin lie in `Δ_{θ,θ}`,
/// completing vertex 7 with `q` gives a member of `Δ_{θ,θ,θ}`.
pub fn check_wobbly_completion(
    engine: &Engine,
    theta: &Partition,
    q: &TermFn,
    cap: usize,
) -> Result<CompletionReport> {
    let alg = engine.algebra();
    let c = term_table_fn(alg, q, 7)?;
    let base = engine.delta_binary(theta, theta, Route::Generated)?;
    let squares = base.squares();
    let ternary = engine.delta_ternary(
        &[theta.clone(), theta.clone(), theta.clone()],
        [0, 1, 2],
        Route::Generated,
    )?;
    // squares indexed by their first two and first three labels
    let mut by_two: FxHashMap<[Elem; 2], Vec<[Elem; 4]>> = FxHashMap::default();
    let mut by_three: FxHashMap<[Elem; 3], Vec<Elem>> = FxHashMap::default();
    for s in &squares {
        by_two.entry([s[0], s[1]]).or_default().push(*s);
        by_three.entry([s[0], s[1], s[2]]).or_default().push(s[3]);
    }
    let mut report = CompletionReport {
        checked: 0,
        witness: None,
    };
    for bottom in &squares {
        let [m0, m1, m2, m3] = *bottom;
        for front in by_two.get(&[m0, m1]).into_iter().flatten() {
            let (m4, m5) = (front[2], front[3]);
            for &m6 in by_three.get(&[m0, m2, m4]).into_iter().flatten() {
                let m7 = c.eval(alg, &[m0, m1, m2, m3, m4, m5, m6]);
                let cube = [m0, m1, m2, m3, m4, m5, m6, m7];
                report.checked += 1;
                if report.checked > cap {
                    return Err(Error::BoundExhausted(format!(
                        "more than {cap} partial cubes"
                    )));
                }
                if !ternary.contains(&cube) {
                    report.witness = Some(cube);
                    return Ok(report);
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn z4_d() -> TermFn {
        TermFn::parse(&["x", "y", "z"], "+(+(y, -(x)), z)").unwrap()
    }

    fn s3_d() -> TermFn {
        TermFn::parse(&["x", "y", "z"], "*(*(y, inv(x)), z)").unwrap()
    }

    #[test]
    fn identities_on_z4() {
        let z4 = corpus::z4();
        let sum = Term::parse("+(x,y)").unwrap();
        assert_eq!(
            check_identity(&z4, &sum, &Term::parse("+(y,x)").unwrap(), &["x", "y"]).unwrap(),
            None
        );
        assert_eq!(
            check_identity(&z4, &sum, &Term::var("x"), &["x", "y"]).unwrap(),
            Some(vec![("x".into(), 0), ("y".into(), 1)])
        );
        assert_eq!(check_identity(&z4, &sum, &sum, &["x", "y"]).unwrap(), None);
    }

    #[test]
    fn maltsev_day_sequence() {
        let z4 = corpus::z4();
        let p = TermFn::parse(&["a", "b", "c"], "+(+(a, -(b)), c)").unwrap();
        let seq = DaySequence::from_maltsev(&p).unwrap();
        assert_eq!(seq.terms[1].body.to_string(), "+(+(u, -(z)), y)");
        assert_eq!(check_day_sequence(&z4, &seq).unwrap(), None);

        let short = DaySequence::new(vec![
            TermFn::projection(&DAY_PARAMS, 0),
            TermFn::projection(&DAY_PARAMS, 3),
        ])
        .unwrap();
        let f = check_day_sequence(&z4, &short).unwrap().unwrap();
        assert_eq!(f.identity, 4);
        assert_eq!(check_day_sequence(&corpus::e1(), &short).unwrap(), None);
    }

    #[test]
    fn bundled_term_files() {
        for (name, alg) in [("z4", corpus::z4()), ("s3", corpus::s3())] {
            let lib = TermLibrary::parse(corpus::terms_by_name(name).unwrap()).unwrap();
            let seq = lib.day_sequence().unwrap().unwrap();
            assert_eq!(seq.len(), 3);
            assert_eq!(check_day_sequence(&alg, &seq).unwrap(), None);
            let e = Engine::new(&alg);
            assert_eq!(
                check_difference_term(&e, lib.get("d").unwrap()).unwrap(),
                None
            );
            assert_eq!(
                check_strong_cube(&alg, lib.get("h").unwrap()).unwrap(),
                None
            );
            let p = lib.get("p").unwrap();
            let from_p = DaySequence::from_maltsev(p).unwrap();
            assert_eq!(from_p.terms[1].body, seq.terms[1].body);
        }
        let l22 = corpus::l22();
        let lib = TermLibrary::parse(corpus::terms_by_name("l22").unwrap()).unwrap();
        let d = lib.get("d").unwrap();
        assert_eq!(check_difference_term(&Engine::new(&l22), d).unwrap(), None);
        let lib = TermLibrary::parse("q := x011\nf := +(b, a)").unwrap();
        assert_eq!(lib.get("q").unwrap().arity(), 7);
        assert_eq!(lib.get("f").unwrap().params, vec!["b", "a"]);
        assert!(lib.day_sequence().is_none());
        assert!(TermLibrary::parse("d := x\nd := y").is_err());
    }

    #[test]
    fn day_search() {
        match find_day_terms(&corpus::z4(), 200_000).unwrap() {
            DaySearch::Found {
                sequence,
                clone_size,
            } => {
                assert!(sequence.len() >= 2);
                assert_eq!(clone_size, 256);
                assert_eq!(check_day_sequence(&corpus::z4(), &sequence).unwrap(), None);
            }
            other => panic!("expected Day terms for Z4, got {other:?}"),
        }
        assert!(matches!(
            find_day_terms(&corpus::set4(), 200_000).unwrap(),
            DaySearch::None { clone_size: 4 }
        ));
        match find_day_terms(&corpus::e1(), 10).unwrap() {
            DaySearch::Found { sequence, .. } => assert_eq!(sequence.len(), 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            find_day_terms(&corpus::s3(), 2_000).unwrap(),
            DaySearch::Exhausted { .. }
        ));
    }

    #[test]
    fn difference_terms() {
        let z4 = corpus::z4();
        let e = Engine::new(&z4);
        assert_eq!(check_difference_term(&e, &z4_d()).unwrap(), None);
        let first = TermFn::projection(&["x", "y", "z"], 0);
        assert_eq!(
            check_difference_term(&e, &first).unwrap(),
            Some(DifferenceFailure::Identity(vec![
                ("x".into(), 0),
                ("y".into(), 1)
            ]))
        );
        // z - y + x satisfies d(x,x,y) = y but d(0,1,0) = 3 is not 1 modulo [1,1] = 0
        let swapped = TermFn::parse(&["x", "y", "z"], "+(z, +(-(y), x))").unwrap();
        assert!(matches!(
            check_difference_term(&e, &swapped).unwrap(),
            Some(DifferenceFailure::Commutator {
                x: 0,
                y: 1,
                value: 3
            })
        ));

        let s3 = corpus::s3();
        let e = Engine::new(&s3);
        assert_eq!(check_difference_term(&e, &s3_d()).unwrap(), None);
        let e1 = corpus::e1();
        let e = Engine::new(&e1);
        assert_eq!(
            check_difference_term(&e, &TermFn::projection(&["x", "y", "z"], 0)).unwrap(),
            None
        );
    }

    #[test]
    fn cube_terms() {
        let third = TermFn::projection(&["x", "y", "z"], 2);
        assert_eq!(wobbly_cube_term(&third).unwrap().body, Term::var("x011"));
        let sym = TermFn::parse(&["x", "y", "z"], "d(x, y, z)").unwrap();
        assert_eq!(
            wobbly_cube_term(&sym).unwrap().body.to_string(),
            "d(d(x000, x100, x010), x110, d(x001, x101, x011))"
        );
        let z4 = corpus::z4();
        assert_eq!(check_strong_cube(&z4, &z4_d()).unwrap(), None);
        let f = check_strong_cube(&z4, &third).unwrap().unwrap();
        assert_eq!(f.identity, "h2");
        assert_eq!(f.assignment, vec![("x".into(), 0), ("y".into(), 1)]);
    }

    #[test]
    fn wobbly_on_groups() {
        for (alg, d) in [(corpus::z4(), z4_d()), (corpus::s3(), s3_d())] {
            let e = Engine::new(&alg);
            let q = wobbly_cube_term(&d).unwrap();
            assert_eq!(check_wobbly_identities(&e, &q).unwrap(), None);
            let lat = e.lattice().unwrap();
            for theta in lat.members() {
                assert_eq!(check_binary_delta_difference(&e, theta, &d).unwrap(), None);
            }
        }
    }

    #[test]
    fn wobbly_completion_on_z4() {
        let z4 = corpus::z4();
        let e = Engine::new(&z4);
        let q = wobbly_cube_term(&z4_d()).unwrap();
        for theta in [
            Partition::zero(4),
            Partition::parse_blocks(4, "0 2 | 1 3").unwrap(),
            Partition::one(4),
        ] {
            let r = check_wobbly_completion(&e, &theta, &q, 10_000_000).unwrap();
            assert_eq!(r.witness, None);
            assert!(r.checked > 0);
        }
    }
}
