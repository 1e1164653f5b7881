//! Terms over an algebra's signature: parsing, printing and evaluation.
//!
//! Grammar: `term := name | name '(' [term (',' term)*] ')'`. A name is any
//! run of characters other than whitespace, `(`, `)` and `,`. A bare name is
//! a variable when bound in the environment and otherwise a constant symbol.

use std::collections::HashMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::algebra::{table_entries, Elem, FiniteAlgebra};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Term {
    Var(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn app(symbol: &str, args: Vec<Term>) -> Term {
        Term::App(symbol.to_string(), args)
    }

    pub fn parse(text: &str) -> Result<Term> {
        let mut p = Parser { text, pos: 0 };
        p.skip_ws();
        let t = p.term()?;
        p.skip_ws();
        if p.pos != text.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(t)
    }

    /// Replaces variables by terms; unmapped variables stay.
    pub fn substitute(&self, map: &HashMap<&str, &Term>) -> Term {
        match self {
            Term::Var(v) => map
                .get(v.as_str())
                .map_or_else(|| self.clone(), |t| (*t).clone()),
            Term::App(f, args) => {
                Term::App(f.clone(), args.iter().map(|a| a.substitute(map)).collect())
            }
        }
    }

    /// Evaluates with variables looked up in `env`.
    pub fn eval(&self, alg: &FiniteAlgebra, env: &HashMap<String, Elem>) -> Result<Elem> {
        match self {
            Term::Var(v) => match env.get(v) {
                Some(&a) => {
                    if a as usize >= alg.size {
                        return Err(Error::ElementOutOfRange {
                            element: a as usize,
                            size: alg.size,
                        });
                    }
                    Ok(a)
                }
                None => match alg.operation(v) {
                    Ok(_) => alg.eval(v, &[]),
                    Err(_) => Err(Error::UnboundVariable(v.clone())),
                },
            },
            Term::App(f, args) => {
                let vals = args
                    .iter()
                    .map(|a| a.eval(alg, env))
                    .collect::<Result<Vec<_>>>()?;
                alg.eval(f, &vals)
            }
        }
    }

    /// Variable names in order of first occurrence.
    pub fn variables(&self) -> Vec<String> {
        fn walk(t: &Term, out: &mut Vec<String>) {
            match t {
                Term::Var(v) => {
                    if !out.contains(v) {
                        out.push(v.clone());
                    }
                }
                Term::App(_, args) => args.iter().for_each(|a| walk(a, out)),
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::App(s, args) => {
                write!(f, "{s}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl Serialize for Term {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn name(&mut self) -> Result<String> {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_whitespace() || matches!(c, '(' | ')' | ',') {
                break;
            }
            self.pos += c.len_utf8();
        }
        if self.pos == start {
            return Err(self.error("expected a name"));
        }
        Ok(self.text[start..self.pos].to_string())
    }

    fn term(&mut self) -> Result<Term> {
        let name = self.name()?;
        self.skip_ws();
        if self.peek() != Some('(') {
            return Ok(Term::Var(name));
        }
        self.pos += 1;
        self.skip_ws();
        let mut args = Vec::new();
        if self.peek() == Some(')') {
            self.pos += 1;
            return Ok(Term::App(name, args));
        }
        loop {
            self.skip_ws();
            args.push(self.term()?);
            self.skip_ws();
            match self.peek() {
                Some(',') => self.pos += 1,
                Some(')') => {
                    self.pos += 1;
                    return Ok(Term::App(name, args));
                }
                _ => return Err(self.error("expected ',' or ')'")),
            }
        }
    }
}

/// A term with an ordered parameter list, usable as a term operation.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct TermFn {
    pub params: Vec<String>,
    pub body: Term,
}

impl TermFn {
    pub fn new(params: &[&str], body: Term) -> Self {
        TermFn {
            params: params.iter().map(|s| s.to_string()).collect(),
            body,
        }
    }

    pub fn parse(params: &[&str], text: &str) -> Result<Self> {
        Ok(TermFn::new(params, Term::parse(text)?))
    }

    /// The `k`-th projection onto `params[k]`.
    pub fn projection(params: &[&str], k: usize) -> Self {
        TermFn::new(params, Term::var(params[k]))
    }

    pub fn arity(&self) -> usize {
        self.params.len()
    }

    /// `self(args…)` as a term.
    pub fn apply(&self, args: &[Term]) -> Result<Term> {
        if args.len() != self.arity() {
            return Err(Error::ArityMismatch {
                symbol: self.body.to_string(),
                expected: self.arity(),
                found: args.len(),
            });
        }
        let map: HashMap<&str, &Term> = self
            .params
            .iter()
            .map(|p| p.as_str())
            .zip(args.iter())
            .collect();
        Ok(self.body.substitute(&map))
    }

    pub fn compile(&self, alg: &FiniteAlgebra) -> Result<Compiled> {
        Compiled::new(alg, &self.params, &self.body)
    }

    pub fn eval(&self, alg: &FiniteAlgebra, args: &[Elem]) -> Result<Elem> {
        Ok(self.compile(alg)?.eval(alg, args))
    }
}

/// A term resolved against an algebra: variables become argument slots and
/// symbols become operation indices.
#[derive(Clone, Debug)]
pub struct Compiled {
    node: Node,
    arity: usize,
}

#[derive(Clone, Debug)]
enum Node {
    Arg(usize),
    Op(usize, Vec<Node>),
}

impl Compiled {
    pub fn new(alg: &FiniteAlgebra, params: &[String], body: &Term) -> Result<Self> {
        fn go(alg: &FiniteAlgebra, params: &[String], t: &Term) -> Result<Node> {
            match t {
                Term::Var(v) => {
                    if let Some(k) = params.iter().position(|p| p == v) {
                        return Ok(Node::Arg(k));
                    }
                    match alg.operations.iter().position(|o| &o.symbol == v) {
                        Some(i) if alg.operations[i].arity == 0 => Ok(Node::Op(i, Vec::new())),
                        Some(i) => Err(Error::ArityMismatch {
                            symbol: v.clone(),
                            expected: alg.operations[i].arity,
                            found: 0,
                        }),
                        None => Err(Error::UnboundVariable(v.clone())),
                    }
                }
                Term::App(f, args) => {
                    let i = alg
                        .operations
                        .iter()
                        .position(|o| &o.symbol == f)
                        .ok_or_else(|| Error::UnknownSymbol(f.clone()))?;
                    if alg.operations[i].arity != args.len() {
                        return Err(Error::ArityMismatch {
                            symbol: f.clone(),
                            expected: alg.operations[i].arity,
                            found: args.len(),
                        });
                    }
                    Ok(Node::Op(
                        i,
                        args.iter()
                            .map(|a| go(alg, params, a))
                            .collect::<Result<_>>()?,
                    ))
                }
            }
        }
        Ok(Compiled {
            node: go(alg, params, body)?,
            arity: params.len(),
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn eval(&self, alg: &FiniteAlgebra, args: &[Elem]) -> Elem {
        fn go(alg: &FiniteAlgebra, n: &Node, args: &[Elem]) -> Elem {
            match n {
                Node::Arg(k) => args[*k],
                Node::Op(i, children) => {
                    let mut vals: smallvec::SmallVec<[Elem; 4]> = smallvec::SmallVec::new();
                    for c in children {
                        vals.push(go(alg, c, args));
                    }
                    alg.apply(*i, &vals)
                }
            }
        }
        go(alg, &self.node, args)
    }

    /// The full operation table, row-major.
    pub fn table(&self, alg: &FiniteAlgebra) -> Result<Vec<Elem>> {
        let n = alg.size;
        let entries = table_entries(n, self.arity)?;
        let mut args = vec![0 as Elem; self.arity];
        let mut out = Vec::with_capacity(entries);
        for _ in 0..entries {
            out.push(self.eval(alg, &args));
            for pos in (0..self.arity).rev() {
                args[pos] += 1;
                if (args[pos] as usize) < n {
                    break;
                }
                args[pos] = 0;
            }
        }
        Ok(out)
    }
}

/// Name, optional parameter list and body of a term file entry.
pub type TermEntry = (String, Option<Vec<String>>, Term);

/// Parses a term file: one `name := term` per line, `#` starts a comment.
/// A name may carry a parameter list, as in `d(x,y,z) := …`.
pub fn parse_term_file(text: &str) -> Result<Vec<TermEntry>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (head, body) = line.split_once(":=").ok_or_else(|| Error::Syntax {
            pos: lineno + 1,
            msg: format!("line {}: expected `name := term`", lineno + 1),
        })?;
        let head = head.trim();
        let (name, params) = match head.split_once('(') {
            Some((name, rest)) => {
                let rest = rest
                    .trim_end()
                    .strip_suffix(')')
                    .ok_or_else(|| Error::Syntax {
                        pos: lineno + 1,
                        msg: format!("line {}: unclosed parameter list", lineno + 1),
                    })?;
                let params: Vec<String> = rest
                    .split(',')
                    .map(|p| p.trim().to_string())
                    .filter(|p| !p.is_empty())
                    .collect();
                (name.trim().to_string(), Some(params))
            }
            None => (head.to_string(), None),
        };
        let term = Term::parse(body.trim()).map_err(|e| match e {
            Error::Syntax { pos, msg } => Error::Syntax {
                pos,
                msg: format!("line {}: {msg}", lineno + 1),
            },
            other => other,
        })?;
        out.push((name, params, term));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use proptest::prelude::*;

    fn env(pairs: &[(&str, Elem)]) -> HashMap<String, Elem> {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn parses_and_prints() {
        assert_eq!(Term::parse("x").unwrap(), Term::var("x"));
        let t = Term::parse("+(x, -(y))").unwrap();
        assert_eq!(
            t,
            Term::app(
                "+",
                vec![Term::var("x"), Term::app("-", vec![Term::var("y")])]
            )
        );
        assert_eq!(t.to_string(), "+(x, -(y))");
        assert_eq!(Term::parse(" e() ").unwrap(), Term::app("e", vec![]));
        match Term::parse("d(x,, y)") {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("expected syntax error, got {other:?}"),
        }
        assert!(Term::parse("f(x").is_err());
        assert!(Term::parse("f(x) y").is_err());
        assert!(Term::parse("").is_err());
    }

    #[test]
    fn evaluates_on_z4() {
        let z4 = corpus::z4();
        let t = Term::parse("+(x,y)").unwrap();
        assert_eq!(t.eval(&z4, &env(&[("x", 1), ("y", 3)])).unwrap(), 0);
        assert_eq!(Term::var("x").eval(&z4, &env(&[("x", 2)])).unwrap(), 2);
        assert!(matches!(
            Term::parse("h(x)").unwrap().eval(&z4, &env(&[("x", 0)])),
            Err(Error::UnknownSymbol(_))
        ));
        assert!(matches!(
            Term::parse("+(x,w)").unwrap().eval(&z4, &env(&[("x", 0)])),
            Err(Error::UnboundVariable(_))
        ));
        // a bare constant symbol evaluates as the nullary operation
        assert_eq!(
            Term::parse("+(x, 0)")
                .unwrap()
                .eval(&z4, &env(&[("x", 3)]))
                .unwrap(),
            3
        );
    }

    #[test]
    fn compiled_agrees_with_tree_evaluation() {
        let s3 = corpus::s3();
        let f = TermFn::parse(&["x", "y", "z"], "*(*(y, inv(x)), z)").unwrap();
        let c = f.compile(&s3).unwrap();
        for x in 0..6 {
            for y in 0..6 {
                for z in 0..6 {
                    let e = env(&[("x", x), ("y", y), ("z", z)]);
                    assert_eq!(c.eval(&s3, &[x, y, z]), f.body.eval(&s3, &e).unwrap());
                }
            }
        }
        assert_eq!(c.table(&s3).unwrap().len(), 216);
    }

    #[test]
    fn substitution() {
        let d = TermFn::parse(&["x", "y", "z"], "d(x, y, z)").unwrap();
        let t = d
            .apply(&[
                Term::var("a"),
                Term::parse("d(b, c, a)").unwrap(),
                Term::var("c"),
            ])
            .unwrap();
        assert_eq!(t.to_string(), "d(a, d(b, c, a), c)");
        assert!(d.apply(&[Term::var("a")]).is_err());
    }

    #[test]
    fn term_files() {
        let text =
            "# Day terms\nm0 := x\nm1(x,y,z,u) := +(u, +(-(z), y))  # interpolant\n\nd := y\n";
        let items = parse_term_file(text).unwrap();
        assert_eq!(items.len(), 3);
        assert_eq!(items[1].0, "m1");
        assert_eq!(items[1].1.as_ref().unwrap(), &vec!["x", "y", "z", "u"]);
        assert!(items[0].1.is_none());
        assert!(parse_term_file("m0 = x").is_err());
    }

    fn arb_term() -> impl Strategy<Value = Term> {
        let leaf = prop_oneof![
            Just(Term::var("x")),
            Just(Term::var("y")),
            Just(Term::app("0", vec![]))
        ];
        leaf.prop_recursive(4, 24, 3, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::app("+", vec![a, b])),
                inner.clone().prop_map(|a| Term::app("-", vec![a])),
                proptest::collection::vec(inner, 3).prop_map(|v| Term::app("d", v)),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(t in arb_term()) {
            prop_assert_eq!(Term::parse(&t.to_string()).unwrap(), t);
        }
    }
}
