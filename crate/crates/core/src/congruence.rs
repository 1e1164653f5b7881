//! Congruences: membership, generation, the congruence lattice, modularity.

use std::cmp::Reverse;
use std::collections::{BTreeSet, VecDeque};

use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::algebra::{Elem, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::partition::Partition;

/// A pair of argument tuples that a partition fails to respect.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompatibilityWitness {
    pub symbol: String,
    pub left: Vec<Elem>,
    pub right: Vec<Elem>,
}

/// Visits every unary polynomial translation `f(c_1, …, x, …, c_r)` of the
/// basic operations applied to `a` and `b`. Stops when `visit` returns false.
fn for_each_translation(
    alg: &FiniteAlgebra,
    a: usize,
    b: usize,
    mut visit: impl FnMut(usize, &[Elem], &[Elem]) -> bool,
) {
    let n = alg.size;
    for (op_idx, op) in alg.operations.iter().enumerate() {
        let r = op.arity;
        if r == 0 {
            continue;
        }
        let mut left = vec![0 as Elem; r];
        let mut right = vec![0 as Elem; r];
        for pos in 0..r {
            let fills = n.pow((r - 1) as u32);
            let mut fill = vec![0 as Elem; r - 1];
            for _ in 0..fills {
                let mut k = 0;
                for i in 0..r {
                    if i == pos {
                        left[i] = a as Elem;
                        right[i] = b as Elem;
                    } else {
                        left[i] = fill[k];
                        right[i] = fill[k];
                        k += 1;
                    }
                }
                if !visit(op_idx, &left, &right) {
                    return;
                }
                for slot in (0..r - 1).rev() {
                    fill[slot] += 1;
                    if (fill[slot] as usize) < n {
                        break;
                    }
                    fill[slot] = 0;
                }
            }
        }
    }
}

/// Checks whether `p` respects every operation; on failure returns a witness.
pub fn is_congruence(alg: &FiniteAlgebra, p: &Partition) -> Result<Option<CompatibilityWitness>> {
    if p.size() != alg.size {
        return Err(Error::SizeMismatch(p.size(), alg.size));
    }
    let mut witness = None;
    for x in 0..alg.size {
        let r = p.rep(x);
        if r == x {
            continue;
        }
        for_each_translation(alg, r, x, |op, left, right| {
            let u = alg.apply(op, left) as usize;
            let v = alg.apply(op, right) as usize;
            if p.related(u, v) {
                true
            } else {
                witness = Some(CompatibilityWitness {
                    symbol: alg.operations[op].symbol.clone(),
                    left: left.to_vec(),
                    right: right.to_vec(),
                });
                false
            }
        });
        if witness.is_some() {
            break;
        }
    }
    Ok(witness)
}

/// The least congruence containing `pairs`.
///
/// Translations are applied only to pairs that caused a merge, which is a
/// spanning set of the final relation.
pub fn cg<I>(alg: &FiniteAlgebra, pairs: I) -> Result<Partition>
where
    I: IntoIterator<Item = (usize, usize)>,
{
    cg_from(alg, &Partition::zero(alg.size), pairs)
}

/// The least congruence containing `base` and `pairs`. `base` must already be
/// a congruence.
pub fn cg_from<I>(alg: &FiniteAlgebra, base: &Partition, pairs: I) -> Result<Partition>
where
    I: IntoIterator<Item = (usize, usize)>,
{
    let n = alg.size;
    if base.size() != n {
        return Err(Error::SizeMismatch(base.size(), n));
    }
    let mut uf = base.to_union_find();
    let mut queue = VecDeque::new();
    for (a, b) in pairs {
        for x in [a, b] {
            if x >= n {
                return Err(Error::ElementOutOfRange {
                    element: x,
                    size: n,
                });
            }
        }
        if uf.union(a, b) {
            queue.push_back((a, b));
        }
    }
    while let Some((a, b)) = queue.pop_front() {
        let uf = &mut uf;
        let queue = &mut queue;
        for_each_translation(alg, a, b, |op, left, right| {
            let u = alg.apply(op, left) as usize;
            let v = alg.apply(op, right) as usize;
            if uf.union(u, v) {
                queue.push_back((u, v));
            }
            true
        });
    }
    Ok(uf.into_partition())
}

/// Witness that a lattice is not modular: `x ≤ z` but
/// `x ∨ (y ∧ z) < (x ∨ y) ∧ z`, together with the pentagon it spans.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModularityWitness {
    pub x: usize,
    pub y: usize,
    pub z: usize,
    /// Indices `[bottom, a, c, b, top]` of an N5 sublattice with `a < c`.
    pub pentagon: [usize; 5],
}

/// All congruences of an algebra, sorted with `0_A` first.
#[derive(Clone, Debug)]
pub struct CongruenceLattice {
    members: Vec<Partition>,
    index: FxHashMap<Partition, usize>,
    join: Vec<usize>,
    meet: Vec<usize>,
}

/// Cap on the number of congruences enumerated.
pub const DEFAULT_LATTICE_CAP: usize = 20_000;

impl CongruenceLattice {
    /// Builds the lattice from principal congruences by join saturation.
    pub fn compute(alg: &FiniteAlgebra) -> Result<Self> {
        Self::compute_capped(alg, DEFAULT_LATTICE_CAP)
    }

    pub fn compute_capped(alg: &FiniteAlgebra, cap: usize) -> Result<Self> {
        let n = alg.size;
        let mut set: BTreeSet<Partition> = BTreeSet::new();
        set.insert(Partition::zero(n));
        let mut principals = BTreeSet::new();
        for a in 0..n {
            for b in a + 1..n {
                principals.insert(cg(alg, [(a, b)])?);
            }
        }
        let principals: Vec<Partition> = principals.into_iter().collect();
        let mut frontier: Vec<Partition> = Vec::new();
        for p in &principals {
            if set.insert(p.clone()) {
                frontier.push(p.clone());
            }
        }
        // every congruence is a join of principal congruences
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for f in &frontier {
                for p in &principals {
                    let j = f.join(p)?;
                    if set.insert(j.clone()) {
                        if set.len() > cap {
                            return Err(Error::BoundExhausted(format!(
                                "congruence lattice exceeds {cap} members"
                            )));
                        }
                        next.push(j);
                    }
                }
            }
            frontier = next;
        }
        let mut members: Vec<Partition> = set.into_iter().collect();
        members.sort_by(|a, b| (Reverse(a.num_blocks()), a).cmp(&(Reverse(b.num_blocks()), b)));
        Self::from_members(members)
    }

    /// Builds a lattice from a list of partitions that is closed under join
    /// and meet.
    pub fn from_members(members: Vec<Partition>) -> Result<Self> {
        let index: FxHashMap<Partition, usize> = members
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        let len = members.len();
        let mut join = vec![0; len * len];
        let mut meet = vec![0; len * len];
        for i in 0..len {
            for j in 0..len {
                let jn = members[i].join(&members[j])?;
                let mt = members[i].meet(&members[j])?;
                join[i * len + j] = *index.get(&jn).ok_or_else(|| {
                    Error::Precondition(format!("join {jn} missing from lattice"))
                })?;
                meet[i * len + j] = *index.get(&mt).ok_or_else(|| {
                    Error::Precondition(format!("meet {mt} missing from lattice"))
                })?;
            }
        }
        Ok(CongruenceLattice {
            members,
            index,
            join,
            meet,
        })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Partition] {
        &self.members
    }

    pub fn get(&self, i: usize) -> Option<&Partition> {
        self.members.get(i)
    }

    pub fn index_of(&self, p: &Partition) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn zero(&self) -> &Partition {
        &self.members[0]
    }

    pub fn one(&self) -> &Partition {
        self.members.last().unwrap()
    }

    pub fn join_idx(&self, a: usize, b: usize) -> usize {
        self.join[a * self.len() + b]
    }

    pub fn meet_idx(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.len() + b]
    }

    pub fn le_idx(&self, a: usize, b: usize) -> bool {
        self.join_idx(a, b) == b
    }

    /// Short name: `0`, `1`, or `con[i]`.
    pub fn name_of(&self, p: &Partition) -> String {
        if p.is_zero() {
            "0".to_string()
        } else if p.is_one() {
            "1".to_string()
        } else {
            match self.index_of(p) {
                Some(i) => format!("con[{i}]"),
                None => format!("{{{p}}}"),
            }
        }
    }

    /// Dedekind's law `x ≤ z ⇒ x ∨ (y ∧ z) = (x ∨ y) ∧ z` for all triples.
    pub fn is_modular(&self) -> Option<ModularityWitness> {
        let len = self.len();
        for x in 0..len {
            for z in 0..len {
                if !self.le_idx(x, z) {
                    continue;
                }
                for y in 0..len {
                    let a = self.join_idx(x, self.meet_idx(y, z));
                    let c = self.meet_idx(self.join_idx(x, y), z);
                    if a != c {
                        let bottom = self.meet_idx(y, z);
                        let top = self.join_idx(x, y);
                        return Some(ModularityWitness {
                            x,
                            y,
                            z,
                            pentagon: [bottom, a, c, y, top],
                        });
                    }
                }
            }
        }
        None
    }

    /// Resolves a congruence reference: `zero`/`0`, `one`/`1`, `con[i]`,
    /// `gen: a-b, c-d`, or block syntax `0 2 | 1 3`.
    pub fn resolve(&self, alg: &FiniteAlgebra, text: &str) -> Result<Partition> {
        let t = text.trim();
        let n = alg.size;
        match t {
            "zero" | "0" => return Ok(Partition::zero(n)),
            "one" | "1" => return Ok(Partition::one(n)),
            _ => {}
        }
        if let Some(inner) = t.strip_prefix("con[").and_then(|s| s.strip_suffix(']')) {
            let i: usize = inner.trim().parse().map_err(|_| Error::Syntax {
                pos: 4,
                msg: format!("bad congruence index {inner:?}"),
            })?;
            return self.get(i).cloned().ok_or_else(|| {
                Error::Precondition(format!(
                    "con[{i}] out of range (lattice has {})",
                    self.len()
                ))
            });
        }
        if let Some(rest) = t.strip_prefix("gen:") {
            let mut pairs = Vec::new();
            for tok in rest.split(|c: char| c == ',' || c.is_whitespace()) {
                if tok.is_empty() {
                    continue;
                }
                let (a, b) = tok.split_once('-').ok_or_else(|| Error::Syntax {
                    pos: 0,
                    msg: format!("expected a pair like 0-2, found {tok:?}"),
                })?;
                let parse = |s: &str| {
                    s.trim().parse::<usize>().map_err(|_| Error::Syntax {
                        pos: 0,
                        msg: format!("bad element {s:?}"),
                    })
                };
                pairs.push((parse(a)?, parse(b)?));
            }
            return cg(alg, pairs);
        }
        let p = Partition::parse_blocks(n, t)?;
        if let Some(w) = is_congruence(alg, &p)? {
            return Err(Error::Precondition(format!(
                "{p} is not a congruence: {}{:?} vs {}{:?}",
                w.symbol, w.left, w.symbol, w.right
            )));
        }
        Ok(p)
    }
}

/// Convenience: the lattice of an algebra and whether it is modular.
pub fn is_modular(lat: &CongruenceLattice) -> Option<ModularityWitness> {
    lat.is_modular()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn blocks(n: usize, s: &str) -> Partition {
        Partition::parse_blocks(n, s).unwrap()
    }

    #[test]
    fn z4_congruence_membership() {
        let z4 = corpus::z4();
        assert_eq!(is_congruence(&z4, &blocks(4, "0 2 | 1 3")).unwrap(), None);
        let w = is_congruence(&z4, &blocks(4, "0 1")).unwrap().unwrap();
        assert_eq!(w.symbol, "+");
        let p = blocks(4, "0 1");
        // the witness really breaks compatibility
        let u = z4.eval("+", &w.left).unwrap() as usize;
        let v = z4.eval("+", &w.right).unwrap() as usize;
        assert!(!p.related(u, v));
        let differing = w.left.iter().zip(&w.right).filter(|(a, b)| a != b).count();
        assert_eq!(differing, 1);
        assert_eq!(is_congruence(&z4, &Partition::zero(4)).unwrap(), None);
        assert!(is_congruence(&z4, &Partition::zero(3)).is_err());
    }

    #[test]
    fn z4_principal_congruences() {
        let z4 = corpus::z4();
        assert_eq!(cg(&z4, [(0, 2)]).unwrap(), blocks(4, "0 2 | 1 3"));
        assert!(cg(&z4, [(0, 1)]).unwrap().is_one());
        assert!(cg(&z4, []).unwrap().is_zero());
        assert!(cg(&z4, [(0, 4)]).is_err());
    }

    #[test]
    fn small_lattices() {
        let lat = CongruenceLattice::compute(&corpus::z4()).unwrap();
        assert_eq!(
            lat.members(),
            &[
                Partition::zero(4),
                blocks(4, "0 2 | 1 3"),
                Partition::one(4)
            ]
        );
        assert!(lat.is_modular().is_none());

        let s3 = corpus::s3();
        let lat = CongruenceLattice::compute(&s3).unwrap();
        assert_eq!(lat.len(), 3);
        assert_eq!(lat.get(1).unwrap(), &blocks(6, "0 3 4 | 1 2 5"));

        let e1 = corpus::e1();
        let lat = CongruenceLattice::compute(&e1).unwrap();
        assert_eq!(lat.len(), 1);
        assert!(lat.zero().is_one());
        assert!(lat.is_modular().is_none());
    }

    #[test]
    fn set4_is_not_modular() {
        let lat = CongruenceLattice::compute(&corpus::set4()).unwrap();
        assert_eq!(lat.len(), 15);
        let w = lat
            .is_modular()
            .expect("partition lattice of a 4-set contains N5");
        let [bottom, a, c, b, top] = w.pentagon;
        assert!(lat.le_idx(a, c) && a != c);
        assert_eq!(lat.join_idx(a, b), top);
        assert_eq!(lat.join_idx(c, b), top);
        assert_eq!(lat.meet_idx(a, b), bottom);
        assert_eq!(lat.meet_idx(c, b), bottom);
    }

    #[test]
    fn resolve_names() {
        let z4 = corpus::z4();
        let lat = CongruenceLattice::compute(&z4).unwrap();
        let eta = blocks(4, "0 2 | 1 3");
        assert_eq!(lat.resolve(&z4, "con[1]").unwrap(), eta);
        assert_eq!(lat.resolve(&z4, "gen: 0-2").unwrap(), eta);
        assert_eq!(lat.resolve(&z4, "0 2 | 1 3").unwrap(), eta);
        assert!(lat.resolve(&z4, "one").unwrap().is_one());
        assert!(lat.resolve(&z4, "0 1").is_err());
        assert!(lat.resolve(&z4, "con[7]").is_err());
        assert_eq!(lat.name_of(&eta), "con[1]");
    }
}
