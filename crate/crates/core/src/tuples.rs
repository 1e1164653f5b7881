//! Sets of tuples over a finite universe and subpower generation.

use std::fmt;

use indexmap::IndexSet;
use rustc_hash::FxBuildHasher;
use smallvec::SmallVec;

use crate::algebra::{table_entries, Elem, FiniteAlgebra, OperationTable};
use crate::error::{Error, Result};

/// A tuple of elements. Widths up to 8 (the vertices of a 3-cube) stay inline.
pub type Tuple = SmallVec<[Elem; 8]>;

/// Default cap on the size of a generated subpower.
pub const DEFAULT_CLOSURE_CAP: usize = 5_000_000;

/// Closure cap taken from `UALG_MAX_CLOSURE` when set, else the default.
pub fn closure_cap_from_env() -> usize {
    std::env::var("UALG_MAX_CLOSURE")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_CLOSURE_CAP)
}

/// A set of fixed-width tuples that remembers insertion order.
#[derive(Clone)]
pub struct TupleSet {
    width: usize,
    items: IndexSet<Tuple, FxBuildHasher>,
}

impl TupleSet {
    pub fn new(width: usize) -> Self {
        TupleSet {
            width,
            items: IndexSet::default(),
        }
    }

    pub fn from_tuples<I, T>(width: usize, tuples: I) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: AsRef<[Elem]>,
    {
        let mut set = TupleSet::new(width);
        for t in tuples {
            set.insert(t.as_ref())?;
        }
        Ok(set)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Inserts a tuple, returning whether it was new.
    pub fn insert(&mut self, t: &[Elem]) -> Result<bool> {
        if t.len() != self.width {
            return Err(Error::WidthMismatch {
                expected: self.width,
                found: t.len(),
            });
        }
        Ok(self.items.insert(Tuple::from_slice(t)))
    }

    pub(crate) fn insert_owned(&mut self, t: Tuple) -> (usize, bool) {
        debug_assert_eq!(t.len(), self.width);
        self.items.insert_full(t)
    }

    pub fn contains(&self, t: &[Elem]) -> bool {
        self.items.contains(t)
    }

    pub fn index_of(&self, t: &[Elem]) -> Option<usize> {
        self.items.get_index_of(t)
    }

    pub fn get(&self, i: usize) -> Option<&[Elem]> {
        self.items.get_index(i).map(|t| t.as_slice())
    }

    pub fn iter(&self) -> impl Iterator<Item = &[Elem]> + '_ {
        self.items.iter().map(|t| t.as_slice())
    }

    /// The tuples in lexicographic order.
    pub fn sorted(&self) -> Vec<Tuple> {
        let mut v: Vec<Tuple> = self.items.iter().cloned().collect();
        v.sort_unstable();
        v
    }

    pub fn is_subset(&self, other: &TupleSet) -> bool {
        self.width == other.width && self.iter().all(|t| other.contains(t))
    }
}

impl PartialEq for TupleSet {
    fn eq(&self, other: &Self) -> bool {
        self.width == other.width && self.len() == other.len() && self.is_subset(other)
    }
}

impl Eq for TupleSet {}

impl fmt::Debug for TupleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TupleSet")
            .field("width", &self.width)
            .field("len", &self.len())
            .finish()
    }
}

fn apply_coordinatewise(alg: &FiniteAlgebra, op: usize, args: &[&[Elem]], width: usize) -> Tuple {
    let table = &alg.operations[op];
    let n = alg.size;
    (0..width)
        .map(|lane| {
            let idx = args
                .iter()
                .fold(0usize, |acc, t| acc * n + t[lane] as usize);
            table.table[idx]
        })
        .collect()
}

/// The least subset of `A^m` containing `generators` (and all constant
/// tuples) that is closed under the operations of `alg` applied
/// coordinatewise.
///
/// Elements are produced in a deterministic order. Associative binary
/// operations are closed by right-multiplying with "atoms" (elements that did
/// not arise as a product of that operation), which is exact because every
/// element is then a product of atoms.
pub fn generate_subpower(
    alg: &FiniteAlgebra,
    m: usize,
    generators: &TupleSet,
    cap: Option<usize>,
) -> Result<TupleSet> {
    if generators.width() != m {
        return Err(Error::WidthMismatch {
            expected: m,
            found: generators.width(),
        });
    }
    let cap = cap.unwrap_or(DEFAULT_CLOSURE_CAP);
    let full = (alg.size as u128)
        .checked_pow(m as u32)
        .unwrap_or(u128::MAX);
    if m > 0 && full <= DENSE_LIMIT as u128 {
        return DenseCodec::new(alg, m).generate(alg, generators, cap);
    }

    let mut set = TupleSet::new(m);
    for g in generators.iter() {
        set.insert_owned(Tuple::from_slice(g));
    }
    for c in alg.constants() {
        set.insert_owned(std::iter::repeat_n(c, m).collect());
    }

    let assoc: Vec<usize> = (0..alg.operations.len())
        .filter(|&i| alg.is_associative(i))
        .collect();
    let general: Vec<usize> = (0..alg.operations.len())
        .filter(|&i| alg.operations[i].arity > 0 && !assoc.contains(&i))
        .collect();
    let commutative: Vec<bool> = assoc.iter().map(|&i| alg.is_commutative(i)).collect();

    // origin[e] = Some(k) when element e first appeared as a product of assoc[k].
    let mut origin: Vec<Option<usize>> = vec![None; set.len()];
    let mut atoms: Vec<Vec<usize>> = vec![Vec::new(); assoc.len()];
    let mut assoc_ptr = 0;
    let mut general_ptr = 0;

    macro_rules! add {
        ($t:expr, $origin:expr) => {{
            let (_, new) = set.insert_owned($t);
            if new {
                origin.push($origin);
                if set.len() > cap {
                    return Err(Error::ClosureCap { cap });
                }
                if set.len() as u128 == full {
                    return Ok(set);
                }
            }
        }};
    }

    if set.len() as u128 == full {
        return Ok(set);
    }
    loop {
        if assoc_ptr < set.len() {
            let e = assoc_ptr;
            assoc_ptr += 1;
            for (k, &op) in assoc.iter().enumerate() {
                if origin[e] != Some(k) {
                    atoms[k].push(e);
                    for s in 0..=e {
                        let t = {
                            let (x, y) = (set.get(s).unwrap(), set.get(e).unwrap());
                            apply_coordinatewise(alg, op, &[x, y], m)
                        };
                        add!(t, Some(k));
                    }
                }
                // for a commutative operation an atom has met every atom already
                let mut i = if commutative[k] && origin[e] != Some(k) {
                    atoms[k].len()
                } else {
                    0
                };
                while i < atoms[k].len() {
                    let a = atoms[k][i];
                    i += 1;
                    if a == e {
                        continue;
                    }
                    let t = {
                        let (x, y) = (set.get(e).unwrap(), set.get(a).unwrap());
                        apply_coordinatewise(alg, op, &[x, y], m)
                    };
                    add!(t, Some(k));
                }
            }
        } else if general_ptr < set.len() {
            let e = general_ptr;
            general_ptr += 1;
            for &op in &general {
                let arity = alg.operations[op].arity;
                // every argument tuple over 0..=e that uses e at least once
                for first in 0..arity {
                    if e == 0 && first > 0 {
                        break;
                    }
                    let mut idx = vec![0usize; arity];
                    idx[first] = e;
                    loop {
                        let t = {
                            let args: Vec<&[Elem]> =
                                idx.iter().map(|&i| set.get(i).unwrap()).collect();
                            apply_coordinatewise(alg, op, &args, m)
                        };
                        add!(t, None);
                        // advance odometer: positions < first range over 0..e, > first over 0..=e
                        let mut pos = arity;
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
        } else {
            break;
        }
    }
    Ok(set)
}

/// Largest `|A|^m` handled by the dense closure.
const DENSE_LIMIT: usize = 1 << 26;

/// Tuples encoded as integers (coordinate 0 least significant), with
/// operations applied chunk by chunk through precomputed tables.
struct DenseCodec {
    n: usize,
    m: usize,
    /// Coordinates per chunk and the chunk radix `n^chunk`.
    chunk: usize,
    radix: u32,
    chunks: usize,
    /// Per operation: tables for full chunks and for the final chunk.
    tables: Vec<[Vec<u32>; 2]>,
}

impl DenseCodec {
    fn new(alg: &FiniteAlgebra, m: usize) -> Self {
        let n = alg.size;
        let mut chunk = 1;
        while chunk < m && n.pow(chunk as u32 + 1) <= 256 {
            chunk += 1;
        }
        let chunks = m.div_ceil(chunk);
        let last = m - chunk * (chunks - 1);
        let radix = n.pow(chunk as u32) as u32;
        let tables = alg
            .operations
            .iter()
            .map(|op| {
                let build = |width: usize| -> Vec<u32> {
                    if op.arity == 0 || op.arity > 2 {
                        return Vec::new();
                    }
                    let span = n.pow(width as u32);
                    let digits: Vec<Vec<usize>> = (0..span)
                        .map(|mut v| {
                            (0..width)
                                .map(|_| {
                                    let d = v % n;
                                    v /= n;
                                    d
                                })
                                .collect()
                        })
                        .collect();
                    let encode = |f: &dyn Fn(usize) -> Elem| -> u32 {
                        (0..width)
                            .rev()
                            .fold(0u32, |acc, i| acc * n as u32 + f(i) as u32)
                    };
                    if op.arity == 1 {
                        digits
                            .iter()
                            .map(|da| encode(&|i| op.table[da[i]]))
                            .collect()
                    } else {
                        let mut t = Vec::with_capacity(span * span);
                        for da in &digits {
                            for db in &digits {
                                t.push(encode(&|i| op.table[da[i] * n + db[i]]));
                            }
                        }
                        t
                    }
                };
                [build(chunk), build(last)]
            })
            .collect();
        DenseCodec {
            n,
            m,
            chunk,
            radix,
            chunks,
            tables,
        }
    }

    fn encode(&self, t: &[Elem]) -> u32 {
        t.iter()
            .rev()
            .fold(0u32, |acc, &d| acc * self.n as u32 + d as u32)
    }

    fn decode(&self, mut c: u32) -> Tuple {
        (0..self.m)
            .map(|_| {
                let d = c % self.n as u32;
                c /= self.n as u32;
                d as Elem
            })
            .collect()
    }

    fn apply(&self, alg: &FiniteAlgebra, op: usize, args: &[u32]) -> u32 {
        let arity = alg.operations[op].arity;
        if arity > 2 {
            let tuples: Vec<Tuple> = args.iter().map(|&a| self.decode(a)).collect();
            let refs: Vec<&[Elem]> = tuples.iter().map(|t| t.as_slice()).collect();
            return self.encode(&apply_coordinatewise(alg, op, &refs, self.m));
        }
        let mut out = 0u32;
        let mut scale = 1u32;
        let (mut a, mut b) = (args[0], if arity == 2 { args[1] } else { 0 });
        for j in 0..self.chunks {
            let last = j + 1 == self.chunks;
            let table = &self.tables[op][last as usize];
            let span = if last {
                (self.n as u32).pow((self.m - self.chunk * j) as u32)
            } else {
                self.radix
            };
            let (ca, cb) = (a % self.radix, b % self.radix);
            a /= self.radix;
            b /= self.radix;
            let r = if arity == 1 {
                table[ca as usize]
            } else {
                table[(ca * span + cb) as usize]
            };
            out += r * scale;
            scale = scale.wrapping_mul(self.radix);
        }
        out
    }

    /// The algorithm of [`generate_subpower`] over encoded tuples.
    fn generate(&self, alg: &FiniteAlgebra, generators: &TupleSet, cap: usize) -> Result<TupleSet> {
        let full = self.n.pow(self.m as u32);
        let mut seen = vec![0u64; full.div_ceil(64)];
        let mut elems: Vec<u32> = Vec::new();
        let mut origin: Vec<Option<usize>> = Vec::new();
        let finish = |elems: &[u32]| -> TupleSet {
            let mut set = TupleSet::new(self.m);
            for &c in elems {
                set.insert_owned(self.decode(c));
            }
            set
        };
        macro_rules! add {
            ($c:expr, $origin:expr) => {{
                let c = $c as usize;
                if seen[c / 64] >> (c % 64) & 1 == 0 {
                    seen[c / 64] |= 1 << (c % 64);
                    elems.push(c as u32);
                    origin.push($origin);
                    if elems.len() > cap {
                        return Err(Error::ClosureCap { cap });
                    }
                    if elems.len() == full {
                        return Ok(finish(&elems));
                    }
                }
            }};
        }
        for g in generators.iter() {
            add!(self.encode(g), None);
        }
        for c in alg.constants() {
            add!(self.encode(&vec![c; self.m]), None);
        }
        let assoc: Vec<usize> = (0..alg.operations.len())
            .filter(|&i| alg.is_associative(i))
            .collect();
        let general: Vec<usize> = (0..alg.operations.len())
            .filter(|&i| alg.operations[i].arity > 0 && !assoc.contains(&i))
            .collect();
        let commutative: Vec<bool> = assoc.iter().map(|&i| alg.is_commutative(i)).collect();
        let mut atoms: Vec<Vec<usize>> = vec![Vec::new(); assoc.len()];
        let (mut assoc_ptr, mut general_ptr) = (0, 0);
        loop {
            if assoc_ptr < elems.len() {
                let e = assoc_ptr;
                assoc_ptr += 1;
                for (k, &op) in assoc.iter().enumerate() {
                    if origin[e] != Some(k) {
                        atoms[k].push(e);
                        for s in 0..=e {
                            add!(self.apply(alg, op, &[elems[s], elems[e]]), Some(k));
                        }
                    }
                    let mut i = if commutative[k] && origin[e] != Some(k) {
                        atoms[k].len()
                    } else {
                        0
                    };
                    while i < atoms[k].len() {
                        let a = atoms[k][i];
                        i += 1;
                        if a != e {
                            add!(self.apply(alg, op, &[elems[e], elems[a]]), Some(k));
                        }
                    }
                }
            } else if general_ptr < elems.len() {
                let e = general_ptr;
                general_ptr += 1;
                for &op in &general {
                    let arity = alg.operations[op].arity;
                    for first in 0..arity {
                        if e == 0 && first > 0 {
                            break;
                        }
                        let mut idx = vec![0usize; arity];
                        idx[first] = e;
                        loop {
                            let args: SmallVec<[u32; 4]> = idx.iter().map(|&i| elems[i]).collect();
                            add!(self.apply(alg, op, &args), None);
                            let mut pos = arity;
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
            } else {
                return Ok(finish(&elems));
            }
        }
    }
}

/// A subuniverse of a finite power, with its index map.
#[derive(Clone, Debug)]
pub struct SubAlgebraView<'a> {
    pub parent: &'a FiniteAlgebra,
    pub universe: TupleSet,
}

impl<'a> SubAlgebraView<'a> {
    pub fn new(parent: &'a FiniteAlgebra, universe: TupleSet) -> Self {
        SubAlgebraView { parent, universe }
    }

    pub fn power(&self) -> usize {
        self.universe.width()
    }

    /// Transports the coordinatewise operations to `{0, …, |universe|-1}`.
    pub fn as_algebra(&self) -> Result<FiniteAlgebra> {
        let size = self.universe.len();
        let m = self.power();
        if size == 0 {
            return Err(Error::BadSize {
                size,
                max: crate::algebra::MAX_UNIVERSE,
            });
        }
        let mut ops = Vec::with_capacity(self.parent.operations.len());
        for (op_idx, op) in self.parent.operations.iter().enumerate() {
            table_entries(size, op.arity)?;
            let mut failure = None;
            let table = OperationTable::from_fn(op.symbol.clone(), op.arity, size, |args| {
                if failure.is_some() {
                    return 0;
                }
                let tuples: Vec<&[Elem]> = args
                    .iter()
                    .map(|&a| self.universe.get(a as usize).unwrap())
                    .collect();
                let result = apply_coordinatewise(self.parent, op_idx, &tuples, m);
                match self.universe.index_of(&result) {
                    Some(i) => i as Elem,
                    None => {
                        failure = Some(format!(
                            "{}({}) = {:?} is missing",
                            op.symbol,
                            tuples
                                .iter()
                                .map(|t| format!("{:?}", t))
                                .collect::<Vec<_>>()
                                .join(", "),
                            result.as_slice()
                        ));
                        0
                    }
                }
            })?;
            if let Some(msg) = failure {
                return Err(Error::NotClosed(msg));
            }
            ops.push(table);
        }
        FiniteAlgebra::new(
            format!("{}[sub^{}:{}]", self.parent.name, m, size),
            size,
            ops,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn diagonal_of_z4() {
        let z4 = corpus::z4();
        let gens = TupleSet::from_tuples(2, [[1, 1]]).unwrap();
        let s = generate_subpower(&z4, 2, &gens, None).unwrap();
        let expected = TupleSet::from_tuples(2, [[0, 0], [1, 1], [2, 2], [3, 3]]).unwrap();
        assert_eq!(s, expected);
        // (0,0) is the neutral element and generates only itself
        let gens = TupleSet::from_tuples(2, [[0, 0]]).unwrap();
        assert_eq!(generate_subpower(&z4, 2, &gens, None).unwrap(), gens);
    }

    #[test]
    fn closed_generators_are_fixed() {
        let z4 = corpus::z4();
        let gens = TupleSet::from_tuples(1, [[0], [2]]).unwrap();
        assert_eq!(generate_subpower(&z4, 1, &gens, None).unwrap(), gens);
        let set4 = corpus::set4();
        let gens = TupleSet::from_tuples(3, [[0, 1, 2], [3, 3, 1]]).unwrap();
        assert_eq!(generate_subpower(&set4, 3, &gens, None).unwrap(), gens);
    }

    #[test]
    fn width_and_cap_errors() {
        let z4 = corpus::z4();
        let gens = TupleSet::from_tuples(2, [[0, 1]]).unwrap();
        assert!(matches!(
            generate_subpower(&z4, 3, &gens, None),
            Err(Error::WidthMismatch { .. })
        ));
        let err = generate_subpower(&z4, 2, &gens, Some(2)).unwrap_err();
        assert!(err.is_resource());
    }

    #[test]
    fn as_algebra_of_full_square_and_diagonal() {
        let z4 = corpus::z4();
        let all: Vec<[Elem; 2]> = (0..4).flat_map(|a| (0..4).map(move |b| [a, b])).collect();
        let full = SubAlgebraView::new(&z4, TupleSet::from_tuples(2, &all).unwrap());
        let sq = full.as_algebra().unwrap();
        assert_eq!(sq.size, 16);
        // (1,2) + (3,3) = (0,1)
        let i = full.universe.index_of(&[1, 2]).unwrap() as Elem;
        let j = full.universe.index_of(&[3, 3]).unwrap() as Elem;
        let k = sq.eval("+", &[i, j]).unwrap();
        assert_eq!(full.universe.get(k as usize).unwrap(), &[0, 1]);

        let diag = SubAlgebraView::new(
            &z4,
            TupleSet::from_tuples(2, [[0, 0], [1, 1], [2, 2], [3, 3]]).unwrap(),
        );
        let d = diag.as_algebra().unwrap();
        assert_eq!(d.size, 4);
        assert_eq!(d.eval("+", &[1, 3]).unwrap(), 0);
    }

    #[test]
    fn as_algebra_rejects_unclosed() {
        let z4 = corpus::z4();
        let view = SubAlgebraView::new(&z4, TupleSet::from_tuples(2, [[0, 0], [0, 1]]).unwrap());
        match view.as_algebra() {
            Err(Error::NotClosed(msg)) => assert!(msg.contains("[0, 2]"), "{msg}"),
            other => panic!("expected NotClosed, got {other:?}"),
        }
    }
}
