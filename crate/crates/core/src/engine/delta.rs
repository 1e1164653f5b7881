//! The binary and ternary Δ relations and the commutator characterizations
//! built on them.

use indexmap::IndexSet;
use rustc_hash::FxBuildHasher;
use serde::Serialize;

use super::Engine;
use crate::algebra::{Elem, FiniteAlgebra};
use crate::congruence::cg;
use crate::cube::matrix_algebra;
use crate::error::{Error, Result};
use crate::partition::{Partition, UnionFind};
use crate::tuples::{SubAlgebraView, TupleSet};

/// Which construction to use for a Δ relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    /// Congruence generation on the carrier algebra.
    Generated,
    /// Transitive closure of matrices read as pairs.
    Closure,
}

impl std::str::FromStr for Route {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "generated" | "cg" => Ok(Route::Generated),
            "closure" | "tc" => Ok(Route::Closure),
            _ => Err(Error::Precondition(format!("unknown route {s:?}"))),
        }
    }
}

/// The pairs of a partition as a width-2 carrier, in a fixed order.
pub(crate) fn pair_carrier(p: &Partition) -> TupleSet {
    let mut set = TupleSet::new(2);
    for (a, b) in p.pairs() {
        set.insert_owned([a as Elem, b as Elem].into_iter().collect());
    }
    set
}

/// `Δ_{θ0,θ1}`: a congruence on `θ0` viewed as a set of horizontal lines.
/// Its members are squares whose bottom line (vertices 0, 1) and top line
/// (vertices 2, 3) are related.
#[derive(Clone, Debug)]
pub struct DeltaBinary {
    pub carrier: TupleSet,
    pub partition: Partition,
}

impl DeltaBinary {
    pub fn contains(&self, sq: &[Elem]) -> bool {
        match (
            self.carrier.index_of(&sq[0..2]),
            self.carrier.index_of(&sq[2..4]),
        ) {
            (Some(a), Some(b)) => self.partition.related(a, b),
            _ => false,
        }
    }

    /// Number of member squares.
    pub fn len(&self) -> usize {
        self.partition.pair_count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Member squares in a deterministic order (blocks in order of least element).
    pub fn square_carrier(&self) -> TupleSet {
        let mut set = TupleSet::new(4);
        for (a, b) in self.partition.pairs() {
            let (p, q) = (self.carrier.get(a).unwrap(), self.carrier.get(b).unwrap());
            set.insert_owned([p[0], p[1], q[0], q[1]].into_iter().collect());
        }
        set
    }

    pub fn squares(&self) -> Vec<[Elem; 4]> {
        let mut v: Vec<[Elem; 4]> = self
            .square_carrier()
            .iter()
            .map(|s| [s[0], s[1], s[2], s[3]])
            .collect();
        v.sort_unstable();
        v
    }

    /// Squares with the two axes swapped, sorted.
    pub fn transposed_squares(&self) -> Vec<[Elem; 4]> {
        let mut v: Vec<[Elem; 4]> = self
            .squares()
            .into_iter()
            .map(|s| [s[0], s[2], s[1], s[3]])
            .collect();
        v.sort_unstable();
        v
    }
}

/// `Δ_{θ0,θ1}` over an arbitrary algebra. `matrices` is `M(θ0, θ1)` when the
/// caller already has it.
pub fn delta_binary_on(
    alg: &FiniteAlgebra,
    theta0: &Partition,
    theta1: &Partition,
    route: Route,
    matrices: Option<&TupleSet>,
    cap: usize,
) -> Result<DeltaBinary> {
    for t in [theta0, theta1] {
        if t.size() != alg.size {
            return Err(Error::SizeMismatch(t.size(), alg.size));
        }
    }
    let carrier = pair_carrier(theta0);
    let idx = |a: usize, b: usize| carrier.index_of(&[a as Elem, b as Elem]).unwrap();
    let partition = match route {
        Route::Generated => {
            let b = SubAlgebraView::new(alg, carrier.clone()).as_algebra()?;
            cg(&b, theta1.pairs().map(|(x, y)| (idx(x, x), idx(y, y))))?
        }
        Route::Closure => {
            let owned;
            let m = match matrices {
                Some(m) => m,
                None => {
                    owned = matrix_algebra(alg, &[theta0.clone(), theta1.clone()], Some(cap))?;
                    &owned
                }
            };
            let mut uf = UnionFind::new(carrier.len());
            for sq in m.iter() {
                uf.union(
                    idx(sq[0] as usize, sq[1] as usize),
                    idx(sq[2] as usize, sq[3] as usize),
                );
            }
            uf.into_partition()
        }
    };
    Ok(DeltaBinary { carrier, partition })
}

/// `Δ_{θ_i,θ_j,θ_l}` for `order = (i, j, l)`: a congruence on the squares of
/// `Δ_{θ_i,θ_j}` (square axis 0 on cube axis `i`, square axis 1 on cube axis
/// `j`), pairing squares across axis `l`.
#[derive(Clone, Debug)]
pub struct DeltaTernary {
    pub order: [usize; 3],
    pub squares: TupleSet,
    pub partition: Partition,
}

impl DeltaTernary {
    fn vertex(&self, h: usize, bit: usize) -> usize {
        let [i, j, l] = self.order;
        (h & 1) << i | (h >> 1 & 1) << j | bit << l
    }

    /// The face of `cube` at `bit` across axis `l`, in `(i, j)` orientation.
    pub fn face(&self, cube: &[Elem], bit: usize) -> [Elem; 4] {
        std::array::from_fn(|h| cube[self.vertex(h, bit)])
    }

    pub fn assemble(&self, s: &[Elem], t: &[Elem]) -> [Elem; 8] {
        let mut cube = [0; 8];
        for h in 0..4 {
            cube[self.vertex(h, 0)] = s[h];
            cube[self.vertex(h, 1)] = t[h];
        }
        cube
    }

    pub fn contains(&self, cube: &[Elem]) -> bool {
        match (
            self.squares.index_of(&self.face(cube, 0)),
            self.squares.index_of(&self.face(cube, 1)),
        ) {
            (Some(a), Some(b)) => self.partition.related(a, b),
            _ => false,
        }
    }

    pub fn len(&self) -> usize {
        self.partition.pair_count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Member cubes under the global vertex encoding.
    pub fn cubes(&self) -> impl Iterator<Item = [Elem; 8]> + '_ {
        self.partition.pairs().map(move |(a, b)| {
            self.assemble(self.squares.get(a).unwrap(), self.squares.get(b).unwrap())
        })
    }

    pub fn sorted_cubes(&self) -> Vec<[Elem; 8]> {
        let mut v: Vec<[Elem; 8]> = self.cubes().collect();
        v.sort_unstable();
        v
    }
}

/// Membership of element pairs, as an `n × n` table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct PairTable {
    n: usize,
    bits: Vec<bool>,
}

impl PairTable {
    fn new(n: usize) -> Self {
        PairTable {
            n,
            bits: vec![false; n * n],
        }
    }

    fn set(&mut self, x: Elem, y: Elem) {
        self.bits[x as usize * self.n + y as usize] = true;
    }

    fn get(&self, x: usize, y: usize) -> bool {
        self.bits[x * self.n + y]
    }

    fn from_partition(p: &Partition) -> Self {
        let n = p.size();
        PairTable {
            n,
            bits: (0..n * n).map(|k| p.related(k / n, k % n)).collect(),
        }
    }
}

/// First pair on which any two of the named tables disagree.
fn first_disagreement(tables: &[(&str, &PairTable)]) -> Option<ConditionDisagreement> {
    let n = tables[0].1.n;
    let names = |want: bool, x: usize, y: usize| -> Vec<String> {
        tables
            .iter()
            .filter(|(_, t)| t.get(x, y) == want)
            .map(|(name, _)| name.to_string())
            .collect()
    };
    (0..n * n).map(|k| (k / n, k % n)).find_map(|(x, y)| {
        let first = tables[0].1.get(x, y);
        if tables.iter().all(|(_, t)| t.get(x, y) == first) {
            None
        } else {
            Some(ConditionDisagreement {
                pair: (x, y),
                holding: names(true, x, y),
                failing: names(false, x, y),
            })
        }
    })
}

/// A pair on which characterizations of the same commutator disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionDisagreement {
    pub pair: (usize, usize),
    pub holding: Vec<String>,
    pub failing: Vec<String>,
}

/// The four binary characterizations of `[θ0, θ1]` evaluated on all pairs.
#[derive(Clone, Debug, Serialize)]
pub struct BinaryConditions {
    /// `[θ0, θ1]_j` for `j = 0, 1`.
    pub commutators: Vec<Partition>,
    pub disagreement: Option<ConditionDisagreement>,
}

impl BinaryConditions {
    pub fn agree(&self) -> bool {
        self.disagreement.is_none()
    }
}

/// The ternary characterizations of `[θ0, θ1, θ2]`.
#[derive(Clone, Debug, Serialize)]
pub struct TernaryConditions {
    pub disagreement: Option<ConditionDisagreement>,
}

/// Commutator read off the ternary Δ, compared with the term-condition value.
#[derive(Clone, Debug, Serialize)]
pub struct DeltaCommutator {
    pub commutator: Partition,
    pub term_condition: Partition,
    /// The near-constant cube pairs already formed an equivalence relation.
    pub is_equivalence: bool,
    pub conditions: TernaryConditions,
}

impl DeltaCommutator {
    pub fn consistent(&self) -> bool {
        self.is_equivalence
            && self.commutator == self.term_condition
            && self.conditions.disagreement.is_none()
    }
}

/// `[[θ0, θ1], θ2]` against `[θ0, θ1, θ2]`.
#[derive(Clone, Debug, Serialize)]
pub struct NestedInequality {
    pub inner: Partition,
    pub left: Partition,
    pub right: Partition,
    pub witness: Option<(usize, usize)>,
}

impl NestedInequality {
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }
}

/// Outcome of comparing the nested binary Δ with the ternary Δ.
#[derive(Clone, Debug, Serialize)]
pub struct NestedDelta {
    pub ternary_size: usize,
    pub nested_size: usize,
    /// First cube (in sorted order) lying in exactly one of the two relations.
    pub witness: Option<[Elem; 8]>,
}

impl NestedDelta {
    pub fn equal(&self) -> bool {
        self.witness.is_none()
    }
}

/// First element of the symmetric difference of two sorted slices.
pub(crate) fn first_difference<T: Ord + Copy>(a: &[T], b: &[T]) -> Option<T> {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
            std::cmp::Ordering::Less => return Some(a[i]),
            std::cmp::Ordering::Greater => return Some(b[j]),
        }
    }
    a.get(i).or(b.get(j)).copied()
}

fn check_order(order: [usize; 3]) -> Result<()> {
    let mut seen = [false; 3];
    for &a in &order {
        if a >= 3 || std::mem::replace(&mut seen[a], true) {
            return Err(Error::Precondition(format!(
                "{order:?} is not a permutation of (0,1,2)"
            )));
        }
    }
    Ok(())
}

/// All six orders of three axes, lexicographically.
pub const ORDERS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

impl Engine<'_> {
    pub fn delta_binary(
        &self,
        theta0: &Partition,
        theta1: &Partition,
        route: Route,
    ) -> Result<DeltaBinary> {
        let m = match route {
            Route::Closure => Some(self.matrices(&[theta0.clone(), theta1.clone()])?),
            Route::Generated => None,
        };
        delta_binary_on(self.alg, theta0, theta1, route, m.as_deref(), self.cap)
    }

    pub fn delta_ternary(
        &self,
        thetas: &[Partition],
        order: [usize; 3],
        route: Route,
    ) -> Result<DeltaTernary> {
        if thetas.len() != 3 {
            return Err(Error::Precondition(
                "ternary Δ needs three congruences".into(),
            ));
        }
        check_order(order)?;
        let [i, j, l] = order;
        match route {
            Route::Generated => {
                let base = self.delta_binary(&thetas[i], &thetas[j], Route::Generated)?;
                let squares = base.square_carrier();
                let b = SubAlgebraView::new(self.alg, squares.clone()).as_algebra()?;
                let idx = |x: usize| squares.index_of(&[x as Elem; 4]).unwrap();
                let partition = cg(&b, thetas[l].pairs().map(|(x, y)| (idx(x), idx(y))))?;
                Ok(DeltaTernary {
                    order,
                    squares,
                    partition,
                })
            }
            Route::Closure => self.delta_ternary_closure(thetas, order),
        }
    }

    /// Transitive closure of the square pairs across `l` read off corners of
    /// complexes that are chains of matrices along `j`.
    fn delta_ternary_closure(
        &self,
        thetas: &[Partition],
        order: [usize; 3],
    ) -> Result<DeltaTernary> {
        let [i, j, l] = order;
        let m = self.matrices(thetas)?;
        // j-faces as squares in (i, l) orientation
        let face = |c: &[Elem], bit: usize| -> [Elem; 4] {
            std::array::from_fn(|h| c[(h & 1) << i | (h >> 1 & 1) << l | bit << j])
        };
        let mut faces: IndexSet<[Elem; 4], FxBuildHasher> = IndexSet::default();
        let mut edges = Vec::with_capacity(m.len());
        for c in m.iter() {
            let (a, _) = faces.insert_full(face(c, 0));
            let (b, _) = faces.insert_full(face(c, 1));
            edges.push((a, b));
        }
        let mut uf = UnionFind::new(faces.len());
        for (a, b) in edges {
            uf.union(a, b);
        }
        let chains = uf.into_partition();

        let mut squares = TupleSet::new(4);
        let mut links = Vec::new();
        for block in chains.blocks() {
            for &a in &block {
                for &b in &block {
                    let (f, g) = (faces[a], faces[b]);
                    // lines along i at l = 0 and l = 1, stacked along j
                    let s = [f[0], f[1], g[0], g[1]];
                    let t = [f[2], f[3], g[2], g[3]];
                    let (x, _) = squares.insert_owned(s.into_iter().collect());
                    let (y, _) = squares.insert_owned(t.into_iter().collect());
                    links.push((x, y));
                }
            }
            if squares.len() > self.cap {
                return Err(Error::ClosureCap { cap: self.cap });
            }
        }
        let mut uf = UnionFind::new(squares.len());
        for (x, y) in links {
            uf.union(x, y);
        }
        Ok(DeltaTernary {
            order,
            squares,
            partition: uf.into_partition(),
        })
    }

    /// `[θ0, θ1]` read off `Δ_{θ0,θ1}` as the pairs `(x, y)` with
    /// `sq[y,y,x,y]` a member, closed to an equivalence relation.
    pub fn binary_commutator_via_delta(
        &self,
        theta0: &Partition,
        theta1: &Partition,
    ) -> Result<Partition> {
        let n = self.alg.size;
        let delta = self.delta_binary(theta0, theta1, Route::Generated)?;
        let pairs = (0..n as Elem)
            .flat_map(|x| (0..n as Elem).map(move |y| (x, y)))
            .filter(|&(x, y)| delta.contains(&[y, y, x, y]))
            .map(|(x, y)| (x as usize, y as usize));
        Partition::from_pairs(n, pairs)
    }

    /// The binary commutator characterizations: `[θ0,θ1]_j` for both axes and
    /// Δ-membership of `sq[y,y,x,y]`, `sq[y,b,x,b]` (some `b`) and
    /// `sq[c,c,x,y]` (some `c`).
    pub fn binary_conditions(
        &self,
        theta0: &Partition,
        theta1: &Partition,
    ) -> Result<BinaryConditions> {
        let n = self.alg.size;
        let thetas = [theta0.clone(), theta1.clone()];
        let commutators = self.tc_commutator_all_axes(&thetas)?;
        let delta = self.delta_binary(theta0, theta1, Route::Generated)?;
        let mut near = PairTable::new(n);
        for x in 0..n as Elem {
            for y in 0..n as Elem {
                if delta.contains(&[y, y, x, y]) {
                    near.set(x, y);
                }
            }
        }
        let mut column = PairTable::new(n);
        let mut row = PairTable::new(n);
        for s in delta.square_carrier().iter() {
            if s[1] == s[3] {
                column.set(s[2], s[0]);
            }
            if s[0] == s[1] {
                row.set(s[2], s[3]);
            }
        }
        let tables: Vec<PairTable> = commutators.iter().map(PairTable::from_partition).collect();
        let mut named: Vec<(&str, &PairTable)> = vec![
            ("commutator axis 0", &tables[0]),
            ("commutator axis 1", &tables[1]),
        ];
        named.push(("near-constant square", &near));
        named.push(("common right column", &column));
        named.push(("constant bottom line", &row));
        Ok(BinaryConditions {
            disagreement: first_disagreement(&named),
            commutators,
        })
    }

    /// `[θ0, θ1, θ2]` read off `Δ_{θ0,θ1,θ2}`, with the four cube conditions
    /// cross-checked against each other and against the term condition.
    pub fn commutator_via_delta(&self, thetas: &[Partition]) -> Result<DeltaCommutator> {
        let n = self.alg.size;
        let delta = self.delta_ternary(thetas, [0, 1, 2], Route::Generated)?;
        let term_condition = self.tc_commutator(thetas, 0)?;

        let mut near = PairTable::new(n);
        let mut pairs = Vec::new();
        for x in 0..n as Elem {
            for y in 0..n as Elem {
                let mut c = [x; 8];
                c[7] = y;
                if delta.contains(&c) {
                    near.set(x, y);
                    pairs.push((x as usize, y as usize));
                }
            }
        }
        let commutator = Partition::from_pairs(n, pairs)?;
        let is_equivalence = PairTable::from_partition(&commutator) == near;

        let mut lines = PairTable::new(n);
        let mut faces = PairTable::new(n);
        let mut pivots = PairTable::new(n);
        for c in delta.cubes() {
            if c[0] == c[2] && c[1] == c[3] && c[4] == c[6] {
                lines.set(c[5], c[7]);
            }
            if c[0] == c[1] && c[2] == c[3] && c[6] == c[7] {
                faces.set(c[5], c[4]);
            }
            if c[0] == c[4] && c[1] == c[5] && c[2] == c[6] {
                pivots.set(c[7], c[3]);
            }
        }
        let tc = PairTable::from_partition(&term_condition);
        let named: Vec<(&str, &PairTable)> = vec![
            ("term condition", &tc),
            ("near-constant cube", &near),
            ("repeated columns", &lines),
            ("constant rows", &faces),
            ("shared supporting square", &pivots),
        ];
        Ok(DeltaCommutator {
            commutator,
            term_condition,
            is_equivalence,
            conditions: TernaryConditions {
                disagreement: first_disagreement(&named),
            },
        })
    }

    /// `[[θ0, θ1], θ2] ≤ [θ0, θ1, θ2]`, both sides by the term condition at axis 0.
    pub fn check_nested_inequality(&self, thetas: &[Partition]) -> Result<NestedInequality> {
        if thetas.len() != 3 {
            return Err(Error::Precondition(
                "nested inequality needs three congruences".into(),
            ));
        }
        let inner = self.tc_commutator(&thetas[0..2], 0)?;
        let left = self.tc_commutator(&[inner.clone(), thetas[2].clone()], 0)?;
        let right = self.tc_commutator(thetas, 0)?;
        let witness = left.pairs().find(|&(a, b)| !right.related(a, b));
        Ok(NestedInequality {
            inner,
            left,
            right,
            witness,
        })
    }

    /// `Δ_{θ_i,θ_j,θ_l}` against `Δ_{Δ_{θ_i,θ_j}, Δ_{θ_i,θ_l}}` built on the
    /// algebra `θ_i ≤ A²`.
    pub fn check_nested_delta(
        &self,
        thetas: &[Partition],
        order: [usize; 3],
    ) -> Result<NestedDelta> {
        check_order(order)?;
        let [i, j, l] = order;
        let ternary = self
            .delta_ternary(thetas, order, Route::Generated)?
            .sorted_cubes();

        let lines = pair_carrier(&thetas[i]);
        let b = SubAlgebraView::new(self.alg, lines.clone()).as_algebra()?;
        let phi = self.delta_binary(&thetas[i], &thetas[j], Route::Generated)?;
        let psi = self.delta_binary(&thetas[i], &thetas[l], Route::Generated)?;
        debug_assert_eq!(phi.carrier, lines);
        let nested = delta_binary_on(
            &b,
            &phi.partition,
            &psi.partition,
            Route::Generated,
            None,
            self.cap,
        )?;
        let mut cubes: Vec<[Elem; 8]> = nested
            .partition
            .pairs()
            .map(|(u, v)| {
                let (first, second) = (
                    nested.carrier.get(u).unwrap(),
                    nested.carrier.get(v).unwrap(),
                );
                let mut c = [0; 8];
                for (lbit, pair) in [first, second].into_iter().enumerate() {
                    for (jbit, &line) in pair.iter().enumerate() {
                        let line = lines.get(line as usize).unwrap();
                        for (ibit, &x) in line.iter().enumerate() {
                            c[ibit << i | jbit << j | lbit << l] = x;
                        }
                    }
                }
                c
            })
            .collect();
        cubes.sort_unstable();
        Ok(NestedDelta {
            ternary_size: ternary.len(),
            nested_size: cubes.len(),
            witness: first_difference(&ternary, &cubes),
        })
    }
}
