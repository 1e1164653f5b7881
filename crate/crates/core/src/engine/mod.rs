//! Term-condition centrality, commutators and the Δ relations.

mod ctr;
mod delta;
mod shift;

use std::cell::RefCell;
use std::rc::Rc;

use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::algebra::{Elem, FiniteAlgebra};
use crate::congruence::{cg_from, CongruenceLattice};
use crate::cube::{axis_lines, matrix_algebra, permute_axes, CubeLabeling};
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::tuples::{closure_cap_from_env, TupleSet};

pub use ctr::{corner_set, CornerBound, CtrReport};
pub use delta::{
    delta_binary_on, BinaryConditions, ConditionDisagreement, DeltaBinary, DeltaCommutator,
    DeltaTernary, NestedDelta, NestedInequality, Route, TernaryConditions, ORDERS,
};
pub use shift::{
    check_lines_preserved, sample_complexes, shift_rotation_checked, shift_rotation_minimal,
    LinesPreservedReport, LinesWitness,
};

/// A term-condition failure: a matrix whose supporting lines are δ-pairs but
/// whose pivot line is not.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TcWitness {
    pub matrix: CubeLabeling,
    pub axis: usize,
    pub pivot: (Elem, Elem),
}

/// Outcome of a term-condition check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CentralityReport {
    pub holds: bool,
    pub witness: Option<TcWitness>,
}

impl CentralityReport {
    fn from_witness(witness: Option<TcWitness>) -> Self {
        CentralityReport {
            holds: witness.is_none(),
            witness,
        }
    }
}

/// Corner sets keyed by congruence tuple and complex dimensions.
type CornerCache = FxHashMap<(Vec<Partition>, [usize; 3]), Result<Rc<Vec<[Elem; 8]>>>>;

/// Computation context for one algebra. Caches matrix algebras, which are
/// shared across axis permutations by relabelling vertices.
pub struct Engine<'a> {
    alg: &'a FiniteAlgebra,
    cap: usize,
    matrices: RefCell<FxHashMap<Vec<Partition>, Rc<TupleSet>>>,
    lattice: RefCell<Option<Rc<CongruenceLattice>>>,
    corners: RefCell<CornerCache>,
}

impl<'a> Engine<'a> {
    /// An engine whose closure cap comes from `UALG_MAX_CLOSURE` or the default.
    pub fn new(alg: &'a FiniteAlgebra) -> Self {
        Engine::with_cap(alg, closure_cap_from_env())
    }

    pub fn with_cap(alg: &'a FiniteAlgebra, cap: usize) -> Self {
        Engine {
            alg,
            cap,
            matrices: RefCell::new(FxHashMap::default()),
            lattice: RefCell::new(None),
            corners: RefCell::new(FxHashMap::default()),
        }
    }

    pub fn algebra(&self) -> &'a FiniteAlgebra {
        self.alg
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn lattice(&self) -> Result<Rc<CongruenceLattice>> {
        if let Some(l) = self.lattice.borrow().as_ref() {
            return Ok(l.clone());
        }
        let l = Rc::new(CongruenceLattice::compute(self.alg)?);
        *self.lattice.borrow_mut() = Some(l.clone());
        Ok(l)
    }

    fn check_thetas(&self, thetas: &[Partition]) -> Result<()> {
        if !(2..=3).contains(&thetas.len()) {
            return Err(Error::Precondition(format!(
                "commutator arity {} not supported (use 2 or 3)",
                thetas.len()
            )));
        }
        for t in thetas {
            if t.size() != self.alg.size {
                return Err(Error::SizeMismatch(t.size(), self.alg.size));
            }
        }
        Ok(())
    }

    /// `M(T)`. Tuples are computed once per multiset of congruences; other
    /// orderings are obtained by permuting vertices.
    pub fn matrices(&self, thetas: &[Partition]) -> Result<Rc<TupleSet>> {
        if let Some(m) = self.matrices.borrow().get(thetas) {
            return Ok(m.clone());
        }
        let k = thetas.len();
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&a, &b| thetas[a].cmp(&thetas[b]));
        let sorted: Vec<Partition> = order.iter().map(|&t| thetas[t].clone()).collect();
        let cached = self.matrices.borrow().get(&sorted).cloned();
        let base = match cached {
            Some(m) => m,
            None => {
                let m = Rc::new(matrix_algebra(self.alg, &sorted, Some(self.cap))?);
                self.matrices.borrow_mut().insert(sorted.clone(), m.clone());
                m
            }
        };
        if sorted == thetas {
            return Ok(base);
        }
        // sorted axis t sits at axis order[t] of the requested tuple
        let mut out = TupleSet::new(base.width());
        for c in base.iter() {
            out.insert_owned(permute_axes(c, &order));
        }
        let out = Rc::new(out);
        self.matrices
            .borrow_mut()
            .insert(thetas.to_vec(), out.clone());
        Ok(out)
    }

    /// Whether `T` is centralized at `j` modulo `δ`.
    pub fn check_tc(
        &self,
        thetas: &[Partition],
        j: usize,
        delta: &Partition,
    ) -> Result<CentralityReport> {
        self.check_thetas(thetas)?;
        let k = thetas.len();
        if j >= k {
            return Err(Error::AxisOutOfRange { axis: j, dim: k });
        }
        if delta.size() != self.alg.size {
            return Err(Error::SizeMismatch(delta.size(), self.alg.size));
        }
        let mt = self.matrices(thetas)?;
        let rel = |(a, b): (Elem, Elem)| delta.related(a as usize, b as usize);
        let witness = mt.iter().find_map(|m| {
            let lines = axis_lines(m, k, j);
            if lines.supporting.iter().all(|&p| rel(p)) && !rel(lines.pivot) {
                Some(TcWitness {
                    matrix: CubeLabeling::new(k, m).unwrap(),
                    axis: j,
                    pivot: lines.pivot,
                })
            } else {
                None
            }
        });
        Ok(CentralityReport::from_witness(witness))
    }

    /// `[T]_j`, the least δ with `C(T; j; δ)`, by fixpoint iteration.
    pub fn tc_commutator(&self, thetas: &[Partition], j: usize) -> Result<Partition> {
        self.check_thetas(thetas)?;
        let k = thetas.len();
        if j >= k {
            return Err(Error::AxisOutOfRange { axis: j, dim: k });
        }
        let mt = self.matrices(thetas)?;
        let lines: Vec<_> = mt.iter().map(|m| axis_lines(m, k, j)).collect();
        let mut delta = Partition::zero(self.alg.size);
        loop {
            let rel = |(a, b): (Elem, Elem)| delta.related(a as usize, b as usize);
            let pivots: Vec<(usize, usize)> = lines
                .iter()
                .filter(|l| !rel(l.pivot) && l.supporting.iter().all(|&p| rel(p)))
                .map(|l| (l.pivot.0 as usize, l.pivot.1 as usize))
                .collect();
            if pivots.is_empty() {
                return Ok(delta);
            }
            delta = cg_from(self.alg, &delta, pivots)?;
        }
    }

    /// `[T]_j` for every axis `j`.
    pub fn tc_commutator_all_axes(&self, thetas: &[Partition]) -> Result<Vec<Partition>> {
        (0..thetas.len())
            .map(|j| self.tc_commutator(thetas, j))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn p(n: usize, s: &str) -> Partition {
        Partition::parse_blocks(n, s).unwrap()
    }

    #[test]
    fn tc_on_groups() {
        let z4 = corpus::z4();
        let e = Engine::new(&z4);
        let one = Partition::one(4);
        let zero = Partition::zero(4);
        assert!(
            e.check_tc(&[one.clone(), one.clone()], 0, &zero)
                .unwrap()
                .holds
        );
        for j in 0..2 {
            assert!(e
                .tc_commutator(&[one.clone(), one.clone()], j)
                .unwrap()
                .is_zero());
        }

        let s3 = corpus::s3();
        let e = Engine::new(&s3);
        let one = Partition::one(6);
        let zero = Partition::zero(6);
        let report = e.check_tc(&[one.clone(), one.clone()], 0, &zero).unwrap();
        assert!(!report.holds);
        let w = report.witness.unwrap();
        let lines = w.matrix.lines_for_axis(0).unwrap();
        assert!(lines.supporting.iter().all(|&(a, b)| a == b));
        assert_ne!(lines.pivot.0, lines.pivot.1);
        assert!(e
            .matrices(&[one.clone(), one.clone()])
            .unwrap()
            .contains(w.matrix.labels()));
        let alpha = p(6, "0 3 4 | 1 2 5");
        for j in 0..2 {
            assert_eq!(
                e.tc_commutator(&[one.clone(), one.clone()], j).unwrap(),
                alpha
            );
        }
        assert!(
            e.check_tc(&[one.clone(), one.clone()], 1, &one)
                .unwrap()
                .holds
        );
    }

    #[test]
    fn tc_on_lattice() {
        let l22 = corpus::l22();
        let e = Engine::new(&l22);
        // kernels of the two projections of 2 × 2
        let a = p(4, "0 2 | 1 3");
        let b = p(4, "0 1 | 2 3");
        for j in 0..2 {
            assert!(e
                .tc_commutator(&[a.clone(), b.clone()], j)
                .unwrap()
                .is_zero());
        }
    }

    #[test]
    fn permuted_matrices_match_direct_computation() {
        let z4 = corpus::z4();
        let e = Engine::new(&z4);
        let eta = p(4, "0 2 | 1 3");
        let one = Partition::one(4);
        let zero = Partition::zero(4);
        let t = [one.clone(), zero.clone(), eta.clone()];
        let via_cache = e.matrices(&t).unwrap();
        let direct = matrix_algebra(&z4, &t, None).unwrap();
        assert_eq!(*via_cache, direct);
        let t = [eta, one, zero];
        assert_eq!(
            *e.matrices(&t).unwrap(),
            matrix_algebra(&z4, &t, None).unwrap()
        );
    }
}
