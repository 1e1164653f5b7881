//! Engine results against brute-force reference implementations.

mod common;

use std::collections::BTreeSet;

use common::*;
use ualg_core::corpus;
use ualg_core::cube::{matrix_algebra, Complex};
use ualg_core::engine::{corner_set, CornerBound, Engine, Route, ORDERS};
use ualg_core::{CongruenceLattice, Elem, FiniteAlgebra, Partition};

fn small_algebras() -> Vec<FiniteAlgebra> {
    vec![corpus::z4(), corpus::s3(), corpus::l22()]
}

fn sorted(p: &[Partition]) -> Vec<Partition> {
    let mut v = p.to_vec();
    v.sort();
    v
}

#[test]
fn lattice_matches_partition_filter() {
    for alg in [
        corpus::z4(),
        corpus::s3(),
        corpus::l22(),
        corpus::set4(),
        corpus::e1(),
    ] {
        let lat = CongruenceLattice::compute(&alg).unwrap();
        assert_eq!(
            sorted(lat.members()),
            sorted(&brute_lattice(&alg)),
            "{}",
            alg.name
        );
    }
    assert_eq!(all_partitions(4).len(), 15);
    assert_eq!(all_partitions(6).len(), 203);
}

#[test]
fn principal_congruences_match_meet_of_lattice() {
    for alg in [corpus::z4(), corpus::s3(), corpus::l22(), corpus::set4()] {
        let lat = brute_lattice(&alg);
        for a in 0..alg.size {
            for b in 0..alg.size {
                let expected = brute_cg(&alg, &lat, &[(a, b)]);
                assert_eq!(
                    ualg_core::cg(&alg, [(a, b)]).unwrap(),
                    expected,
                    "{} ({a},{b})",
                    alg.name
                );
            }
        }
        let pairs = [(0, 1), (2, 3)];
        assert_eq!(
            ualg_core::cg(&alg, pairs).unwrap(),
            brute_cg(&alg, &lat, &pairs)
        );
    }
}

#[test]
fn modularity_matches_pentagon_search() {
    for alg in [
        corpus::z4(),
        corpus::s3(),
        corpus::l22(),
        corpus::set4(),
        corpus::e1(),
    ] {
        let lat = CongruenceLattice::compute(&alg).unwrap();
        let brute = brute_pentagon(lat.members());
        assert_eq!(lat.is_modular().is_some(), brute.is_some(), "{}", alg.name);
    }
}

fn scope(alg: &FiniteAlgebra, k: usize) -> Vec<Vec<Partition>> {
    let lat = CongruenceLattice::compute(alg).unwrap();
    tuples_of(lat.members(), k)
}

/// Tuples whose matrix sets are small enough for the naive closure.
const NAIVE_LIMIT: usize = 1100;

#[test]
fn matrices_match_definition() {
    let mut compared = 0;
    for alg in small_algebras() {
        let e = Engine::new(&alg);
        for k in [2, 3] {
            for t in scope(&alg, k) {
                let mt = e.matrices(&t).unwrap();
                if mt.len() > NAIVE_LIMIT {
                    continue;
                }
                let engine: BTreeSet<Vec<Elem>> = mt.iter().map(|m| m.to_vec()).collect();
                assert_eq!(engine, naive_matrices(&alg, &t), "{} {t:?}", alg.name);
                compared += 1;
            }
        }
    }
    assert!(compared > 100, "{compared}");
}

#[test]
fn term_condition_matches_definition() {
    for alg in small_algebras() {
        let e = Engine::new(&alg);
        let lat = e.lattice().unwrap();
        for k in [2, 3] {
            for t in scope(&alg, k) {
                if e.matrices(&t).unwrap().len() > NAIVE_LIMIT {
                    continue;
                }
                let mt = naive_matrices(&alg, &t);
                for j in 0..k {
                    for delta in lat.members() {
                        assert_eq!(
                            e.check_tc(&t, j, delta).unwrap().holds,
                            naive_tc(&mt, k, j, delta),
                            "{} {t:?} j={j} δ={delta}",
                            alg.name
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn commutator_is_least_centralizing_congruence() {
    for alg in small_algebras() {
        let e = Engine::new(&alg);
        let lat = e.lattice().unwrap();
        for k in [2, 3] {
            for t in scope(&alg, k) {
                for j in 0..k {
                    let passing: Vec<&Partition> = lat
                        .members()
                        .iter()
                        .filter(|d| e.check_tc(&t, j, d).unwrap().holds)
                        .collect();
                    let oracle = naive_meet(alg.size, &passing);
                    assert_eq!(
                        e.tc_commutator(&t, j).unwrap(),
                        oracle,
                        "{} {t:?} j={j}",
                        alg.name
                    );
                }
            }
        }
    }
}

#[test]
fn binary_delta_matches_definition() {
    for alg in small_algebras() {
        let e = Engine::new(&alg);
        for t in scope(&alg, 2) {
            let oracle: Vec<Vec<Elem>> =
                naive_delta_binary(&alg, &t[0], &t[1]).into_iter().collect();
            for route in [Route::Generated, Route::Closure] {
                let d = e.delta_binary(&t[0], &t[1], route).unwrap();
                let got: Vec<Vec<Elem>> = d.squares().iter().map(|s| s.to_vec()).collect();
                assert_eq!(got, oracle, "{} {t:?} {route:?}", alg.name);
            }
        }
    }
}

#[test]
fn ternary_delta_matches_definition() {
    let cases: Vec<(FiniteAlgebra, Vec<Vec<Partition>>)> = vec![
        (corpus::z4(), scope(&corpus::z4(), 3)),
        (corpus::l22(), scope(&corpus::l22(), 3)),
        (corpus::s3(), vec![vec![Partition::one(6); 3]]),
    ];
    for (alg, triples) in cases {
        let e = Engine::new(&alg);
        for t in triples {
            let oracle: Vec<Vec<Elem>> = naive_delta_ternary(&alg, &t).into_iter().collect();
            for order in ORDERS {
                for route in [Route::Generated, Route::Closure] {
                    let d = e.delta_ternary(&t, order, route).unwrap();
                    let got: Vec<Vec<Elem>> = d.sorted_cubes().iter().map(|c| c.to_vec()).collect();
                    assert_eq!(got, oracle, "{} {t:?} {order:?} {route:?}", alg.name);
                }
            }
        }
    }
}

/// Corners of complexes with one axis of dimension 3, by gluing two matrices.
fn glued_corners(mt: &BTreeSet<Vec<Elem>>, axis: usize) -> BTreeSet<Vec<Elem>> {
    let bit = 1 << axis;
    let mut out = BTreeSet::new();
    for m in mt {
        for n in mt {
            if (0..8).filter(|v| v & bit != 0).all(|v| m[v] == n[v ^ bit]) {
                out.insert(
                    (0..8)
                        .map(|v| if v & bit == 0 { m[v] } else { n[v] })
                        .collect(),
                );
            }
        }
    }
    out
}

#[test]
fn corners_match_glued_matrices() {
    for alg in [corpus::z4(), corpus::l22()] {
        for t in scope(&alg, 3).into_iter().step_by(5) {
            let mt = matrix_algebra(&alg, &t, None).unwrap();
            let naive: BTreeSet<Vec<Elem>> = mt.iter().map(|m| m.to_vec()).collect();
            for axis in 0..3 {
                let mut dims = [2; 3];
                dims[axis] = 3;
                let got: BTreeSet<Vec<Elem>> =
                    corner_set(alg.size, &mt, dims, &CornerBound::default())
                        .unwrap()
                        .iter()
                        .map(|c| c.to_vec())
                        .collect();
                assert_eq!(
                    got,
                    glued_corners(&naive, axis),
                    "{} {t:?} {dims:?}",
                    alg.name
                );
            }
            let got: BTreeSet<Vec<Elem>> =
                corner_set(alg.size, &mt, [2, 2, 2], &CornerBound::default())
                    .unwrap()
                    .iter()
                    .map(|c| c.to_vec())
                    .collect();
            assert_eq!(got, naive);
        }
    }
}

#[test]
fn stacked_complex_corner() {
    let z4 = corpus::z4();
    let one = Partition::one(4);
    let mt = matrix_algebra(&z4, &[one.clone(), one.clone(), one], None).unwrap();
    let a: Vec<Elem> = vec![0, 1, 2, 3, 1, 2, 3, 0];
    let b: Vec<Elem> = vec![1, 2, 3, 0, 2, 3, 0, 1];
    assert!(mt.contains(&a) && mt.contains(&b));
    let c = Complex::stack2(&a, &b).unwrap();
    assert_eq!(ualg_core::cube::is_complex(&c, &mt), None);
    assert_eq!(c.corner().to_vec(), vec![0, 1, 2, 3, 2, 3, 0, 1]);
}
