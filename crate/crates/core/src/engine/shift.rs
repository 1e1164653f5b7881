//! Shift rotation of complexes whose dimensions along two axes are 2.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashMap;
use serde::Serialize;

use super::Engine;
use crate::algebra::{Elem, FiniteAlgebra};
use crate::cube::{axis_lines, is_complex, Complex};
use crate::error::{Error, Result};
use crate::identities::{check_day_sequence, DaySequence};
use crate::partition::Partition;

fn axis_triple(z: &Complex, j: usize, l: usize) -> Result<usize> {
    if j >= 3 || l >= 3 {
        return Err(Error::AxisOutOfRange {
            axis: j.max(l),
            dim: 3,
        });
    }
    if j == l {
        return Err(Error::Precondition("rotation axes must differ".into()));
    }
    if z.dims[j] != 2 || z.dims[l] != 2 {
        return Err(Error::Precondition(format!(
            "complex dimensions {:?} are not 2 along axes {j} and {l}",
            z.dims
        )));
    }
    Ok(3 - j - l)
}

fn at(i: usize, j: usize, l: usize, k: usize, pj: usize, pl: usize) -> [usize; 3] {
    let mut p = [0; 3];
    p[i] = k;
    p[j] = pj;
    p[l] = pl;
    p
}

/// Applies `m_e` componentwise to the four construction complexes. In layer
/// `k` along the third axis, with `a = z(j0,l0)`, `b = z(j0,l1)`,
/// `c = z(j1,l0)`, `d = z(j1,l1)`, the arguments at `(pj, pl)` are
/// `c`, `z(pj,pl)`, `z(j0,pl)` and `z(1-pj,l0)`.
///
/// Preconditions are not rechecked here; see [`shift_rotation_checked`].
pub fn shift_rotation_minimal(
    alg: &FiniteAlgebra,
    z: &Complex,
    m_e: &[Elem],
    j: usize,
    l: usize,
) -> Result<Complex> {
    let i = axis_triple(z, j, l)?;
    let n = alg.size;
    if m_e.len() != n.pow(4) {
        return Err(Error::WidthMismatch {
            expected: n.pow(4),
            found: m_e.len(),
        });
    }
    let eval = |x: Elem, y: Elem, w: Elem, u: Elem| {
        m_e[((x as usize * n + y as usize) * n + w as usize) * n + u as usize]
    };
    let mut out = z.clone();
    for k in 0..z.dims[i] {
        let g = |pj, pl| z.get(at(i, j, l, k, pj, pl));
        let c = g(1, 0);
        for pj in 0..2 {
            for pl in 0..2 {
                let v = eval(c, g(pj, pl), g(0, pl), g(1 - pj, 0));
                out.set(at(i, j, l, k, pj, pl), v);
            }
        }
    }
    Ok(out)
}

/// [`shift_rotation_minimal`] after validating `z` against `M(T)` and the
/// Day sequence.
pub fn shift_rotation_checked(
    engine: &Engine,
    thetas: &[Partition],
    z: &Complex,
    day: &DaySequence,
    e: usize,
    j: usize,
    l: usize,
) -> Result<Complex> {
    let alg = engine.algebra();
    let mt = engine.matrices(thetas)?;
    if let Some(f) = is_complex(z, &mt) {
        return Err(Error::Precondition(format!(
            "input is not a complex: block at {f:?} is not a matrix"
        )));
    }
    if let Some(fail) = check_day_sequence(alg, day)? {
        return Err(Error::Precondition(format!(
            "Day identity ({}) fails at index {}",
            fail.identity, fail.index
        )));
    }
    let table = day
        .terms
        .get(e)
        .ok_or_else(|| Error::Precondition(format!("Day index {e} out of range")))?
        .compile(alg)?
        .table(alg)?;
    shift_rotation_minimal(alg, z, &table, j, l)
}

/// Outcome of the supporting-line preservation check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinesPreservedReport {
    pub samples: usize,
    /// (sample, index `e`, δ) triples whose hypothesis held.
    pub checks: usize,
    pub violations: usize,
    pub non_complex_outputs: usize,
    pub witness: Option<LinesWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinesWitness {
    pub input: Vec<Elem>,
    pub dims: [usize; 3],
    pub index: usize,
    pub delta: String,
}

impl LinesPreservedReport {
    pub fn holds(&self) -> bool {
        self.violations == 0 && self.non_complex_outputs == 0
    }
}

/// Deterministic sample of complexes with dimension 2 along `j` and `l` and
/// dimension 2 or 3 along the remaining axis `i`. A complex of length 3 is
/// a random matrix followed by a random matrix whose lower `i`-face is the
/// upper `i`-face of the first; such a matrix always exists because the
/// degenerate matrix repeating a face lies in `M(T)`.
pub fn sample_complexes(
    engine: &Engine,
    thetas: &[Partition],
    j: usize,
    l: usize,
    count: usize,
    seed: u64,
) -> Result<Vec<Complex>> {
    if j >= 3 || l >= 3 || j == l {
        return Err(Error::Precondition(format!(
            "axes {j} and {l} must be distinct and below 3"
        )));
    }
    let mt = engine.matrices(thetas)?;
    let i = 3 - j - l;
    let bit = 1 << i;
    let face = |m: &[Elem], upper: usize| -> [Elem; 4] {
        let rest: Vec<usize> = (0..8).filter(|v| v & bit == upper * bit).collect();
        std::array::from_fn(|h| m[rest[h]])
    };
    let mut by_lower: FxHashMap<[Elem; 4], Vec<usize>> = FxHashMap::default();
    for (k, m) in mt.iter().enumerate() {
        by_lower.entry(face(m, 0)).or_default().push(k);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for s in 0..count {
        let first = mt.get(rng.gen_range(0..mt.len())).unwrap();
        let mut dims = [2; 3];
        if s % 2 == 0 {
            out.push(Complex::new(dims, first.to_vec())?);
            continue;
        }
        dims[i] = 3;
        let options = &by_lower[&face(first, 1)];
        let second = mt.get(options[rng.gen_range(0..options.len())]).unwrap();
        let mut z = Complex::new(dims, vec![0; 12])?;
        for v in 0..8usize {
            let p = [v & 1, v >> 1 & 1, v >> 2 & 1];
            z.set(p, first[v]);
            let mut q = p;
            q[i] += 1;
            z.set(q, second[v]);
        }
        out.push(z);
    }
    Ok(out)
}

/// For each sample complex, Day index and congruence δ: if the `(j)`-supporting
/// lines of the corner are δ-pairs, so are the `(l)`-supporting lines of the
/// rotated corner.
pub fn check_lines_preserved(
    engine: &Engine,
    thetas: &[Partition],
    day: &DaySequence,
    j: usize,
    l: usize,
    samples: &[Complex],
) -> Result<LinesPreservedReport> {
    let alg = engine.algebra();
    if thetas.len() != 3 {
        return Err(Error::Precondition(
            "shift rotation needs three congruences".into(),
        ));
    }
    if let Some(fail) = check_day_sequence(alg, day)? {
        return Err(Error::Precondition(format!(
            "Day identity ({}) fails at index {}",
            fail.identity, fail.index
        )));
    }
    let mt = engine.matrices(thetas)?;
    let lattice = engine.lattice()?;
    let tables = day.tables(alg)?;
    let mut report = LinesPreservedReport {
        samples: samples.len(),
        checks: 0,
        violations: 0,
        non_complex_outputs: 0,
        witness: None,
    };
    for z in samples {
        if let Some(f) = is_complex(z, &mt) {
            return Err(Error::Precondition(format!(
                "sample is not a complex at block {f:?}"
            )));
        }
        let before = axis_lines(&z.corner(), 3, j);
        for (e, table) in tables.iter().enumerate() {
            let out = shift_rotation_minimal(alg, z, table, j, l)?;
            if is_complex(&out, &mt).is_some() {
                report.non_complex_outputs += 1;
            }
            let after = axis_lines(&out.corner(), 3, l);
            for delta in lattice.members() {
                let rel = |(a, b): (Elem, Elem)| delta.related(a as usize, b as usize);
                if !before.supporting.iter().all(|&p| rel(p)) {
                    continue;
                }
                report.checks += 1;
                if !after.supporting.iter().all(|&p| rel(p)) {
                    report.violations += 1;
                    report.witness.get_or_insert_with(|| LinesWitness {
                        input: z.labels.clone(),
                        dims: z.dims,
                        index: e,
                        delta: delta.to_string(),
                    });
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
    use crate::term::TermFn;

    fn z4_day() -> DaySequence {
        let p = TermFn::parse(&["a", "b", "c"], "+(+(a, -(b)), c)").unwrap();
        DaySequence::from_maltsev(&p).unwrap()
    }

    #[test]
    fn projections_give_construction_squares() {
        let z4 = corpus::z4();
        let e = Engine::new(&z4);
        let one = Partition::one(4);
        let t = [one.clone(), one.clone(), one];
        let samples = sample_complexes(&e, &t, 1, 2, 6, 7).unwrap();
        assert_eq!(samples.len(), 6);
        let day = z4_day();
        for z in &samples {
            let first = shift_rotation_checked(&e, &t, z, &day, 0, 1, 2).unwrap();
            let last = shift_rotation_checked(&e, &t, z, &day, 2, 1, 2).unwrap();
            for k in 0..z.dims[0] {
                let g = |c: &Complex, pj, pl| c.get([k, pj, pl]);
                let (a, c) = (g(z, 0, 0), g(z, 1, 0));
                for pj in 0..2 {
                    for pl in 0..2 {
                        assert_eq!(g(&first, pj, pl), c);
                        assert_eq!(g(&last, pj, pl), if pj == 1 { a } else { c });
                    }
                }
            }
        }
    }

    #[test]
    fn lines_preserved_on_z4() {
        let z4 = corpus::z4();
        let e = Engine::new(&z4);
        let one = Partition::one(4);
        let t = [one.clone(), one.clone(), one];
        let samples = sample_complexes(&e, &t, 1, 2, 20, 1).unwrap();
        let r = check_lines_preserved(&e, &t, &z4_day(), 1, 2, &samples).unwrap();
        assert!(r.holds(), "{r:?}");
        assert!(r.checks >= samples.len() * 3);
    }

    #[test]
    fn rejects_bad_inputs() {
        let z4 = corpus::z4();
        let e = Engine::new(&z4);
        let zero = Partition::zero(4);
        let t = [zero.clone(), zero.clone(), zero];
        let z = Complex::new([2, 2, 2], vec![0, 1, 0, 0, 0, 0, 0, 0]).unwrap();
        assert!(shift_rotation_checked(&e, &t, &z, &z4_day(), 0, 1, 2).is_err());
        let c = Complex::new([2, 3, 2], vec![0; 12]).unwrap();
        assert!(shift_rotation_minimal(&z4, &c, &[0; 256], 1, 2).is_err());
    }
}
