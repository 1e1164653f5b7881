//! The transitive term condition, evaluated on corners of complexes.
//!
//! Corners are computed exactly per dimension triple without listing
//! complexes: a complex is a sequence of 2-dimensional layers along a sweep
//! axis `s`, consecutive layers forming valid slabs. With two layers the
//! corners are the slab corner pairs; with three, matrices are closed under
//! reflection along `s`, so the corners are the union over middle layers `L`
//! of `S(L) × S(L)`, where `S(L)` holds the corner squares of neighbours of `L`.

use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use super::{CentralityReport, Engine};
use crate::algebra::Elem;
use std::rc::Rc;

use crate::cube::{axis_lines, permute_axes, CubeLabeling};
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::tuples::{Tuple, TupleSet};

/// Limits for the bounded corner search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CornerBound {
    /// Largest dimension along each axis (each at least 2, at most 3).
    pub dims: [usize; 3],
    /// Cap on the number of 2-dimensional layers per dimension triple.
    pub max_layers: usize,
    /// Cap on search steps per dimension triple.
    pub max_steps: u64,
}

impl Default for CornerBound {
    fn default() -> Self {
        CornerBound {
            dims: [3, 3, 3],
            max_layers: 200_000,
            max_steps: 400_000_000,
        }
    }
}

impl CornerBound {
    pub fn with_dims(dims: [usize; 3]) -> Self {
        CornerBound {
            dims,
            ..CornerBound::default()
        }
    }
}

/// Outcome of a bounded transitive term-condition check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CtrReport {
    pub holds: bool,
    /// A corner whose supporting lines are δ-pairs but whose pivot is not,
    /// and the dimensions of a complex realizing it.
    pub witness: Option<(CubeLabeling, [usize; 3])>,
    pub corners_checked: usize,
    pub dims_checked: Vec<[usize; 3]>,
}

impl CtrReport {
    pub fn as_centrality(&self, axis: usize) -> CentralityReport {
        CentralityReport {
            holds: self.holds,
            witness: self.witness.as_ref().map(|(c, _)| super::TcWitness {
                matrix: c.clone(),
                axis,
                pivot: {
                    let l = c.lines_for_axis(axis).unwrap();
                    l.pivot
                },
            }),
        }
    }
}

struct Budget {
    steps: u64,
    max: u64,
}

impl Budget {
    fn tick(&mut self) -> Result<()> {
        self.steps += 1;
        if self.steps > self.max {
            return Err(Error::BoundExhausted(format!(
                "corner search exceeded {} steps",
                self.max
            )));
        }
        Ok(())
    }
}

/// Fills an `na × nb` grid cell by cell (axis `a` fastest), admitting a value
/// only when `admit(grid, cell, value)` holds.
fn grid_dfs(
    na: usize,
    nb: usize,
    size: usize,
    budget: &mut Budget,
    admit: &dyn Fn(&[Elem], usize, Elem) -> bool,
    visit: &mut dyn FnMut(&[Elem]) -> Result<()>,
) -> Result<()> {
    fn go(
        grid: &mut Vec<Elem>,
        len: usize,
        size: usize,
        budget: &mut Budget,
        admit: &dyn Fn(&[Elem], usize, Elem) -> bool,
        visit: &mut dyn FnMut(&[Elem]) -> Result<()>,
    ) -> Result<()> {
        let cell = grid.len();
        if cell == len {
            return visit(grid);
        }
        for v in 0..size as Elem {
            budget.tick()?;
            if admit(grid, cell, v) {
                grid.push(v);
                go(grid, len, size, budget, admit, visit)?;
                grid.pop();
            }
        }
        Ok(())
    }
    let mut grid = Vec::with_capacity(na * nb);
    go(&mut grid, na * nb, size, budget, admit, visit)
}

/// Blocks of an `na × nb` grid containing `cell`, as (offset cell, vertex).
fn blocks_of(na: usize, nb: usize, cell: usize) -> impl Iterator<Item = (usize, usize)> {
    let (x, y) = (cell % na, cell / na);
    (0..4usize).filter_map(move |h| {
        let (dx, dy) = (h & 1, h >> 1);
        if x >= dx && y >= dy && x - dx + 1 < na && y - dy + 1 < nb {
            Some(((x - dx) + na * (y - dy), h))
        } else {
            None
        }
    })
}

fn block_cell(na: usize, origin: usize, h: usize) -> usize {
    origin + (h & 1) + na * (h >> 1)
}

fn grid_corner(g: &[Elem], na: usize, nb: usize) -> [Elem; 4] {
    [g[0], g[na - 1], g[na * (nb - 1)], g[na * nb - 1]]
}

type Prefixes = (Vec<FxHashSet<Tuple>>, Vec<FxHashSet<Tuple>>);

/// Layer axes `(a, b)` for sweep axis `s` and the map from (layer vertex,
/// sweep position) to global vertex.
fn sweep_frame(s: usize) -> (usize, usize, impl Fn(usize, usize) -> usize) {
    let others: Vec<usize> = (0..3).filter(|&x| x != s).collect();
    let (a, b) = (others[0], others[1]);
    (a, b, move |h: usize, t: usize| {
        (h & 1) << a | (h >> 1 & 1) << b | t << s
    })
}

/// Prefixes of matrices read face by face: lower faces, then whole cubes.
fn prefixes(mt: &TupleSet, vertex: &dyn Fn(usize, usize) -> usize) -> Prefixes {
    let mut face_prefix: Vec<FxHashSet<Tuple>> = vec![FxHashSet::default(); 4];
    let mut cube_prefix: Vec<FxHashSet<Tuple>> = vec![FxHashSet::default(); 4];
    for m in mt.iter() {
        let ordered: Tuple = (0..8).map(|k| m[vertex(k & 3, k >> 2)]).collect();
        for h in 0..4 {
            face_prefix[h].insert(Tuple::from_slice(&ordered[..=h]));
            cube_prefix[h].insert(Tuple::from_slice(&ordered[..=4 + h]));
        }
    }
    (face_prefix, cube_prefix)
}

/// Layers perpendicular to `s`, or `None` when there are more than `cap`.
fn sweep_layers(
    size: usize,
    mt: &TupleSet,
    dims: [usize; 3],
    s: usize,
    cap: usize,
    budget: &mut Budget,
) -> Result<Option<Vec<Vec<Elem>>>> {
    let (a, b, vertex) = sweep_frame(s);
    let (na, nb) = (dims[a], dims[b]);
    let face_prefix = prefixes(mt, &vertex).0;
    let admit = |g: &[Elem], cell: usize, v: Elem| {
        blocks_of(na, nb, cell).all(|(origin, h)| {
            let mut p: Tuple = (0..h).map(|k| g[block_cell(na, origin, k)]).collect();
            p.push(v);
            face_prefix[h].contains(&p)
        })
    };
    let mut layers = Vec::new();
    let r = grid_dfs(na, nb, size, budget, &admit, &mut |g| {
        layers.push(g.to_vec());
        if layers.len() > cap {
            return Err(Error::BoundExhausted(String::new()));
        }
        Ok(())
    });
    match r {
        Ok(()) => Ok(Some(layers)),
        Err(Error::BoundExhausted(m)) if m.is_empty() => Ok(None),
        Err(e) => Err(e),
    }
}

/// Corner set for complexes of exactly `dims`, under the global vertex encoding.
pub fn corner_set(
    size: usize,
    mt: &TupleSet,
    dims: [usize; 3],
    bound: &CornerBound,
) -> Result<Vec<[Elem; 8]>> {
    if mt.width() != 8 {
        return Err(Error::WidthMismatch {
            expected: 8,
            found: mt.width(),
        });
    }
    if dims.iter().any(|&d| !(2..=3).contains(&d)) {
        return Err(Error::Precondition(format!(
            "corner dimensions {dims:?} must lie in 2..=3"
        )));
    }
    // sweep along the axis leaving the fewest layers
    let mut best: Option<(usize, Vec<Vec<Elem>>)> = None;
    let mut budget = Budget {
        steps: 0,
        max: bound.max_steps,
    };
    for s in 0..3 {
        let cap = best.as_ref().map_or(bound.max_layers, |(_, l)| l.len());
        if let Some(layers) = sweep_layers(size, mt, dims, s, cap, &mut budget)? {
            if best.as_ref().is_none_or(|(_, l)| layers.len() < l.len()) {
                best = Some((s, layers));
            }
        }
    }
    let Some((s, layers)) = best else {
        return Err(Error::BoundExhausted(format!(
            "more than {} layers for dimensions {dims:?} along every axis",
            bound.max_layers
        )));
    };
    let (a, b, vertex) = sweep_frame(s);
    let (na, nb) = (dims[a], dims[b]);
    let cube_prefix = prefixes(mt, &vertex).1;

    let assemble = |lo: &[Elem; 4], hi: &[Elem; 4]| -> [Elem; 8] {
        let mut c = [0; 8];
        for h in 0..4 {
            c[vertex(h, 0)] = lo[h];
            c[vertex(h, 1)] = hi[h];
        }
        c
    };

    let mut corners: FxHashSet<[Elem; 8]> = FxHashSet::default();
    let mut seen_neighbour_sets: FxHashSet<Vec<[Elem; 4]>> = FxHashSet::default();
    for layer in &layers {
        let admit_next = |g: &[Elem], cell: usize, v: Elem| {
            blocks_of(na, nb, cell).all(|(origin, h)| {
                let mut p: Tuple = (0..4).map(|k| layer[block_cell(na, origin, k)]).collect();
                p.extend((0..h).map(|k| g[block_cell(na, origin, k)]));
                p.push(v);
                cube_prefix[h].contains(&p)
            })
        };
        let mut neighbour_corners: FxHashSet<[Elem; 4]> = FxHashSet::default();
        grid_dfs(na, nb, size, &mut budget, &admit_next, &mut |g| {
            neighbour_corners.insert(grid_corner(g, na, nb));
            Ok(())
        })?;
        if dims[s] == 2 {
            let lo = grid_corner(layer, na, nb);
            for hi in &neighbour_corners {
                corners.insert(assemble(&lo, hi));
            }
        } else {
            let mut set: Vec<[Elem; 4]> = neighbour_corners.into_iter().collect();
            set.sort_unstable();
            if seen_neighbour_sets.insert(set.clone()) {
                for lo in &set {
                    for hi in &set {
                        budget.tick()?;
                        corners.insert(assemble(lo, hi));
                    }
                }
            }
        }
    }
    let mut out: Vec<[Elem; 8]> = corners.into_iter().collect();
    out.sort_unstable();
    Ok(out)
}

impl Engine<'_> {
    /// Cached [`corner_set`] for `T`, computed once per sorted tuple and
    /// permuted into the requested axis order. Exhausted bounds are cached too,
    /// so the bound must not change between calls on one engine.
    pub fn corners(
        &self,
        thetas: &[Partition],
        dims: [usize; 3],
        bound: &CornerBound,
    ) -> Result<Rc<Vec<[Elem; 8]>>> {
        let key = (thetas.to_vec(), dims);
        if let Some(c) = self.corners.borrow().get(&key) {
            return c.clone();
        }
        let mut order: Vec<usize> = (0..3).collect();
        order.sort_by(|&a, &b| thetas[a].cmp(&thetas[b]));
        let sorted: Vec<Partition> = order.iter().map(|&t| thetas[t].clone()).collect();
        let sorted_dims: [usize; 3] = std::array::from_fn(|t| dims[order[t]]);
        let base_key = (sorted.clone(), sorted_dims);
        let cached = self.corners.borrow().get(&base_key).cloned();
        let base = match cached {
            Some(c) => c,
            None => {
                let mt = self.matrices(&sorted)?;
                let c = corner_set(self.alg.size, &mt, sorted_dims, bound).map(Rc::new);
                if c.as_ref().is_ok() || c.as_ref().is_err_and(Error::is_resource) {
                    self.corners.borrow_mut().insert(base_key, c.clone());
                }
                c
            }
        }?;
        if sorted == thetas && sorted_dims == dims {
            return Ok(base);
        }
        // sorted axis t sits at axis order[t] of the requested tuple
        let mut out: Vec<[Elem; 8]> = base
            .iter()
            .map(|c| {
                let p = permute_axes(c, &order);
                std::array::from_fn(|k| p[k])
            })
            .collect();
        out.sort_unstable();
        let out = Rc::new(out);
        self.corners.borrow_mut().insert(key, Ok(out.clone()));
        Ok(out)
    }

    /// Whether `T` is transitively centralized at `j` modulo `δ`, over corners
    /// of complexes with every dimension between 2 and `bound.dims`.
    pub fn check_ctr(
        &self,
        thetas: &[Partition],
        j: usize,
        delta: &Partition,
        bound: &CornerBound,
    ) -> Result<CtrReport> {
        if thetas.len() != 3 {
            return Err(Error::Precondition(
                "the transitive term condition is ternary".into(),
            ));
        }
        self.check_thetas(thetas)?;
        if j >= 3 {
            return Err(Error::AxisOutOfRange { axis: j, dim: 3 });
        }
        if bound.dims.iter().any(|&d| !(2..=3).contains(&d)) {
            return Err(Error::Precondition(format!(
                "bound {:?} outside the supported range 2..=3",
                bound.dims
            )));
        }
        let mut report = CtrReport {
            holds: true,
            witness: None,
            corners_checked: 0,
            dims_checked: Vec::new(),
        };
        if delta.is_one() {
            return Ok(report);
        }
        let rel = |(x, y): (Elem, Elem)| delta.related(x as usize, y as usize);
        for n0 in 2..=bound.dims[0] {
            for n1 in 2..=bound.dims[1] {
                for n2 in 2..=bound.dims[2] {
                    let dims = [n0, n1, n2];
                    let corners = self.corners(thetas, dims, bound)?;
                    report.corners_checked += corners.len();
                    report.dims_checked.push(dims);
                    let bad = corners.iter().find(|c| {
                        let l = axis_lines(&c[..], 3, j);
                        l.supporting.iter().all(|&p| rel(p)) && !rel(l.pivot)
                    });
                    if let Some(c) = bad {
                        report.holds = false;
                        report.witness = Some((CubeLabeling::new(3, c).unwrap(), dims));
                        return Ok(report);
                    }
                }
            }
        }
        Ok(report)
    }
}
