//! Vertex-labelled hypercubes, matrix algebras `M(T)`, complexes and corners.
//!
//! Vertex `g ∈ 2^k` is encoded as `Σ g(i)·2^i`; axis `i` of `M(θ_0, …)` carries
//! `θ_i`. For squares this puts vertex 0 bottom-left, 1 bottom-right, 2
//! top-left and 3 top-right, with axis 0 horizontal.

use std::fmt;

use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use crate::algebra::{Elem, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::tuples::{generate_subpower, Tuple, TupleSet};

/// An element of `A^(2^k)` for `1 ≤ k ≤ 3`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CubeLabeling {
    dim: usize,
    labels: Tuple,
}

impl CubeLabeling {
    pub fn new(dim: usize, labels: &[Elem]) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::Precondition(format!(
                "cube dimension {dim} not in 1..=3"
            )));
        }
        if labels.len() != 1 << dim {
            return Err(Error::WidthMismatch {
                expected: 1 << dim,
                found: labels.len(),
            });
        }
        Ok(CubeLabeling {
            dim,
            labels: Tuple::from_slice(labels),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[Elem] {
        &self.labels
    }

    pub fn at(&self, vertex: usize) -> Elem {
        self.labels[vertex]
    }

    /// `cube_i^k(a, b)`: label `a` where `g(i) = 0`, `b` elsewhere.
    pub fn generator(k: usize, i: usize, a: Elem, b: Elem) -> Result<Self> {
        if i >= k {
            return Err(Error::AxisOutOfRange { axis: i, dim: k });
        }
        let labels: Tuple = (0..1usize << k)
            .map(|g| if g >> i & 1 == 0 { a } else { b })
            .collect();
        CubeLabeling::new(k, &labels)
    }

    /// The sub-cube on vertices extending the partial map `axes ↦ bits`.
    pub fn crsec(&self, axes: &[usize], bits: &[u8]) -> Result<CubeLabeling> {
        if axes.len() != bits.len() {
            return Err(Error::BadCrossSection(format!(
                "{} axes but {} values",
                axes.len(),
                bits.len()
            )));
        }
        if axes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::BadCrossSection(
                "axes must be strictly increasing".into(),
            ));
        }
        if let Some(&a) = axes.iter().find(|&&a| a >= self.dim) {
            return Err(Error::AxisOutOfRange {
                axis: a,
                dim: self.dim,
            });
        }
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::BadCrossSection("values must be 0 or 1".into()));
        }
        if axes.len() >= self.dim {
            return Err(Error::BadCrossSection("no axes left".into()));
        }
        let fixed: usize = axes
            .iter()
            .zip(bits)
            .map(|(&a, &b)| (b as usize) << a)
            .sum();
        let rest: Vec<usize> = (0..self.dim).filter(|a| !axes.contains(a)).collect();
        let labels: Tuple = (0..1usize << rest.len())
            .map(|h| self.labels[fixed | spread(h, &rest)])
            .collect();
        CubeLabeling::new(rest.len(), &labels)
    }

    /// The `(j)`-lines, split into supporting lines and the pivot line.
    pub fn lines_for_axis(&self, j: usize) -> Result<AxisLines> {
        if j >= self.dim {
            return Err(Error::AxisOutOfRange {
                axis: j,
                dim: self.dim,
            });
        }
        Ok(axis_lines(&self.labels, self.dim, j))
    }

    /// Parses `cube[a,…,h]` or `sq[a,b,c,d]` (or `line[a,b]`).
    pub fn parse(text: &str) -> Result<CubeLabeling> {
        let t = text.trim();
        let (dim, body) = if let Some(b) = t.strip_prefix("cube[") {
            (3, b)
        } else if let Some(b) = t.strip_prefix("sq[") {
            (2, b)
        } else if let Some(b) = t.strip_prefix("line[") {
            (1, b)
        } else {
            return Err(Error::Syntax {
                pos: 0,
                msg: "expected cube[…], sq[…] or line[…]".into(),
            });
        };
        let body = body.strip_suffix(']').ok_or_else(|| Error::Syntax {
            pos: t.len(),
            msg: "missing closing ']'".into(),
        })?;
        let labels = body
            .split(',')
            .map(|s| {
                s.trim().parse::<Elem>().map_err(|_| Error::Syntax {
                    pos: 0,
                    msg: format!("bad label {:?}", s.trim()),
                })
            })
            .collect::<Result<Vec<Elem>>>()?;
        CubeLabeling::new(dim, &labels)
    }

    pub fn check_universe(&self, size: usize) -> Result<()> {
        match self.labels.iter().find(|&&a| a as usize >= size) {
            Some(&a) => Err(Error::ElementOutOfRange {
                element: a as usize,
                size,
            }),
            None => Ok(()),
        }
    }
}

impl fmt::Display for CubeLabeling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let head = match self.dim {
            1 => "line",
            2 => "sq",
            _ => "cube",
        };
        let body: Vec<String> = self.labels.iter().map(|a| a.to_string()).collect();
        write!(f, "{head}[{}]", body.join(","))
    }
}

impl fmt::Debug for CubeLabeling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Places the bits of `h` on the given axes.
#[inline]
pub fn spread(h: usize, axes: &[usize]) -> usize {
    axes.iter()
        .enumerate()
        .map(|(t, &a)| (h >> t & 1) << a)
        .sum()
}

/// The `(j)`-lines of a cube.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxisLines {
    pub supporting: Vec<(Elem, Elem)>,
    pub pivot: (Elem, Elem),
}

/// Vertex pairs `(g, g + 2^j)` forming the `(j)`-lines of a `k`-cube, in order
/// of the residual index over the other axes. The last pair is the pivot.
pub fn line_vertices(k: usize, j: usize) -> Vec<(usize, usize)> {
    let rest: Vec<usize> = (0..k).filter(|&a| a != j).collect();
    (0..1usize << rest.len())
        .map(|h| {
            let g = spread(h, &rest);
            (g, g | 1 << j)
        })
        .collect()
}

pub(crate) fn axis_lines(labels: &[Elem], k: usize, j: usize) -> AxisLines {
    let mut lines: Vec<(Elem, Elem)> = line_vertices(k, j)
        .into_iter()
        .map(|(a, b)| (labels[a], labels[b]))
        .collect();
    let pivot = lines.pop().unwrap();
    AxisLines {
        supporting: lines,
        pivot,
    }
}

/// Generators of `M(T)`: every `cube_i^k(a, b)` with `a θ_i b`.
pub fn matrix_generators(thetas: &[Partition]) -> Result<TupleSet> {
    let k = thetas.len();
    if !(1..=3).contains(&k) {
        return Err(Error::Precondition(format!(
            "matrix dimension {k} not in 1..=3"
        )));
    }
    let mut gens = TupleSet::new(1 << k);
    for (i, theta) in thetas.iter().enumerate() {
        for (a, b) in theta.pairs() {
            let c = CubeLabeling::generator(k, i, a as Elem, b as Elem)?;
            gens.insert(c.labels())?;
        }
    }
    Ok(gens)
}

/// `M(θ_0, …, θ_{k-1})`, the subalgebra of `A^(2^k)` generated by the
/// `cube_i^k(a, b)` with `a θ_i b`.
pub fn matrix_algebra(
    alg: &FiniteAlgebra,
    thetas: &[Partition],
    cap: Option<usize>,
) -> Result<TupleSet> {
    for t in thetas {
        if t.size() != alg.size {
            return Err(Error::SizeMismatch(t.size(), alg.size));
        }
    }
    let gens = matrix_generators(thetas)?;
    generate_subpower(alg, 1 << thetas.len(), &gens, cap)
}

/// Relabels a cube by an axis permutation: new axis `perm[t]` carries old axis `t`.
pub fn permute_axes(labels: &[Elem], perm: &[usize]) -> Tuple {
    let k = perm.len();
    let mut out: Tuple = Tuple::from_elem(0, 1 << k);
    for (g, &v) in labels.iter().enumerate() {
        let h: usize = (0..k).map(|t| (g >> t & 1) << perm[t]).sum();
        out[h] = v;
    }
    out
}

/// An `n0 × n1 × n2` array whose 2×2×2 blocks are matrices. Axis 0 varies fastest.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Complex {
    pub dims: [usize; 3],
    pub labels: Vec<Elem>,
}

impl Complex {
    pub fn new(dims: [usize; 3], labels: Vec<Elem>) -> Result<Self> {
        if dims.iter().any(|&d| d < 2) {
            return Err(Error::Precondition(format!(
                "complex dimensions {dims:?} must be ≥ 2"
            )));
        }
        let len = dims.iter().product();
        if labels.len() != len {
            return Err(Error::WidthMismatch {
                expected: len,
                found: labels.len(),
            });
        }
        Ok(Complex { dims, labels })
    }

    /// Views a cube as a complex of dimensions (2,2,2).
    pub fn from_cube(cube: &[Elem]) -> Result<Self> {
        Complex::new([2, 2, 2], cube.to_vec())
    }

    #[inline]
    pub fn index(&self, p: [usize; 3]) -> usize {
        p[0] + self.dims[0] * (p[1] + self.dims[1] * p[2])
    }

    pub fn get(&self, p: [usize; 3]) -> Elem {
        self.labels[self.index(p)]
    }

    pub fn set(&mut self, p: [usize; 3], v: Elem) {
        let i = self.index(p);
        self.labels[i] = v;
    }

    /// The component matrix at offset `f`.
    pub fn component(&self, f: [usize; 3]) -> Tuple {
        (0..8)
            .map(|g| self.get([f[0] + (g & 1), f[1] + (g >> 1 & 1), f[2] + (g >> 2 & 1)]))
            .collect()
    }

    pub fn offsets(&self) -> impl Iterator<Item = [usize; 3]> {
        let d = self.dims;
        (0..d[2] - 1).flat_map(move |z| {
            (0..d[1] - 1).flat_map(move |y| (0..d[0] - 1).map(move |x| [x, y, z]))
        })
    }

    /// The 8 extreme vertices.
    pub fn corner(&self) -> Tuple {
        (0..8)
            .map(|g| {
                self.get([
                    (g & 1) * (self.dims[0] - 1),
                    (g >> 1 & 1) * (self.dims[1] - 1),
                    (g >> 2 & 1) * (self.dims[2] - 1),
                ])
            })
            .collect()
    }

    /// Glues two matrices along axis 2; errors if the shared face disagrees.
    pub fn stack2(bottom: &[Elem], top: &[Elem]) -> Result<Self> {
        if bottom[4..8] != top[0..4] {
            return Err(Error::Precondition("matrices do not share a face".into()));
        }
        let mut labels = bottom[0..8].to_vec();
        labels.extend_from_slice(&top[4..8]);
        Complex::new([2, 2, 3], labels)
    }
}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Complex{:?}{:?}", self.dims, self.labels)
    }
}

/// Checks every component matrix against `mt`; returns the first failing offset.
pub fn is_complex(c: &Complex, mt: &TupleSet) -> Option<[usize; 3]> {
    c.offsets().find(|&f| !mt.contains(&c.component(f)))
}

/// Pairs `(Square_l^0(m), Square_l^1(m))` for `m ∈ mt`.
pub fn square_pair_relation(mt: &TupleSet, l: usize) -> Result<FxHashSet<([Elem; 4], [Elem; 4])>> {
    if mt.width() != 8 {
        return Err(Error::WidthMismatch {
            expected: 8,
            found: mt.width(),
        });
    }
    if l >= 3 {
        return Err(Error::AxisOutOfRange { axis: l, dim: 3 });
    }
    let rest: Vec<usize> = (0..3).filter(|&a| a != l).collect();
    Ok(mt
        .iter()
        .map(|m| {
            let sq = |bit: usize| -> [Elem; 4] {
                std::array::from_fn(|h| m[spread(h, &rest) | bit << l])
            };
            (sq(0), sq(1))
        })
        .collect())
}

/// Depth-first enumeration of all complexes of the given dimensions.
///
/// Cells are filled in index order; a value is admitted only if, for every
/// block containing the cell, the labels filled so far extend to a member of
/// `mt`. Yields `Err(BoundExhausted)` once if more than `cap` complexes exist.
pub struct ComplexIter {
    dims: [usize; 3],
    /// `prefixes[v]` holds the length-`v+1` prefixes of members of `mt`.
    prefixes: Vec<FxHashSet<Tuple>>,
    cells: Vec<Elem>,
    candidates: Vec<Vec<Elem>>,
    cursor: Vec<usize>,
    size: usize,
    cap: usize,
    produced: usize,
    done: bool,
}

pub fn enumerate_complexes(
    size: usize,
    mt: &TupleSet,
    dims: [usize; 3],
    cap: usize,
) -> Result<ComplexIter> {
    if dims.iter().any(|&d| d < 2) {
        return Err(Error::Precondition(format!(
            "complex dimensions {dims:?} must be ≥ 2"
        )));
    }
    if mt.width() != 8 {
        return Err(Error::WidthMismatch {
            expected: 8,
            found: mt.width(),
        });
    }
    let mut prefixes = vec![FxHashSet::default(); 8];
    for m in mt.iter() {
        for (v, set) in prefixes.iter_mut().enumerate() {
            set.insert(Tuple::from_slice(&m[..=v]));
        }
    }
    let len = dims.iter().product();
    let mut it = ComplexIter {
        dims,
        prefixes,
        cells: vec![0; len],
        candidates: Vec::with_capacity(len),
        cursor: Vec::with_capacity(len),
        size,
        cap,
        produced: 0,
        done: false,
    };
    let first = it.candidates_for(0);
    it.candidates.push(first);
    it.cursor.push(0);
    Ok(it)
}

impl ComplexIter {
    fn coords(&self, i: usize) -> [usize; 3] {
        let d = self.dims;
        [i % d[0], i / d[0] % d[1], i / (d[0] * d[1])]
    }

    fn index(&self, p: [usize; 3]) -> usize {
        p[0] + self.dims[0] * (p[1] + self.dims[1] * p[2])
    }

    fn candidates_for(&self, i: usize) -> Vec<Elem> {
        let p = self.coords(i);
        let mut blocks = Vec::new();
        for g in 0..8usize {
            let bits = [g & 1, g >> 1 & 1, g >> 2 & 1];
            if (0..3).all(|a| p[a] >= bits[a] && p[a] - bits[a] + 1 < self.dims[a]) {
                let f = [p[0] - bits[0], p[1] - bits[1], p[2] - bits[2]];
                blocks.push((f, g));
            }
        }
        (0..self.size as Elem)
            .filter(|&v| {
                blocks.iter().all(|&(f, g)| {
                    let mut prefix: Tuple = (0..g)
                        .map(|h| {
                            self.cells[self.index([
                                f[0] + (h & 1),
                                f[1] + (h >> 1 & 1),
                                f[2] + (h >> 2 & 1),
                            ])]
                        })
                        .collect();
                    prefix.push(v);
                    self.prefixes[g].contains(&prefix)
                })
            })
            .collect()
    }
}

impl Iterator for ComplexIter {
    type Item = Result<Complex>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let len = self.cells.len();
        loop {
            let depth = self.cursor.len() - 1;
            let c = self.cursor[depth];
            if c >= self.candidates[depth].len() {
                self.candidates.pop();
                self.cursor.pop();
                if self.cursor.is_empty() {
                    self.done = true;
                    return None;
                }
                *self.cursor.last_mut().unwrap() += 1;
                continue;
            }
            self.cells[depth] = self.candidates[depth][c];
            if depth + 1 == len {
                self.cursor[depth] += 1;
                self.produced += 1;
                if self.produced > self.cap {
                    self.done = true;
                    return Some(Err(Error::BoundExhausted(format!(
                        "more than {} complexes of dimensions {:?}",
                        self.cap, self.dims
                    ))));
                }
                return Some(Ok(Complex {
                    dims: self.dims,
                    labels: self.cells.clone(),
                }));
            }
            let next = self.candidates_for(depth + 1);
            self.candidates.push(next);
            self.cursor.push(0);
        }
    }
}
