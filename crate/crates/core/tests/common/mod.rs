//! Brute-force reference implementations shared by integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use ualg_core::{Elem, FiniteAlgebra, Partition};

/// All set partitions of `0..n` via restricted growth strings.
pub fn all_partitions(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    loop {
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (x, &b) in rgs.iter().enumerate() {
            if b == blocks.len() {
                blocks.push(Vec::new());
            }
            blocks[b].push(x);
        }
        out.push(Partition::from_blocks(n, &blocks).unwrap());
        // next restricted growth string
        let mut i = n;
        loop {
            if i <= 1 {
                return out;
            }
            i -= 1;
            let max_prefix = rgs[..i].iter().copied().max().unwrap_or(0);
            if rgs[i] <= max_prefix {
                rgs[i] += 1;
                for r in rgs.iter_mut().skip(i + 1) {
                    *r = 0;
                }
                break;
            }
        }
    }
}

fn arg_tuples(n: usize, r: usize) -> Vec<Vec<Elem>> {
    let mut out = vec![vec![]];
    for _ in 0..r {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n as Elem).map(move |a| {
                    let mut t = t.clone();
                    t.push(a);
                    t
                })
            })
            .collect();
    }
    out
}

/// Compatibility by changing one argument at a time.
pub fn naive_is_congruence(alg: &FiniteAlgebra, p: &Partition) -> bool {
    for (k, op) in alg.operations.iter().enumerate() {
        for args in arg_tuples(alg.size, op.arity) {
            let base = alg.apply(k, &args);
            for pos in 0..op.arity {
                for b in 0..alg.size as Elem {
                    if p.related(args[pos] as usize, b as usize) {
                        let mut other = args.clone();
                        other[pos] = b;
                        if !p.related(base as usize, alg.apply(k, &other) as usize) {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

pub fn brute_lattice(alg: &FiniteAlgebra) -> Vec<Partition> {
    all_partitions(alg.size)
        .into_iter()
        .filter(|p| naive_is_congruence(alg, p))
        .collect()
}

/// Intersection of relations, computed pairwise.
pub fn naive_meet(n: usize, parts: &[&Partition]) -> Partition {
    let pairs = (0..n).flat_map(|a| (0..n).map(move |b| (a, b)));
    let kept: Vec<(usize, usize)> = pairs
        .filter(|&(a, b)| parts.iter().all(|p| p.related(a, b)))
        .collect();
    Partition::from_pairs(n, kept).unwrap()
}

pub fn naive_le(a: &Partition, b: &Partition) -> bool {
    let n = a.size();
    (0..n).all(|x| (0..n).all(|y| !a.related(x, y) || b.related(x, y)))
}

/// Least member of `lattice` containing all pairs.
pub fn brute_cg(alg: &FiniteAlgebra, lattice: &[Partition], pairs: &[(usize, usize)]) -> Partition {
    let above: Vec<&Partition> = lattice
        .iter()
        .filter(|p| pairs.iter().all(|&(a, b)| p.related(a, b)))
        .collect();
    naive_meet(alg.size, &above)
}

/// Searches for `a < c` and `b` with equal joins and meets with `b`.
pub fn brute_pentagon(lattice: &[Partition]) -> Option<(usize, usize, usize)> {
    let n = lattice[0].size();
    let join = |x: &Partition, y: &Partition| -> Partition {
        let ups: Vec<&Partition> = lattice
            .iter()
            .filter(|z| naive_le(x, z) && naive_le(y, z))
            .collect();
        naive_meet(n, &ups)
    };
    for (ia, a) in lattice.iter().enumerate() {
        for (ic, c) in lattice.iter().enumerate() {
            if ia == ic || !naive_le(a, c) {
                continue;
            }
            for (ib, b) in lattice.iter().enumerate() {
                if naive_meet(n, &[a, b]) == naive_meet(n, &[c, b]) && join(a, b) == join(c, b) {
                    return Some((ia, ib, ic));
                }
            }
        }
    }
    None
}

/// Closure of `gens` under the operations. Each round applies operations to
/// argument lists containing at least one tuple found in the previous round.
pub fn naive_closure(
    alg: &FiniteAlgebra,
    gens: impl IntoIterator<Item = Vec<Elem>>,
) -> BTreeSet<Vec<Elem>> {
    let mut members: Vec<Vec<Elem>> = Vec::new();
    let mut seen: std::collections::HashSet<Vec<Elem>> = std::collections::HashSet::new();
    for g in gens {
        if seen.insert(g.clone()) {
            members.push(g);
        }
    }
    let width = members.first().map_or(0, |t| t.len());
    for op in alg.operations.iter().filter(|o| o.arity == 0) {
        let c = vec![op.table[0]; width];
        if seen.insert(c.clone()) {
            members.push(c);
        }
    }
    let mut old = 0;
    while old < members.len() {
        let m = members.len();
        for (k, op) in alg.operations.iter().enumerate() {
            let r = op.arity;
            for first_new in 0..r {
                // ranges: before first_new old only, at first_new new only, after anything
                let lo = |p: usize| if p == first_new { old } else { 0 };
                let hi = |p: usize| if p < first_new { old } else { m };
                if (0..r).any(|p| lo(p) >= hi(p)) {
                    continue;
                }
                let mut idx: Vec<usize> = (0..r).map(lo).collect();
                'combos: loop {
                    let t: Vec<Elem> = (0..width)
                        .map(|c| {
                            let args: Vec<Elem> = idx.iter().map(|&i| members[i][c]).collect();
                            alg.apply(k, &args)
                        })
                        .collect();
                    if seen.insert(t.clone()) {
                        members.push(t);
                    }
                    let mut pos = r;
                    loop {
                        if pos == 0 {
                            break 'combos;
                        }
                        pos -= 1;
                        idx[pos] += 1;
                        if idx[pos] < hi(pos) {
                            break;
                        }
                        idx[pos] = lo(pos);
                    }
                }
            }
        }
        old = m;
    }
    members.into_iter().collect()
}

/// `M(T)` from its definition: vertex `v` of generator `i` is `b` when bit `i` of `v` is set.
pub fn naive_matrices(alg: &FiniteAlgebra, thetas: &[Partition]) -> BTreeSet<Vec<Elem>> {
    let k = thetas.len();
    let mut gens = Vec::new();
    for (i, t) in thetas.iter().enumerate() {
        for a in 0..alg.size {
            for b in 0..alg.size {
                if t.related(a, b) {
                    gens.push(
                        (0..1usize << k)
                            .map(|v| if v >> i & 1 == 1 { b } else { a } as Elem)
                            .collect(),
                    );
                }
            }
        }
    }
    naive_closure(alg, gens)
}

/// Term condition checked directly: lines along axis `j` pair vertex `v`
/// (bit `j` clear) with `v | 1 << j`; the pivot has every other bit set.
pub fn naive_tc(mt: &BTreeSet<Vec<Elem>>, k: usize, j: usize, delta: &Partition) -> bool {
    let full = (1usize << k) - 1;
    let pivot_base = full & !(1 << j);
    mt.iter().all(|m| {
        let mut supporting_ok = true;
        let mut pivot_ok = true;
        for v in 0..1usize << k {
            if v >> j & 1 == 1 {
                continue;
            }
            let ok = delta.related(m[v] as usize, m[v | 1 << j] as usize);
            if v == pivot_base {
                pivot_ok = ok;
            } else {
                supporting_ok &= ok;
            }
        }
        !supporting_ok || pivot_ok
    })
}

/// The least congruence of the subalgebra `carrier` containing `gens`, as a
/// set of concatenated pairs. Every merge is pushed through all unary
/// translations `f(c_1, …, x, …, c_r)` with constants from the carrier.
pub fn naive_congruence_on(
    alg: &FiniteAlgebra,
    carrier: &BTreeSet<Vec<Elem>>,
    gens: &[(Vec<Elem>, Vec<Elem>)],
) -> BTreeSet<Vec<Elem>> {
    let items: Vec<&Vec<Elem>> = carrier.iter().collect();
    let index: BTreeMap<&Vec<Elem>, usize> =
        items.iter().enumerate().map(|(i, t)| (*t, i)).collect();
    let n = items.len();
    let width = items[0].len();
    let mut class: Vec<usize> = (0..n).collect();
    fn find(class: &mut [usize], mut x: usize) -> usize {
        while class[x] != x {
            x = class[x];
        }
        x
    }
    let mut work: Vec<(usize, usize)> = gens.iter().map(|(a, b)| (index[a], index[b])).collect();
    let all: Vec<usize> = (0..n).collect();
    while let Some((a, b)) = work.pop() {
        let (ra, rb) = (find(&mut class, a), find(&mut class, b));
        if ra == rb {
            continue;
        }
        class[ra.max(rb)] = ra.min(rb);
        for (k, op) in alg.operations.iter().enumerate() {
            if op.arity == 0 {
                continue;
            }
            for pos in 0..op.arity {
                for others in tuples_of(&all, op.arity - 1) {
                    let apply = |x: usize| -> usize {
                        let t: Vec<Elem> = (0..width)
                            .map(|c| {
                                let mut args: Vec<Elem> =
                                    others.iter().map(|&i| items[i][c]).collect();
                                args.insert(pos, items[x][c]);
                                alg.apply(k, &args)
                            })
                            .collect();
                        index[&t]
                    };
                    work.push((apply(a), apply(b)));
                }
            }
        }
    }
    let roots: Vec<usize> = (0..n).map(|x| find(&mut class, x)).collect();
    let mut out = BTreeSet::new();
    for a in 0..n {
        for b in 0..n {
            if roots[a] == roots[b] {
                let mut t = items[a].clone();
                t.extend_from_slice(items[b]);
                out.insert(t);
            }
        }
    }
    out
}

/// Binary Δ from its definition: the congruence on `θ0` (as pairs) generated
/// by the diagonal pairs of `θ1`. Square `[a, b, c, d]` pairs `(a, b)` with `(c, d)`.
pub fn naive_delta_binary(
    alg: &FiniteAlgebra,
    t0: &Partition,
    t1: &Partition,
) -> BTreeSet<Vec<Elem>> {
    let carrier: BTreeSet<Vec<Elem>> = t0
        .pairs()
        .map(|(a, b)| vec![a as Elem, b as Elem])
        .collect();
    let gens: Vec<(Vec<Elem>, Vec<Elem>)> = t1
        .pairs()
        .map(|(x, y)| (vec![x as Elem, x as Elem], vec![y as Elem, y as Elem]))
        .collect();
    naive_congruence_on(alg, &carrier, &gens)
}

/// Ternary Δ in axis order (0, 1, 2): the congruence on `Δ_{θ0,θ1}` generated
/// by pairs of constant squares `x θ2 y`. Cube = first square then second.
pub fn naive_delta_ternary(alg: &FiniteAlgebra, thetas: &[Partition]) -> BTreeSet<Vec<Elem>> {
    let carrier = naive_delta_binary(alg, &thetas[0], &thetas[1]);
    let gens: Vec<(Vec<Elem>, Vec<Elem>)> = thetas[2]
        .pairs()
        .map(|(x, y)| (vec![x as Elem; 4], vec![y as Elem; 4]))
        .collect();
    naive_congruence_on(alg, &carrier, &gens)
}

/// Every tuple of length `k` over `items`.
pub fn tuples_of<T: Clone>(items: &[T], k: usize) -> Vec<Vec<T>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t: Vec<T>| {
                items.iter().map(move |x| {
                    let mut t = t.clone();
                    t.push(x.clone());
                    t
                })
            })
            .collect();
    }
    out
}
