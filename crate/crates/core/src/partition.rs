//! Equivalence relations on `{0, …, n-1}`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Disjoint-set forest with path compression and union by size.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] as usize != root {
            root = self.parent[root] as usize;
        }
        let mut x = x;
        while self.parent[x] as usize != root {
            let next = self.parent[x] as usize;
            self.parent[x] = root as u32;
            x = next;
        }
        root
    }

    /// Merges the classes of `a` and `b`; returns true if they were distinct.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (big, small) = if self.size[ra] >= self.size[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[small] = big as u32;
        self.size[big] += self.size[small];
        true
    }

    pub fn into_partition(mut self) -> Partition {
        let n = self.len();
        let mut min_of_root = vec![u32::MAX; n];
        for x in 0..n {
            let r = self.find(x);
            if min_of_root[r] == u32::MAX {
                min_of_root[r] = x as u32;
            }
        }
        let reps = (0..n).map(|x| min_of_root[self.find(x)]).collect();
        Partition { reps }
    }
}

/// An equivalence relation stored canonically: each element maps to the least
/// element of its block. Equality of `Partition`s is equality of relations.
/// Serialized in block syntax, e.g. `"0 2 | 1 3"`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Partition {
    reps: Vec<u32>,
}

impl Partition {
    /// The identity relation `0_A`.
    pub fn zero(n: usize) -> Self {
        Partition {
            reps: (0..n as u32).collect(),
        }
    }

    /// The all relation `1_A`.
    pub fn one(n: usize) -> Self {
        Partition { reps: vec![0; n] }
    }

    pub fn from_pairs<I>(n: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut uf = UnionFind::new(n);
        for (a, b) in pairs {
            for x in [a, b] {
                if x >= n {
                    return Err(Error::ElementOutOfRange {
                        element: x,
                        size: n,
                    });
                }
            }
            uf.union(a, b);
        }
        Ok(uf.into_partition())
    }

    /// Builds a partition from blocks; unlisted elements become singletons.
    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut seen = vec![false; n];
        let mut pairs = Vec::new();
        for block in blocks {
            for &x in block {
                if x >= n {
                    return Err(Error::ElementOutOfRange {
                        element: x,
                        size: n,
                    });
                }
                if seen[x] {
                    return Err(Error::Precondition(format!(
                        "element {x} appears in more than one block"
                    )));
                }
                seen[x] = true;
                pairs.push((block[0], x));
            }
        }
        Partition::from_pairs(n, pairs)
    }

    pub fn size(&self) -> usize {
        self.reps.len()
    }

    #[inline]
    pub fn rep(&self, x: usize) -> usize {
        self.reps[x] as usize
    }

    #[inline]
    pub fn related(&self, a: usize, b: usize) -> bool {
        self.reps[a] == self.reps[b]
    }

    pub fn num_blocks(&self) -> usize {
        self.reps
            .iter()
            .enumerate()
            .filter(|&(i, &r)| i as u32 == r)
            .count()
    }

    pub fn is_zero(&self) -> bool {
        self.num_blocks() == self.size()
    }

    pub fn is_one(&self) -> bool {
        self.reps.iter().all(|&r| r == 0)
    }

    /// Blocks in order of their least element, each sorted.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let n = self.size();
        let mut slot = vec![usize::MAX; n];
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for x in 0..n {
            let r = self.rep(x);
            if slot[r] == usize::MAX {
                slot[r] = blocks.len();
                blocks.push(Vec::new());
            }
            blocks[slot[r]].push(x);
        }
        blocks
    }

    /// All ordered pairs `(a, b)` with `a ≡ b`, including the diagonal.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let blocks = self.blocks();
        blocks.into_iter().flat_map(|block| {
            let b2 = block.clone();
            block
                .into_iter()
                .flat_map(move |a| b2.clone().into_iter().map(move |b| (a, b)))
        })
    }

    /// Number of related ordered pairs.
    pub fn pair_count(&self) -> usize {
        self.blocks().iter().map(|b| b.len() * b.len()).sum()
    }

    fn check_size(&self, other: &Partition) -> Result<()> {
        if self.size() != other.size() {
            return Err(Error::SizeMismatch(self.size(), other.size()));
        }
        Ok(())
    }

    /// Refinement order: `self ≤ other` iff every `self`-pair is an `other`-pair.
    pub fn le(&self, other: &Partition) -> bool {
        self.size() == other.size() && (0..self.size()).all(|x| other.related(x, self.rep(x)))
    }

    pub fn meet(&self, other: &Partition) -> Result<Partition> {
        self.check_size(other)?;
        let n = self.size();
        let mut first: rustc_hash::FxHashMap<(u32, u32), u32> = Default::default();
        let reps = (0..n)
            .map(|x| {
                *first
                    .entry((self.reps[x], other.reps[x]))
                    .or_insert(x as u32)
            })
            .collect();
        Ok(Partition { reps })
    }

    pub fn join(&self, other: &Partition) -> Result<Partition> {
        self.check_size(other)?;
        let n = self.size();
        let mut uf = UnionFind::new(n);
        for x in 0..n {
            uf.union(x, self.rep(x));
            uf.union(x, other.rep(x));
        }
        Ok(uf.into_partition())
    }

    pub fn to_union_find(&self) -> UnionFind {
        let mut uf = UnionFind::new(self.size());
        for x in 0..self.size() {
            uf.union(x, self.rep(x));
        }
        uf
    }

    /// Parses block syntax such as `"0 2 | 1 3"`.
    pub fn parse_blocks(n: usize, text: &str) -> Result<Partition> {
        let mut blocks = Vec::new();
        for (i, part) in text.split('|').enumerate() {
            let mut block = Vec::new();
            for tok in part.split_whitespace() {
                let x: usize = tok.parse().map_err(|_| Error::Syntax {
                    pos: i,
                    msg: format!("expected an element, found {tok:?}"),
                })?;
                block.push(x);
            }
            if !block.is_empty() {
                blocks.push(block);
            }
        }
        Partition::from_blocks(n, &blocks)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self
            .blocks()
            .iter()
            .map(|b| {
                b.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        f.write_str(&blocks.join(" | "))
    }
}

impl From<Partition> for String {
    fn from(p: Partition) -> String {
        p.to_string()
    }
}

impl TryFrom<String> for Partition {
    type Error = Error;

    /// Every element must be listed, so the size is the number of entries.
    fn try_from(text: String) -> Result<Partition> {
        let n = text
            .split(|c: char| c == '|' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .count();
        Partition::parse_blocks(n, &text)
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition({self})")
    }
}
