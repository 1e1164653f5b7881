//! Finite algebras given by total operation tables.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element of a finite universe `{0, …, n-1}`.
pub type Elem = u16;

/// Largest supported universe size.
pub const MAX_UNIVERSE: usize = 1 << 16;

/// Upper bound on the number of entries of a materialized operation table.
pub const MAX_TABLE_ENTRIES: usize = 1 << 27;

/// A basic operation of a finite algebra.
///
/// The table is row-major: arguments `(a_0, …, a_{r-1})` live at index
/// `Σ a_i · n^(r-1-i)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperationTable {
    pub symbol: String,
    pub arity: usize,
    pub table: Vec<Elem>,
}

impl OperationTable {
    #[inline]
    pub fn index_of(&self, size: usize, args: &[Elem]) -> usize {
        args.iter().fold(0usize, |acc, &a| acc * size + a as usize)
    }

    /// Builds a table by evaluating `f` on every argument tuple in row-major order.
    pub fn from_fn(
        symbol: impl Into<String>,
        arity: usize,
        size: usize,
        mut f: impl FnMut(&[Elem]) -> Elem,
    ) -> Result<Self> {
        let entries = table_entries(size, arity)?;
        let mut table = Vec::with_capacity(entries);
        let mut args = vec![0 as Elem; arity];
        for _ in 0..entries {
            table.push(f(&args));
            for pos in (0..arity).rev() {
                args[pos] += 1;
                if (args[pos] as usize) < size {
                    break;
                }
                args[pos] = 0;
            }
        }
        Ok(OperationTable {
            symbol: symbol.into(),
            arity,
            table,
        })
    }
}

/// Number of entries a table of the given arity needs, or a resource error.
pub fn table_entries(size: usize, arity: usize) -> Result<usize> {
    let entries = (size as u128).pow(arity as u32);
    if entries > MAX_TABLE_ENTRIES as u128 {
        return Err(Error::TableTooLarge {
            entries,
            limit: MAX_TABLE_ENTRIES,
        });
    }
    Ok(entries as usize)
}

/// A finite algebra with universe `{0, …, size-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteAlgebra {
    pub name: String,
    pub size: usize,
    pub operations: Vec<OperationTable>,
}

#[derive(Deserialize)]
struct RawOperation {
    symbol: String,
    arity: usize,
    table: Vec<u64>,
}

#[derive(Deserialize)]
struct RawAlgebra {
    name: String,
    size: usize,
    operations: Vec<RawOperation>,
}

impl FiniteAlgebra {
    /// Validates and builds an algebra.
    pub fn new(
        name: impl Into<String>,
        size: usize,
        operations: Vec<OperationTable>,
    ) -> Result<Self> {
        if size == 0 || size > MAX_UNIVERSE {
            return Err(Error::BadSize {
                size,
                max: MAX_UNIVERSE,
            });
        }
        let mut seen = HashSet::new();
        for (index, op) in operations.iter().enumerate() {
            if !seen.insert(op.symbol.as_str()) {
                return Err(Error::DuplicateSymbol {
                    index,
                    symbol: op.symbol.clone(),
                });
            }
            let expected = table_entries(size, op.arity)?;
            if op.table.len() != expected {
                return Err(Error::TableLength {
                    index,
                    symbol: op.symbol.clone(),
                    found: op.table.len(),
                    expected,
                });
            }
            if let Some((entry, &value)) = op
                .table
                .iter()
                .enumerate()
                .find(|(_, &v)| v as usize >= size)
            {
                return Err(Error::EntryOutOfRange {
                    index,
                    symbol: op.symbol.clone(),
                    entry,
                    value: value as u64,
                    size,
                });
            }
        }
        Ok(FiniteAlgebra {
            name: name.into(),
            size,
            operations,
        })
    }

    /// Parses an algebra document.
    pub fn from_json(document: &str) -> Result<Self> {
        let raw: RawAlgebra =
            serde_json::from_str(document).map_err(|e| Error::Malformed(e.to_string()))?;
        if raw.size == 0 || raw.size > MAX_UNIVERSE {
            return Err(Error::BadSize {
                size: raw.size,
                max: MAX_UNIVERSE,
            });
        }
        let mut ops = Vec::with_capacity(raw.operations.len());
        for (index, op) in raw.operations.into_iter().enumerate() {
            if let Some((entry, &value)) = op
                .table
                .iter()
                .enumerate()
                .find(|(_, &v)| v >= raw.size as u64)
            {
                return Err(Error::EntryOutOfRange {
                    index,
                    symbol: op.symbol,
                    entry,
                    value,
                    size: raw.size,
                });
            }
            ops.push(OperationTable {
                symbol: op.symbol,
                arity: op.arity,
                table: op.table.into_iter().map(|v| v as Elem).collect(),
            });
        }
        FiniteAlgebra::new(raw.name, raw.size, ops)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("algebra serializes")
    }

    pub fn operation(&self, symbol: &str) -> Result<&OperationTable> {
        self.operations
            .iter()
            .find(|op| op.symbol == symbol)
            .ok_or_else(|| Error::UnknownSymbol(symbol.to_string()))
    }

    /// Evaluates a basic operation by table lookup.
    pub fn eval(&self, symbol: &str, args: &[Elem]) -> Result<Elem> {
        let op = self.operation(symbol)?;
        if op.arity != args.len() {
            return Err(Error::ArityMismatch {
                symbol: symbol.to_string(),
                expected: op.arity,
                found: args.len(),
            });
        }
        if let Some(&a) = args.iter().find(|&&a| a as usize >= self.size) {
            return Err(Error::ElementOutOfRange {
                element: a as usize,
                size: self.size,
            });
        }
        Ok(op.table[op.index_of(self.size, args)])
    }

    /// Table lookup without validation.
    #[inline]
    pub fn apply(&self, op: usize, args: &[Elem]) -> Elem {
        let op = &self.operations[op];
        op.table[op.index_of(self.size, args)]
    }

    #[inline]
    pub fn apply2(&self, op: usize, a: Elem, b: Elem) -> Elem {
        self.operations[op].table[a as usize * self.size + b as usize]
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.size).map(|a| a as Elem)
    }

    /// The values of all nullary operations.
    pub fn constants(&self) -> Vec<Elem> {
        self.operations
            .iter()
            .filter(|op| op.arity == 0)
            .map(|op| op.table[0])
            .collect()
    }

    /// True when `op` is binary and associative.
    pub fn is_associative(&self, op: usize) -> bool {
        let o = &self.operations[op];
        if o.arity != 2 {
            return false;
        }
        let n = self.size;
        if n > 64 {
            return false;
        }
        for a in 0..n {
            for b in 0..n {
                let ab = o.table[a * n + b] as usize;
                for c in 0..n {
                    let bc = o.table[b * n + c] as usize;
                    if o.table[ab * n + c] != o.table[a * n + bc] {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn is_commutative(&self, op: usize) -> bool {
        let o = &self.operations[op];
        let n = self.size;
        o.arity == 2 && (0..n).all(|a| (0..n).all(|b| o.table[a * n + b] == o.table[b * n + a]))
    }
}

impl fmt::Display for FiniteAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (size {}; ", self.name, self.size)?;
        let sig: Vec<String> = self
            .operations
            .iter()
            .map(|op| format!("{}/{}", op.symbol, op.arity))
            .collect();
        write!(f, "operations: {})", sig.join(", "))
    }
}
