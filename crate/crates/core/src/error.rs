use thiserror::Error;

/// Errors produced by the algebra library.
///
/// Resource errors (`ClosureCap`, `BoundExhausted`, `TableTooLarge`) are kept
/// apart from input errors so callers can tell a bounded search that ran out
/// of budget from a malformed request.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed algebra document: {0}")]
    Malformed(String),
    #[error("operation {index} ({symbol:?}): table length {found} != {expected}")]
    TableLength {
        index: usize,
        symbol: String,
        found: usize,
        expected: usize,
    },
    #[error("operation {index} ({symbol:?}): entry {entry} has value {value} outside universe of size {size}")]
    EntryOutOfRange {
        index: usize,
        symbol: String,
        entry: usize,
        value: u64,
        size: usize,
    },
    #[error("operation {index}: duplicate symbol {symbol:?}")]
    DuplicateSymbol { index: usize, symbol: String },
    #[error("algebra size must be between 1 and {max}, got {size}")]
    BadSize { size: usize, max: usize },
    #[error("unknown operation symbol {0:?}")]
    UnknownSymbol(String),
    #[error("unbound variable {0:?}")]
    UnboundVariable(String),
    #[error("operation {symbol:?} has arity {expected}, got {found} arguments")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("element {element} outside universe of size {size}")]
    ElementOutOfRange { element: usize, size: usize },
    #[error("tuple width {found} does not match expected width {expected}")]
    WidthMismatch { expected: usize, found: usize },
    #[error("universe sizes differ: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("closure exceeded cap of {cap} tuples")]
    ClosureCap { cap: usize },
    #[error("operation table would need {entries} entries (limit {limit})")]
    TableTooLarge { entries: u128, limit: usize },
    #[error("bounded search exhausted: {0}")]
    BoundExhausted(String),
    #[error("universe not closed: {0}")]
    NotClosed(String),
    #[error("axis {axis} out of range for dimension {dim}")]
    AxisOutOfRange { axis: usize, dim: usize },
    #[error("invalid cross-section: {0}")]
    BadCrossSection(String),
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
}

impl Error {
    /// True for errors that come from hitting a configured budget.
    pub fn is_resource(&self) -> bool {
        matches!(
            self,
            Error::ClosureCap { .. } | Error::TableTooLarge { .. } | Error::BoundExhausted(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
