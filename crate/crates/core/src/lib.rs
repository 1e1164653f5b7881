//! Finite universal algebra: congruences, matrices and higher commutators.

pub mod algebra;
pub mod congruence;
pub mod corpus;
pub mod cube;
pub mod engine;
pub mod error;
pub mod identities;
pub mod partition;
pub mod term;
pub mod tuples;

pub use algebra::{Elem, FiniteAlgebra, OperationTable};
pub use congruence::{cg, is_congruence, CongruenceLattice};
pub use cube::{Complex, CubeLabeling};
pub use engine::{Engine, Route};
pub use error::{Error, Result};
pub use identities::{DaySearch, DaySequence};
pub use partition::Partition;
pub use term::{Term, TermFn};
pub use tuples::{generate_subpower, SubAlgebraView, Tuple, TupleSet};
