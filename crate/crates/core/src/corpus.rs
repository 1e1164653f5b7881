//! The bundled example algebras.

use crate::algebra::FiniteAlgebra;

/// Name and JSON document of every bundled algebra.
pub const DOCUMENTS: &[(&str, &str)] = &[
    ("z4", include_str!("../algebras/z4.json")),
    ("s3", include_str!("../algebras/s3.json")),
    ("l22", include_str!("../algebras/l22.json")),
    ("set4", include_str!("../algebras/set4.json")),
    ("e1", include_str!("../algebras/e1.json")),
];

/// Term files shipped with some bundled algebras.
pub const TERM_FILES: &[(&str, &str)] = &[
    ("z4", include_str!("../algebras/z4.terms")),
    ("s3", include_str!("../algebras/s3.terms")),
    ("l22", include_str!("../algebras/l22.terms")),
];

/// The bundled term file of an algebra, if any.
pub fn terms_by_name(name: &str) -> Option<&'static str> {
    let key = name.to_ascii_lowercase();
    TERM_FILES.iter().find(|(n, _)| *n == key).map(|(_, t)| *t)
}

/// Loads a bundled algebra by its short name.
pub fn by_name(name: &str) -> Option<FiniteAlgebra> {
    let key = name.to_ascii_lowercase();
    DOCUMENTS
        .iter()
        .find(|(n, _)| *n == key)
        .map(|(_, doc)| FiniteAlgebra::from_json(doc).expect("bundled algebra is valid"))
}

/// The cyclic group of order 4 with `+`, `-`, `0`.
pub fn z4() -> FiniteAlgebra {
    by_name("z4").unwrap()
}

/// The symmetric group on three letters with `*`, `inv`, `e`.
///
/// Elements are the permutations of `{0,1,2}` in lexicographic order, so the
/// alternating subgroup is `{0, 3, 4}`.
pub fn s3() -> FiniteAlgebra {
    by_name("s3").unwrap()
}

/// The four-element Boolean lattice `2 × 2`; element `x + 2y` stands for `(x, y)`.
pub fn l22() -> FiniteAlgebra {
    by_name("l22").unwrap()
}

/// A four-element set with no operations.
pub fn set4() -> FiniteAlgebra {
    by_name("set4").unwrap()
}

/// A one-element algebra.
pub fn e1() -> FiniteAlgebra {
    by_name("e1").unwrap()
}
