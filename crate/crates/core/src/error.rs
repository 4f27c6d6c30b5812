use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("group too large: order {order} exceeds the limit of {limit}")]
    GroupTooLarge { order: usize, limit: usize },
    #[error("operation requires a finite group")]
    InfiniteGroup,
    #[error("element {0} is not a valid element of the group")]
    InvalidElement(String),
    #[error("result leaves the free-abelian window [-{window}, {window}]")]
    WindowOverflow { window: i64 },
    #[error("generator has infinite order; closure does not terminate")]
    InfiniteOrder,
    #[error("invalid operation table: {0}")]
    InvalidTable(String),
    #[error("invalid homomorphism: {0}")]
    InvalidHomomorphism(String),
    #[error("group is not abelian")]
    NotAbelian,
    #[error("subset is not a subgroup")]
    NotSubgroup,
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("the identity element lies in B")]
    IdentityInB,
    #[error("duplicate element {0}")]
    DuplicateElement(String),
    #[error("empty input")]
    Empty,
    #[error("size {size} exceeds the enumeration limit of {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("a matching exists; there is no Hall violator")]
    MatchingExists,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("ambient mismatch")]
    AmbientMismatch,
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("element is not invertible")]
    NotInvertible,
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("not a unital subalgebra: {0}")]
    NotSubalgebra(String),
    #[error("vectors are linearly dependent")]
    Dependent,
    #[error("unity lies in B")]
    UnityInB,
    #[error("no strong matching exists (AB meets A)")]
    NoStrongMatching,
    #[error("could not decide whether AB meets A")]
    Undetermined,
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
    #[error("parse error: {0}")]
    Parse(String),
}
