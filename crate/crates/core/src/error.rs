use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid Lee sphere: dimension must be at least 1")]
    InvalidSphere,

    #[error("invalid invariant factors {factors:?}: {reason}")]
    InvalidGroup { factors: Vec<u64>, reason: String },

    #[error("cannot parse group spec {0:?}")]
    GroupSpec(String),

    #[error("cannot parse group element {0:?}")]
    ElementSpec(String),

    #[error("element {element:?} does not belong to the group with invariant factors {factors:?}")]
    ForeignElement {
        element: Vec<u64>,
        factors: Vec<u64>,
    },

    #[error("group mismatch: {left:?} vs {right:?}")]
    GroupMismatch { left: Vec<u64>, right: Vec<u64> },

    #[error("duplicate element {0:?} in set input")]
    DuplicateElement(Vec<u64>),

    #[error("order {order} too large to factor (bound {bound})")]
    OrderTooLarge { order: u64, bound: u64 },

    #[error("order must be positive")]
    ZeroOrder,

    #[error("matrix must be square and non-empty")]
    NotSquare,

    #[error("singular matrix")]
    Singular,

    #[error("quotient group does not fit in 64-bit residues")]
    QuotientTooLarge,

    #[error("determinant mismatch: |det| = {actual}, expected {expected}")]
    DeterminantMismatch { expected: String, actual: String },

    #[error("arm collision: the images of the standard basis vectors give only {distinct} distinct elements, expected {expected}")]
    ArmCollision { distinct: usize, expected: usize },

    #[error("pair multiplicity is undefined at the identity")]
    IdentityNotAllowed,

    #[error("candidate rejected: {0}")]
    Rejected(String),

    #[error("power-map exponent must be 2 or 4, got {0}")]
    UnsupportedExponent(i64),

    #[error("group order {order} does not equal 2n^2+2n+1 = {expected} for n = {n}")]
    OrderMismatch { order: u64, expected: u64, n: u64 },

    #[error("predicted profile for n = {n}: {what} is not integral")]
    NonIntegral { n: u64, what: &'static str },

    #[error("n = {n} requires an explicit node budget")]
    BudgetRequired { n: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}
