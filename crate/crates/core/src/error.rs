use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("empty input")]
    EmptyInput,

    #[error("point set is degenerate: affine dimension {affine_dim} in R^{dim}")]
    Degenerate { dim: usize, affine_dim: usize },

    #[error("the origin is not in the interior of the hull; translate the points first")]
    OriginNotInterior,

    #[error("zero vector is not a valid direction")]
    ZeroVector,

    #[error("point lies outside the polytope")]
    OutsidePolytope,

    #[error("polytope is not centered (centroid {centroid}); pass the non-centered override to proceed")]
    NotCentered { centroid: String },

    #[error("measure has {count} atoms, above the enumeration cap of {cap}")]
    TooManyAtoms { count: usize, cap: usize },

    #[error("equality diagnosis requested for a row that is not tight")]
    NotTight,

    #[error("lift depth {requested} exceeds the depth cap {cap}")]
    DepthCap { requested: usize, cap: usize },

    #[error("unknown canonical body `{0}`")]
    UnknownCanonical(String),

    #[error("invalid rational literal `{0}`")]
    InvalidLiteral(String),

    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),

    #[error("polytope generation failed after {attempts} attempts")]
    GenerationFailed { attempts: usize },

    #[error("index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("lift invariant violated: {0}")]
    LiftInvariant(String),
}
