use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("non-closed potential term `{term}`: {detail}")]
    NonClosedTerm { term: String, detail: String },
    #[error("duplicate arrow name `{0}`")]
    DuplicateArrow(String),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("unknown vertex `{vertex}` in {context}")]
    UnknownVertex { vertex: String, context: String },
    #[error("unknown arrow `{0}` in potential")]
    UnknownArrow(String),
    #[error("framing multiplicity {multiplicity} at vertex `{vertex}` is not supported (only 1)")]
    FramingMultiplicity { vertex: String, multiplicity: u64 },
    #[error("quiver has no framing")]
    MissingFraming,
    #[error("slope has no weight for arrow `{0}`")]
    MissingArrowWeight(String),
    #[error("slope has {got} weights but the quiver has {expected} arrows")]
    SlopeArity { expected: usize, got: usize },
    #[error("slope violates the potential term(s) {0}")]
    InvalidSlope(String),
    #[error("wall slope: elementary cycle `{cycle}` has weight 0")]
    WallSlope { cycle: String },
    #[error("fixed point not isolated for this slope (net invariant weight {0})")]
    NotIsolated(i64),
    #[error("non-confluent relations at depth {depth}: {detail}")]
    NonConfluent { depth: usize, detail: String },
    #[error("unsupported potential: {0}")]
    UnsupportedPotential(String),
    #[error("insufficient poset depth: built to {built}, need {needed}")]
    InsufficientDepth { built: usize, needed: usize },
    #[error("series order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
    #[error("projective factor {factor} repeats the weight {weight}")]
    RepeatedWeight { factor: usize, weight: i64 },
    #[error("projective factor {0} is empty")]
    EmptyFactor(usize),
    #[error("could not find a resolving perturbation for the slope")]
    Unresolvable,
    #[error("{0}")]
    Format(String),
}
