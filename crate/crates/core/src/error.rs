use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("unsupported field order {0}: need a prime <= 251 or 2^m with m <= 8")]
    UnsupportedOrder(usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("entry {value} is not an element of GF({q})")]
    InvalidEntry { value: u32, q: usize },
    #[error("subspace dimension {sub} out of range for ambient dimension {ambient}")]
    SubspaceDim { ambient: usize, sub: usize },
    #[error("matrix is singular")]
    Singular,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("invalid code parameters: {0}")]
    InvalidParams(String),
    #[error("field GF({q}) too small for a length-{n} Reed-Solomon code")]
    FieldTooSmall { q: usize, n: usize },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("need {needed} distinct nodes to decode, got {got}")]
    TooFewNodes { needed: usize, got: usize },
    #[error("node index {0} out of range")]
    NodeOutOfRange(usize),
    #[error("supplied symbols are not a restriction of any codeword (node {node})")]
    Corrupted { node: usize },
    #[error("selected nodes do not determine the message (code is not MDS)")]
    NotDecodable,
    #[error(transparent)]
    Gf(#[from] GfError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParamError {
    #[error("split regime needs lambda_f >= 2, got {0}")]
    LambdaTooSmall(usize),
    #[error("k_f must be >= 1")]
    ZeroDimension,
    #[error("alpha must be >= 1")]
    ZeroAlpha,
    #[error("field order {q} is below max(n_i, n_f) = {needed}")]
    FieldTooSmall { q: usize, needed: usize },
    #[error("scheme does not match parameters: {0}")]
    SchemeShape(String),
    #[error(transparent)]
    Gf(#[from] GfError),
    #[error(transparent)]
    Code(#[from] CodeError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("grid has {rows} points, above the cap of {cap}")]
    GridTooLarge { rows: usize, cap: usize },
}

#[derive(Debug, Error)]
pub enum ConversionError {
    #[error("conversion scheme is infeasible: final parities are not spanned by the downloads")]
    Infeasible,
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error(transparent)]
    Code(#[from] CodeError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("search budget exhausted after {visited} schemes (reached total dimension {level})")]
    BudgetExhausted { visited: u64, level: usize },
    #[error("no feasible scheme within total dimension {0}")]
    NoFeasibleScheme(usize),
}
