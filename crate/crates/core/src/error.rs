use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("no factors given to disjoint union")]
    NoFactors,
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0} {1}")]
    DuplicateEdge(usize, usize),
}

/// Malformed graph input. `line` is 1-based; for graph6 input `byte` names
/// the offending byte offset within the encoded line.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Text { line: usize, message: String },
    #[error("graph6 byte {byte}: {message}")]
    Graph6 { byte: usize, message: String },
    #[error("empty input")]
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WlError {
    #[error("colouring is over {colouring} vertices but graph has {graph}")]
    SizeMismatch { colouring: usize, graph: usize },
    #[error("pair ({0}, {1}) is diagonal")]
    DiagonalPair(usize, usize),
    #[error("pair ({0}, {1}) is out of range")]
    PairOutOfRange(usize, usize),
    #[error("pair is not an edge of the product")]
    NotAnEdge,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("graph on {n} vertices exceeds the oracle bound {bound}; raise it with --max-degree")]
    BoundExceeded { n: usize, bound: usize },
    #[error("group of order {order} is too large to list explicitly (limit {limit})")]
    TooManyElements { order: u128, limit: u128 },
    #[error("wreath order inputs must be positive")]
    NonPositive,
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompositionError {
    #[error("graph is connected; the disjoint-union rules need a disconnected graph")]
    Connected,
    #[error("unmet hypothesis: {0}")]
    Hypothesis(String),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Umbrella error used by the front end.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Wl(#[from] WlError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Decomposition(#[from] DecompositionError),
    #[error("{0}")]
    Sweep(String),
}
