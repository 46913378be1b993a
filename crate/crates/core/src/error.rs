use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },

    #[error("line {line}: vertex id {id} out of range 1..={n}")]
    VertexOutOfRange { line: usize, id: usize, n: usize },

    #[error("line {line}: self-loop at vertex {id}")]
    SelfLoop { line: usize, id: usize },

    #[error("missing `p dig <n> <m>` header")]
    MissingHeader,

    #[error("header declares {declared} arc lines but {found} were given")]
    ArcCountMismatch { declared: usize, found: usize },
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("no out-branching: {} source strong components (e.g. containing {:?})", .components.len(), .components.iter().map(|c| c[0]).collect::<Vec<_>>())]
    NoOutBranching { components: Vec<Vec<usize>> },

    #[error("vertex {vertex} is not reachable from root {root}")]
    Unreachable { root: usize, vertex: usize },

    #[error("contract violation: {0}")]
    Contract(String),
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("invalid generator parameters: {0}")]
    InvalidParameters(String),

    #[error("rejection sampling gave up after {attempts} attempts at vertex {vertex}")]
    SamplingExhausted { vertex: usize, attempts: usize },
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum DecomposeError {
    #[error(transparent)]
    Graph(#[from] GraphError),

    /// An internal bound was violated; this indicates a bug.
    #[error("invariant failure: {0}")]
    Invariant(String),
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("oracle refused: {n} vertices exceeds the limit of {limit}")]
    OracleBudget { n: usize, limit: usize },

    #[error("dynamic program over budget: {0}")]
    OverBudget(String),

    #[error("branch and bound aborted after {0} nodes")]
    NodeBudget(u64),

    #[error("invalid path decomposition: {0}")]
    InvalidDecomposition(String),

    #[error(transparent)]
    Decompose(#[from] DecomposeError),

    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum BoundsError {
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error(transparent)]
    Gen(#[from] GenError),

    #[error(transparent)]
    Solve(#[from] SolveError),

    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Syntax(String),

    #[error("unexpected JSON shape: {0}")]
    Shape(String),
}

impl From<serde_json::Error> for JsonError {
    fn from(e: serde_json::Error) -> Self {
        JsonError::Syntax(e.to_string())
    }
}
