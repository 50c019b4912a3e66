use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("edge index {index} out of range for a graph with {m} edges")]
    EdgeOutOfRange { index: usize, m: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),

    #[error("graph has no edges; its Helmholtzian is the empty 0x0 matrix")]
    EmptyEdgeSet,

    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },

    #[error("orientation does not match the graph: {0}")]
    BadOrientation(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("empty matrix")]
    EmptyMatrix,

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("eigenvalues {a} and {b} are too close for a well-conditioned projector (gap {gap:e})")]
    IllConditionedProjector { a: f64, b: f64, gap: f64 },

    #[error("enumeration exceeded the work budget of {budget} partial states")]
    BudgetExceeded { budget: u64 },

    #[error("graph is not regular")]
    NotRegular,

    #[error("family spec: {0}")]
    InvalidFamily(String),

    #[error("no closed-form spectrum for family `{0}`")]
    NoClosedForm(String),

    #[error("seed graph is not {0}-integral")]
    SeedNotIntegral(&'static str),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("graph6: {0}")]
    Graph6(String),
}

pub type Result<T> = std::result::Result<T, Error>;
