use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("node index {index} out of range for a graph with {n} nodes")]
    NodeOutOfRange { index: usize, n: usize },

    #[error("self-loop edge ({0}, {0}) rejected: the graph is simple")]
    SelfLoop(usize),

    #[error("vector length {got} does not match node count {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("degenerate fit: squared norm of the propagated response is {norm_sq:e}")]
    DegenerateFit { norm_sq: f64 },

    #[error("operator kind mismatch: expected {expected}, got {got}")]
    KindMismatch { expected: &'static str, got: &'static str },

    #[error("walk enumeration would exceed the cap: estimated {estimated} walks > cap {cap}")]
    WalkExplosion { estimated: u128, cap: u64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("topology precondition violated: {0}")]
    TopologyPrecondition(String),

    #[error("generated graph stayed disconnected after {0} attempts")]
    DisconnectedAfterRetries(usize),

    #[error("roughness is undefined on a graph with no edges")]
    EdgelessGraph,

    #[error("graph too large for the dense eigensolver: {n} nodes > cap {cap}")]
    TooLargeForDenseEigen { n: usize, cap: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
