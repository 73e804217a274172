use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("graph has no nodes")]
    EmptyGraph,

    #[error("nodes {first} and {second} are {distance:e} Å apart, below the minimum separation")]
    DuplicatePositions { first: usize, second: usize, distance: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("rotation is not in SO(3): {0}")]
    InvalidRotation(String),

    #[error("vector norm below {eps:e}")]
    ZeroVector { eps: f64 },

    #[error("reference points are collinear, dihedral undefined")]
    CollinearReference,

    #[error("local frame collapsed: {0}")]
    DegenerateFrame(&'static str),

    #[error("placed chain is collinear, rotation angle undefined")]
    DegenerateChain,

    #[error("graph is not connected ({reached} of {total} nodes reachable from node 0)")]
    DisconnectedGraph { reached: usize, total: usize },

    #[error("inconsistent tuples at node {node}: {detail}")]
    InconsistentTuples { node: usize, detail: String },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("topology mismatch: {0}")]
    TopologyMismatch(String),

    #[error("root finding failed for order {order}, root {index}")]
    ConvergenceFailure { order: usize, index: usize },

    #[error("invalid spherical harmonic degree: |m| = {m} exceeds l = {l}")]
    InvalidDegree { l: usize, m: i64 },

    #[error("distance {distance} exceeds basis cutoff {cutoff}")]
    OutOfCutoff { distance: f64, cutoff: f64 },

    #[error("unknown species code {0}")]
    UnknownSpecies(u32),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("calibration failed: {0}")]
    CalibrationFailure(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
