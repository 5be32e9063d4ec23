use thiserror::Error;

/// Errors produced by the geometric routines and solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate segment")]
    DegenerateSegment,
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("unsupported dimension {0} (expected 2 or 3)")]
    UnsupportedDimension(usize),
    #[error("operation requires planar input")]
    NonPlanar,
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("invalid network: {0}")]
    InvalidNetwork(String),
    #[error("invalid topology: {0}")]
    InvalidTopology(String),
    #[error("empty network")]
    EmptyNetwork,
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("{what} out of range: {value} (allowed {allowed})")]
    OutOfRange {
        what: &'static str,
        value: i64,
        allowed: &'static str,
    },
    #[error("self-intersecting curve")]
    SelfIntersecting,
    #[error("topology mismatch")]
    TopologyMismatch,
    #[error("constraint disks {0} and {1} intersect")]
    IntersectingDisks(usize, usize),
    #[error("tied Steiner trees ({0} optima)")]
    TiedSteinerTrees(usize),
    #[error("Steiner tree is not full")]
    NonFullSteinerTree,
    #[error("radius {r} is not below the shortest terminal leg {q}")]
    RadiusTooLarge { r: f64, q: f64 },
    #[error("N = {0} is too small for the corner construction: {1}")]
    CornerNTooSmall(u32, String),
    #[error("input is disconnected")]
    Disconnected,
    #[error("schema error: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
