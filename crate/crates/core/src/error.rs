use alloc::string::String;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("target {target} out of range (graph has {vertices} vertices)")]
    TargetOutOfRange { target: usize, vertices: usize },
    #[error("vertex {vertex} has out-degree {found}, expected {expected}")]
    OutDegree {
        vertex: usize,
        expected: usize,
        found: usize,
    },
    #[error("not a Nambu micro-graph: {0}")]
    NotNambu(String),
    #[error("invalid role table: {0}")]
    Roles(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("bracket of arity {arity} does not fit in dimension {dim}")]
    ArityOverflow { arity: usize, dim: usize },
    #[error("graph sum is not in the (n, 2n-2) grading: {vertices} vertices, {edges} edges")]
    Grading { vertices: usize, edges: usize },
    #[error("unsupported number of sinks: {0}")]
    Sinks(usize),
    #[error("not a graph cocycle: differential has {0} surviving terms")]
    NotCocycle(usize),
    #[error("infeasible signature: {0}")]
    Infeasible(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = core::result::Result<T, Error>;
