use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("not in determinant-class domain for this path: {0}")]
    NotInDomain(String),

    #[error("quadrature did not converge (last estimate {last}, previous {previous})")]
    NonConvergence { last: f64, previous: f64 },

    #[error("rank probes disagree: {0:?}")]
    RankDisagreement(Vec<usize>),

    #[error("interpolation needs {needed} samples but only {samples} were allowed")]
    DegreeBoundOverflow { needed: usize, samples: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("inconsistent diagram: {0}")]
    Diagram(String),

    #[error("link closures unsupported ({0} components)")]
    LinkClosure(usize),

    #[error("presentation degenerate: {0}")]
    Degenerate(String),

    #[error("boundary composition residual {0:e} exceeds tolerance")]
    BoundaryResidual(f64),

    #[error("b^(2) nonvanishing, torsion undefined as nonzero value")]
    TorusUndefined,

    #[error("not an admissible triple: {0}")]
    NotAdmissible(String),

    #[error("non-acyclic specialization, symmetry vacuous (both sides zero) at t = {0}")]
    Vacuous(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
