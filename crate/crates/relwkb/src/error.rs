use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid physical context: {0}")]
    InvalidContext(String),
    #[error("invalid tolerances: {0}")]
    InvalidTolerances(String),
    #[error("radius must be positive, got {radius}")]
    NonPositiveRadius { radius: f64 },
    #[error("radius {radius} outside table range [{min}, {max}]")]
    TableRange { radius: f64, min: f64, max: f64 },
    #[error("invalid potential table: {0}")]
    InvalidTable(String),
    #[error(
        "Coulomb coupling {coupling} too strong for angular factor {angular}; no centrifugal wall"
    )]
    CouplingTooStrong { coupling: f64, angular: f64 },
    #[error("classically forbidden at r = {radius} (radicand = {radicand:e})")]
    ClassicallyForbidden { radius: f64, radicand: f64 },
    #[error("no classically allowed region at E - mc^2 = {offset:e}")]
    NoBoundRegion { offset: f64 },
    #[error("{count} disjoint classically allowed intervals; only single wells are supported")]
    MultipleWells { count: usize },
    #[error(
        "classically allowed region touches the search boundary; motion is not a bounded libration"
    )]
    UnboundedMotion,
    #[error(
        "quadrature error estimate {estimate:e} exceeds budget {budget:e} at maximum refinement"
    )]
    QuadratureAccuracy { estimate: f64, budget: f64 },
    #[error("no level: radial action stays {side} the target {target} over the whole bound range")]
    NoRoot { target: f64, side: &'static str },
    #[error("wavefunction has {found} interior sign changes, expected {expected}")]
    NodeCount { expected: u32, found: usize },
    #[error("incompatible grids: {0}")]
    GridMismatch(String),
    #[error("eigenvalue search did not converge: {0}")]
    NoConvergence(String),
    #[error("node count {target} unreachable in offset bracket [{lo:e}, {hi:e}]")]
    NodeCountUnreachable { target: u32, lo: f64, hi: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
