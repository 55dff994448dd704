use crate::C64;

/// Errors raised by the evaluation pipeline.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("z = {0} is outside the admissible interval ]0,1/4[")]
    Domain(f64),
    #[error("argument outside the domain: {0}")]
    Argument(String),
    #[error("quadrature did not converge: last estimates {last} and {previous} (difference {residual:e})")]
    Quadrature { last: C64, previous: C64, residual: f64 },
    #[error("root of the elliptic inversion did not converge near {0}")]
    Inversion(C64),
    #[error("branch tracking failed near t = {0}")]
    Tracking(C64),
    #[error("derivative undefined: cubic has a double root at t = {0}")]
    DoubleRoot(C64),
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
    #[error("kernel vanishes at (x, y) = ({x}, {y}); use the identity checks of `verify` instead")]
    KernelZero { x: C64, y: C64 },
    #[error("count table holds lengths up to {kmax}, requested {requested}")]
    Range { kmax: usize, requested: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
