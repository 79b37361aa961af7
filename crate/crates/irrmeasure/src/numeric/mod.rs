//! Numerical engines: quadrature, digamma, root isolation, 1-d search.

pub mod digamma;
pub mod optimize;
pub mod quadrature;
pub mod roots;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericError {
    #[error("quadrature could not reach {digits} digits within {nodes} nodes")]
    PrecisionUnreachable { digits: u32, nodes: usize },
    #[error("integrand produced a non-finite value")]
    NonFinite,
    #[error("digamma argument must be positive, got {0}")]
    DigammaDomain(String),
    #[error("root finder did not converge after {0} iterations")]
    NoConvergence(usize),
    #[error("repeated root near {0}: degenerate saddle")]
    RepeatedRoot(String),
    #[error("polynomial is constant or zero")]
    ConstantPolynomial,
}
