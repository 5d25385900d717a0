use num_complex::Complex64;
use thiserror::Error;

/// Error type shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A point that must lie outside the compact set E was inside it.
    #[error("z = {z} lies in the set E")]
    Domain { z: Complex64 },

    /// Coefficient data does not cover the indices a computation needs.
    #[error("coefficient data too short: need entries through index {needed}, have {have}")]
    Truncation { needed: usize, have: usize },

    /// Node-doubling quadrature hit the node cap without stabilizing.
    #[error("quadrature did not stabilize within {max_nodes} nodes (last change {last_change:e})")]
    Convergence { max_nodes: usize, last_change: f64 },

    /// Too few usable data points for a fit or estimate.
    #[error("need at least {needed} usable points, found {found}")]
    Degenerate { needed: usize, found: usize },

    /// The equilibrated moment system is numerically singular.
    #[error("moment system is numerically singular (scaled determinant {delta:e})")]
    SingularSystem { delta: f64 },

    /// A size limit was exceeded (e.g. too many poles to track).
    #[error("size {got} exceeds the supported limit {max}")]
    Size { got: usize, max: usize },

    /// Evaluation requested at (or too close to) a denominator zero.
    #[error("denominator vanishes at z = {z}")]
    Pole { z: Complex64 },

    /// A downstream analysis lacked the inputs it needs (e.g. no converged fit).
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// Malformed configuration text.
    #[error("parse error: {0}")]
    Parse(String),

    /// Structurally valid configuration with inconsistent contents.
    #[error("invalid configuration: {0}")]
    Validation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
