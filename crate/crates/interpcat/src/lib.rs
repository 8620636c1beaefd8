//! Exact computation in interpolation categories of wreath products.
//!
//! Morphisms are stored as sparse maps from recollements (partitions of index
//! sets that meet each factor at most once) to coefficient vectors over ℚ[t]
//! or ℚ. The crate implements the composition and tensor laws with their
//! falling-factorial coefficients, the double-bracket basis change, the
//! integer-rank block-matrix specialization used as a ground-truth oracle,
//! string-diagram evaluation, duals and traces, and radical/semisimplicity
//! analysis of the resulting endomorphism algebras.

pub mod algebra;
pub mod basecat;
pub mod diagrams;
pub mod interp;
pub mod karoubi;
pub mod linalg;
pub mod partitions;
pub mod scalar;
pub mod wreath;

/// Errors shared by every module of the crate.
#[derive(thiserror::Error, Debug)]
pub enum Error {
    /// Malformed or incompatible arguments.
    #[error("argument error: {0}")]
    Argument(String),
    /// An enumeration or size limit was exceeded.
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    /// The base category lacks a requested capability (tensor, braiding, duals).
    #[error("capability error: {0}")]
    Capability(String),
    /// A presentation or constructed value failed axiom validation.
    #[error("validation failed: {0}")]
    Validation(String),
    /// A stated precondition does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// Malformed input text.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
