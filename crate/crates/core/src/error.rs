//! Crate-wide error type.
//!
//! Every fallible operation in the library returns [`Result`]. Variants are
//! grouped by failure mode rather than by module, so callers can match on the
//! *kind* of problem (bad input, leaving the validity domain, a numerical
//! certification that did not hold) without caring where it was detected.

use thiserror::Error;

/// Library-wide error enumeration.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied value is structurally invalid (wrong range, wrong
    /// parity, inconsistent lengths, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A time was queried outside the schedule's domain.
    #[error("time {t} lies outside the schedule domain [{t_start}, {t_end}]")]
    OutOfDomain { t: f64, t_start: f64, t_end: f64 },

    /// The coefficient parameterization degenerates (effective frequency
    /// vanishes, angle undefined) at a specific time.
    #[error("degenerate parameterization at t = {t}: {why}")]
    DegenerateParameterization { t: f64, why: String },

    /// Coefficients left the elliptic regime required for a bounded-below
    /// pseudo-rotation treatment.
    #[error("coefficients leave the elliptic regime at t = {t}: {why}")]
    HyperbolicRegime { t: f64, why: String },

    /// The auxiliary-variable flow hit a coordinate singularity.
    #[error("auxiliary-variable singularity at t = {t}: {why}")]
    Singular { t: f64, why: String },

    /// An integration-accuracy certification failed; the message suggests a
    /// remedy (usually a finer grid).
    #[error("integration accuracy not certified: {0}")]
    IntegrationAccuracy(String),

    /// A transformation contract (diagonalization of the invariant or of the
    /// transformed Hamiltonian) was violated beyond tolerance.
    #[error("transformation contract violated: {0}")]
    ContractViolation(String),

    /// A quantity that must be Hermitian (or real) came out otherwise.
    #[error("hermiticity lost: {0}")]
    NonHermitian(String),

    /// An iterative numerical routine failed to converge or met a singular
    /// pivot.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// An integer quantity exceeded the exactly representable range.
    #[error("range overflow: {0}")]
    Overflow(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
