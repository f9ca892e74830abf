//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error(
        "matrix is not Hermitian: |a[{i}][{j}] - conj(a[{j}][{i}])| = {residual:.3e} exceeds 1e-12"
    )]
    NonHermitianInput { i: usize, j: usize, residual: f64 },

    #[error(
        "eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:.3e})"
    )]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("dimension mismatch in {context}: {left} vs {right}")]
    DimensionMismatch {
        context: &'static str,
        left: usize,
        right: usize,
    },

    #[error("domain violation: {function} is undefined at {point}")]
    DomainViolation { function: String, point: f64 },

    #[error("invalid interval [{lo}, {hi}]: lower endpoint must be strictly below upper")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("weight function must be positive on the interval: h({point}) = {value}")]
    NonPositiveWeight { point: f64, value: f64 },

    #[error("weight function must be non-negative on the interval: h({point}) = {value}")]
    NegativeWeight { point: f64, value: f64 },

    #[error("unit vector has norm {norm}, more than 1e-12 away from 1")]
    NotUnitVector { norm: f64 },

    #[error("Kraus normalizer is numerically singular (min eigenvalue {min_eig:.3e}) after {attempts} attempts")]
    SingularNormalizer { min_eig: f64, attempts: usize },

    #[error("map is not unital: residual {residual:.3e} exceeds {limit:.1e}")]
    NonUnitalMap { residual: f64, limit: f64 },

    #[error("operator is numerically singular (min |eigenvalue| = {min_abs:.3e})")]
    SingularOperator { min_abs: f64 },

    #[error("hypothesis violated for {check}: {detail}")]
    HypothesisViolation { check: String, detail: String },

    #[error("parameter constraint violated: {detail}")]
    ParameterViolation { detail: String },

    #[error("oracle not applicable: {detail}")]
    OracleInapplicable { detail: String },

    #[error("cross-check between direct and general evaluation diverged: {detail}")]
    CrossCheckFailed { detail: String },

    #[error("map builder rejected its input: {0}")]
    BuilderValidation(String),

    #[error("cannot parse literal {literal:?}: {reason}")]
    BadLiteral { literal: String, reason: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("trial {trial} failed: {source}")]
    Trial {
        trial: u64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Attach a trial index to an error raised while building or checking
    /// one randomized instance.
    pub fn at_trial(self, trial: u64) -> Error {
        Error::Trial {
            trial,
            source: Box::new(self),
        }
    }
}
