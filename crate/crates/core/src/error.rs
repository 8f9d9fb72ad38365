use std::path::PathBuf;

use crate::profile::DomainInterval;

/// Errors produced by profile construction, projection, verification and export.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("rejected profile: {0}")]
    RejectedProfile(String),

    #[error("no point of [{lo}, {hi}] satisfies f'(u)^2 <= 1")]
    EmptyDomain { lo: f64, hi: f64 },

    /// The singular abscissa `u* = -d/(2c)` lies strictly inside the request.
    /// Both sides exclude `u*` itself.
    #[error(
        "f'(u) vanishes at u = {singular} inside the requested interval; \
         choose [{}, {singular}) or ({singular}, {}]",
        below.lo, above.hi
    )]
    SingularitySplit {
        singular: f64,
        below: DomainInterval,
        above: DomainInterval,
    },

    #[error("arc-length parametrization infeasible at u = {u}: 1 - f'(u)^2 = {slack:e}")]
    InfeasibleArcLength { u: f64, slack: f64 },

    #[error("quadrature did not reach tolerance {tolerance:e} (estimate {estimate:e})")]
    QuadratureTolerance { tolerance: f64, estimate: f64 },

    #[error(
        "newton inversion did not converge after {iterations} iterations (residual {residual:e})"
    )]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("finite-difference stencil [{lo}, {hi}] leaves the admissible domain")]
    DomainExceeded { lo: f64, hi: f64 },

    #[error("meridian image endpoints coincide")]
    DegenerateLine,

    #[error("domain [{lo}, {hi}] too short for a stencil of half-width {reach}")]
    InsufficientDomain { lo: f64, hi: f64, reach: f64 },

    #[error("meridian at t = {t} deviates {deviation:e} from its chord")]
    CollinearityViolation { t: f64, deviation: f64 },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
