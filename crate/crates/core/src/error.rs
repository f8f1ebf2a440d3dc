use thiserror::Error;

/// Errors raised by the evaluators, the quadrature oracle and the harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter violates the domain of the operation.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Direct evaluation of `J` would leave the representable range.
    #[error("overflow guard: s*T^2 = {exponent} exceeds {guard}; use the reduced integrand")]
    OverflowGuard { exponent: f64, guard: f64 },

    /// The adaptive integrator spent its evaluation budget without meeting the tolerance.
    #[error("evaluation budget of {budget} points exhausted (error estimate {abs_err:e}, target {target:e})")]
    BudgetExceeded {
        budget: usize,
        abs_err: f64,
        target: f64,
    },

    /// The remaining error is at the floating point roundoff floor and cannot be reduced.
    #[error("tolerance unreachable: roundoff floor reached (error estimate {abs_err:e}, target {target:e})")]
    RoundoffLimited { abs_err: f64, target: f64 },

    /// A series failed to converge within its term limit.
    #[error("series did not converge after {terms} terms")]
    NonConvergence { terms: usize },

    /// The parameters are legal but outside the regime where the construction makes sense.
    #[error("out of regime: {0}")]
    OutOfRegime(String),

    /// An oracle failure annotated with the grid point that produced it.
    #[error("at s = {s}: {source}")]
    AtGridPoint {
        s: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// True for errors caused by caller input rather than by numerics.
    pub fn is_invalid_input(&self) -> bool {
        match self {
            Error::InvalidParameter(_) | Error::OverflowGuard { .. } | Error::OutOfRegime(_) => true,
            Error::AtGridPoint { source, .. } => source.is_invalid_input(),
            _ => false,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn require_positive(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} must be > 0 (got {value})")))
    }
}
