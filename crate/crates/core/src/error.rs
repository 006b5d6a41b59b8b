use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("{0} is not available for strict Ohmic damping")]
    Unsupported(&'static str),

    #[error("{0} diverges for strict Ohmic damping; use a Drude bath with large cutoff")]
    Divergent(&'static str),

    #[error("argument {value} outside the domain of {what}")]
    Domain { what: &'static str, value: f64 },

    #[error("Matsubara denominator nu_n^2 + zeta_n - 1 = {denominator:e} at n = {n} is at or past a pole")]
    PoleProximity { n: usize, denominator: f64 },

    #[error("Lambda has no sign change below the u_1 pole at theta = {pole}")]
    NoCriticalTemperature { pole: f64 },

    #[error("propagator poles are degenerate (separation {separation:e})")]
    DegeneratePoles { separation: f64 },

    #[error("caustic in {what}: {value:e} too close to zero")]
    Caustic { what: &'static str, value: f64 },

    #[error("quadrature did not converge: estimated error {achieved:e}, requested {requested:e}")]
    Quadrature { achieved: f64, requested: f64 },

    #[error("theta = {theta} violates the guard theta <= (1 - {delta}) theta_c with theta_c = {theta_c}")]
    TemperatureGuard { theta: f64, theta_c: f64, delta: f64 },

    #[error("omega_R theta = {0} >= pi: S(t) does not stay negative, flux branch unavailable")]
    FluxBranch(f64),

    #[error("root search for {0} did not converge")]
    RootNotFound(&'static str),
}

impl Error {
    /// True for parameters outside the regime the theory covers (as opposed
    /// to invalid input or a numerical failure).
    pub fn is_regime_violation(&self) -> bool {
        matches!(
            self,
            Error::TemperatureGuard { .. }
                | Error::FluxBranch(_)
                | Error::NoCriticalTemperature { .. }
        )
    }

    /// True for numerical breakdowns: poles, caustics, divergent sums,
    /// non-converged quadratures or root searches.
    pub fn is_numerical_failure(&self) -> bool {
        matches!(
            self,
            Error::PoleProximity { .. }
                | Error::DegeneratePoles { .. }
                | Error::Caustic { .. }
                | Error::Quadrature { .. }
                | Error::Divergent(_)
                | Error::RootNotFound(_)
        )
    }
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, value: f64, reason: &'static str) -> Error {
    Error::InvalidParameter {
        name,
        value,
        reason,
    }
}
