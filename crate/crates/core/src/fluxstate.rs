//! Equilibrium density matrix near the barrier top, the form factors, and
//! the stationary flux solution.
//!
//! Coordinates are the difference `x` and mean `r` of the two density
//! matrix arguments. With `Lambda < 0`:
//!
//! * `rho_theta(x, r) = P exp(-r^2 / (4 Lambda) - Omega x^2 / 4)`
//! * `g(x, r) = erfc(-u / (2 sqrt|Lambda|)) / 2`, `u = -r + i |Lambda| omega_R x`
//! * `rho_fl = rho_theta g`

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::dynamics::{BarrierDynamics, TimeFunctions};
use crate::matsubara::MatsubaraTable;
use crate::{Error, Result};

pub use crate::numeric::special::{erfc_complex, erfcx_complex};

/// Smallest `omega_R t` accepted by [`FluxState::form_factor_at`].
pub const MIN_GROWTH: f64 = 10.0;

/// Normalization of `rho_theta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    /// `rho_theta(0, 0) = 1`.
    #[default]
    Relative,
    /// Absolute prefactor from the fluctuation product, not divided by the
    /// partition function. Drude baths only.
    DrudeAbsolute,
}

/// Flux state for one bath and temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxState {
    lambda: f64,
    omega: Option<f64>,
    omega_r: f64,
    theta: f64,
    norm: Normalization,
    prefactor: f64,
}

impl FluxState {
    /// `omega = None` marks a divergent `Omega` (strict Ohmic damping);
    /// only `x = 0` is then accessible.
    pub fn new(
        lambda: f64,
        omega: Option<f64>,
        omega_r: f64,
        theta: f64,
        norm: Normalization,
        prefactor: f64,
    ) -> Result<Self> {
        if !(lambda < 0.0) {
            return Err(Error::Caustic {
                what: "Lambda",
                value: lambda,
            });
        }
        if !(omega_r > 0.0 && omega_r <= 1.0) {
            return Err(crate::error::invalid("omega_r", omega_r, "must lie in (0, 1]"));
        }
        if !(theta > 0.0) {
            return Err(crate::error::invalid("theta", theta, "must be > 0"));
        }
        if omega_r * theta >= PI {
            return Err(Error::FluxBranch(omega_r * theta));
        }
        if norm == Normalization::Relative && prefactor != 1.0 {
            return Err(crate::error::invalid(
                "prefactor",
                prefactor,
                "relative normalization requires 1",
            ));
        }
        Ok(Self {
            lambda,
            omega,
            omega_r,
            theta,
            norm,
            prefactor,
        })
    }

    /// Builds the state from a Matsubara table.
    pub fn from_table(table: &MatsubaraTable, norm: Normalization) -> Result<Self> {
        let model = table.model();
        let lambda = table.lambda().value;
        let omega = if model.is_strict_ohmic() {
            None
        } else {
            Some(table.omega()?.value)
        };
        let omega_r = crate::dynamics::grote_hynes(model)?;
        let prefactor = match norm {
            Normalization::Relative => 1.0,
            Normalization::DrudeAbsolute => {
                if model.is_strict_ohmic() {
                    return Err(Error::Unsupported("absolute normalization"));
                }
                if !(lambda < 0.0) {
                    return Err(Error::Caustic {
                        what: "Lambda",
                        value: lambda,
                    });
                }
                absolute_prefactor(lambda, table.theta(), table.log_fluct_product()?.value)
            }
        };
        Self::new(lambda, omega, omega_r, table.theta(), norm, prefactor)
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn omega(&self) -> Option<f64> {
        self.omega
    }

    pub fn omega_r(&self) -> f64 {
        self.omega_r
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn normalization(&self) -> Normalization {
        self.norm
    }

    pub fn prefactor(&self) -> f64 {
        self.prefactor
    }

    /// Equilibrium density matrix `P exp((i/2) Sigma_theta)`.
    pub fn rho_theta(&self, x_f: f64, r_f: f64) -> Result<Complex64> {
        let mut exponent = -r_f * r_f / (4.0 * self.lambda);
        if x_f != 0.0 {
            let omega = self.omega.ok_or(Error::Divergent("Omega"))?;
            exponent -= omega * x_f * x_f / 4.0;
        }
        Ok(Complex64::new(self.prefactor * exponent.exp(), 0.0))
    }

    fn erfc_form(&self, w: Complex64) -> Complex64 {
        0.5 * erfc_complex(-w / (2.0 * self.lambda.abs().sqrt()))
    }

    /// Stationary form factor.
    pub fn form_factor(&self, x_f: f64, r_f: f64) -> Complex64 {
        let l = self.lambda.abs();
        self.erfc_form(Complex64::new(-r_f, l * self.omega_r * x_f))
    }

    /// Time-dependent form factor with the finite-time coefficients
    /// `S^2 / (S^2 - Lambda^2)` and `S' / S` taken from `tf`.
    pub fn form_factor_t(&self, tf: &TimeFunctions, x_f: f64, r_f: f64) -> Result<Complex64> {
        if !(tf.s < 0.0) {
            return Err(Error::FluxBranch(self.omega_r * self.theta));
        }
        let l2 = self.lambda * self.lambda;
        let s2 = tf.s * tf.s;
        if !(s2 > l2) {
            return Err(Error::Domain {
                what: "form factor (S^2 <= Lambda^2)",
                value: tf.t,
            });
        }
        let kappa = s2 / (s2 - l2);
        let w = kappa.sqrt()
            * Complex64::new(-r_f, self.lambda.abs() * (tf.s_dot / tf.s) * x_f);
        Ok(self.erfc_form(w))
    }

    /// [`Self::form_factor_t`] with the large-time `A`, `S` of `dynamics`;
    /// requires `omega_R t >= 10`.
    pub fn form_factor_at(
        &self,
        dynamics: &BarrierDynamics<'_>,
        x_f: f64,
        r_f: f64,
        t: f64,
    ) -> Result<Complex64> {
        let growth = dynamics.omega_r() * t;
        if !(growth >= MIN_GROWTH) {
            return Err(Error::Domain {
                what: "form_factor_at (omega_R t < 10)",
                value: growth,
            });
        }
        self.form_factor_t(&dynamics.time_functions_asymptotic(t), x_f, r_f)
    }

    /// Stationary flux solution `rho_theta g`.
    pub fn rho_flux(&self, x_f: f64, r_f: f64) -> Result<Complex64> {
        Ok(self.rho_theta(x_f, r_f)? * self.form_factor(x_f, r_f))
    }

    /// `(1/i) d rho_fl / dx` at `(0, r)`. The Gaussian in `x` contributes
    /// nothing at `x = 0`.
    pub fn current_density(&self, r: f64) -> f64 {
        let l = self.lambda.abs();
        let w = r / (2.0 * l.sqrt());
        // d/dx erfc(-u / 2 sqrt l) / 2 = (i l omega_R / (2 sqrt(pi l))) exp(-w^2)
        let dg = self.omega_r * l.sqrt() / (2.0 * PI.sqrt()) * (-w * w).exp();
        self.prefactor * (-r * r / (4.0 * self.lambda)).exp() * dg
    }

    /// `(q, g(0, q))` for each grid point, in input order.
    pub fn flux_profile(&self, q_grid: &[f64]) -> Vec<(f64, f64)> {
        q_grid
            .iter()
            .map(|&q| (q, self.form_factor(0.0, q).re))
            .collect()
    }
}

/// `P = (1 / sqrt|Lambda|) (1 / (2 theta sqrt(pi))) prod_{n>=1} nu_n^2 u_n`.
pub(crate) fn absolute_prefactor(lambda: f64, theta: f64, log_fluct: f64) -> f64 {
    (log_fluct - 0.5 * lambda.abs().ln() - (2.0 * theta * PI.sqrt()).ln()).exp()
}
