//! Effective actions of the propagating function.
//!
//! Coordinates are complex because the extremal shift of the initial
//! coordinates is complex.

use num_complex::Complex64;

use crate::dynamics::TimeFunctions;
use crate::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Imaginary-time action `i rbar^2 / (2 Lambda) + i Omega xbar^2 / 2`.
pub fn sigma_theta(lambda: f64, omega: f64, xbar: Complex64, rbar: Complex64) -> Result<Complex64> {
    if lambda == 0.0 {
        return Err(Error::Caustic {
            what: "Lambda",
            value: lambda,
        });
    }
    Ok(I * rbar * rbar / (2.0 * lambda) + I * omega * xbar * xbar / 2.0)
}

/// Bath sums and time functions at one time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActionContext {
    pub lambda: f64,
    pub omega: f64,
    pub omega_r: f64,
    pub tf: TimeFunctions,
}

impl ActionContext {
    /// Requires `Lambda < 0`, `t > 0` and `A(t) != 0`.
    pub fn new(lambda: f64, omega: f64, omega_r: f64, tf: TimeFunctions) -> Result<Self> {
        if !(lambda < 0.0) {
            return Err(Error::Caustic {
                what: "Lambda",
                value: lambda,
            });
        }
        if !(tf.t > 0.0) {
            return Err(crate::error::invalid("t", tf.t, "must be positive"));
        }
        if tf.a == 0.0 || !tf.a.is_finite() {
            return Err(Error::Caustic {
                what: "A(t)",
                value: tf.a,
            });
        }
        if !omega.is_finite() {
            return Err(Error::Divergent("Omega"));
        }
        Ok(Self {
            lambda,
            omega,
            omega_r,
            tf,
        })
    }

    pub fn t(&self) -> f64 {
        self.tf.t
    }

    /// `Sigma_theta` with this context's `Lambda` and `Omega`.
    pub fn sigma_theta(&self, xbar: Complex64, rbar: Complex64) -> Complex64 {
        I * rbar * rbar / (2.0 * self.lambda) + I * self.omega * xbar * xbar / 2.0
    }

    /// Full real-time action, every term kept.
    pub fn sigma_t_full(
        &self,
        x_f: Complex64,
        r_f: Complex64,
        x_i: Complex64,
        r_i: Complex64,
        xbar: Complex64,
        rbar: Complex64,
    ) -> Complex64 {
        let TimeFunctions {
            a,
            a_dot,
            s,
            s_dot,
            a_curv,
            s_drift,
            s_rel,
            ..
        } = self.tf;
        let lam = self.lambda;
        let om = self.omega;
        let ad_a = a_dot / a;
        let s2_l2 = s * s / (lam * lam);
        // A'(S^2/L^2 - 1) - A S S'/L^2 regrouped around s_drift
        let brace = -a * s * s_drift / (lam * lam) - a_dot;

        let t1 = (x_f * r_f + x_i * r_i) * ad_a;
        let t2 = x_i * r_f / (2.0 * a);
        let t3 = -2.0 * x_f * r_i * a_curv;
        let t4 = rbar * x_i * (-ad_a - s / (2.0 * lam * a));
        let t5 = rbar * x_f * (2.0 * a_curv + s_drift / lam);
        let t6 = I * xbar * x_i * (-om + s_dot / (2.0 * a));
        let t7 = -I * xbar * x_f * s_rel;
        let t8 = I / 2.0 * x_i * x_i * (om - s_dot / a + lam / (4.0 * a * a) * (1.0 - s2_l2));
        let t9 = I * x_i * x_f * (s_rel - lam / (2.0 * a * a) * brace);
        let t10 = I / 2.0 * x_f * x_f * (om + lam * ad_a * ad_a - s_drift * s_drift / lam);
        t1 + t2 + t3 + t4 + t5 + t6 + t7 + t8 + t9 + t10
    }

    /// Large-time action with `xbar = x_i`, `rbar = r_i`.
    pub fn sigma_t_tilde(
        &self,
        x_f: Complex64,
        r_f: Complex64,
        x_i: Complex64,
        r_i: Complex64,
    ) -> Complex64 {
        let TimeFunctions { a, a_dot, s, .. } = self.tf;
        let lam = self.lambda;
        let om = self.omega;
        let ad_a = a_dot / a;
        let s2_l2 = s * s / (lam * lam);
        (x_f * r_f + x_i * r_i) * ad_a + x_i * r_f / (2.0 * a)
            - r_i * x_i * (ad_a + s / (2.0 * lam * a))
            + I / 2.0 * x_i * x_i * (-om + lam / (4.0 * a * a) * (1.0 - s2_l2))
            + I * x_i * x_f * lam * a_dot / (2.0 * a * a)
            + I / 2.0 * x_f * x_f * (om + lam * ad_a * ad_a)
    }

    /// `Sigma_theta(x_i, r_i) + sigma_t_tilde`.
    pub fn sigma_tilde(
        &self,
        x_f: Complex64,
        r_f: Complex64,
        x_i: Complex64,
        r_i: Complex64,
    ) -> Complex64 {
        self.sigma_theta(x_i, r_i) + self.sigma_t_tilde(x_f, r_f, x_i, r_i)
    }

    /// Stationary point `(x_i0, r_i0)` of `sigma_tilde` in the initial coordinates.
    pub fn extremal_point(&self, x_f: Complex64, r_f: Complex64) -> (Complex64, Complex64) {
        let TimeFunctions { a, a_dot, s, s_dot, .. } = self.tf;
        let lam = self.lambda;
        let x0 = -2.0 * a_dot * x_f + 2.0 * I * a * r_f / lam;
        let r0 = I * s_dot * x_f + s * r_f / lam;
        (x0, r0)
    }

    /// Quadratic form in the shifted coordinates.
    pub fn sigma_hat(&self, x_hat: Complex64, r_hat: Complex64) -> Complex64 {
        let TimeFunctions { a, s, .. } = self.tf;
        let lam = self.lambda;
        I / (2.0 * lam)
            * (r_hat * r_hat + I * (s / a) * r_hat * x_hat
                - (s * s - lam * lam) / (4.0 * a * a) * x_hat * x_hat)
    }
}
