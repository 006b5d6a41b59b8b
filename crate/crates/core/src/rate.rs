//! Partition function, decay rate, and validity conditions.

use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::bath::DampingModel;
use crate::dynamics::grote_hynes;
use crate::fluxstate::FluxState;
use crate::matsubara::{theta_critical, MatsubaraTable, SystemParams, DEFAULT_TERMS};
use crate::numeric::series::{sum_with_tail, SeriesValue};
use crate::{Error, Result};

/// Denominators of the matching ratio at or below this are treated as zero.
pub const MATCHING_FLOOR: f64 = 1e-12;

/// Tunable thresholds of the rate calculation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateConfig {
    /// Temperature guard `theta <= (1 - delta) theta_c`.
    pub delta: f64,
    /// Matching holds when the ratio is below this.
    pub matching_threshold: f64,
    /// `t_min = plateau_c / omega_R`.
    pub plateau_c: f64,
    /// Truncation used for `theta_c`.
    pub terms: usize,
    /// Precomputed `theta_c`.
    pub theta_c: Option<f64>,
}

impl Default for RateConfig {
    fn default() -> Self {
        Self {
            delta: 0.05,
            matching_threshold: 0.1,
            plateau_c: 3.0,
            terms: DEFAULT_TERMS,
            theta_c: None,
        }
    }
}

/// Matching of the flux solution to equilibrium on the well side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matching {
    /// `|Lambda| eps^2 / (1 - omega_R^2 |Lambda| / Omega)`; `None` when the
    /// denominator vanishes.
    pub ratio: Option<f64>,
    pub ok: bool,
}

impl Matching {
    pub fn impossible(&self) -> bool {
        self.ratio.is_none()
    }
}

/// Time window of quasi-stationary flux.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plateau {
    pub t_min: f64,
    pub t_max: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Validity {
    pub matching: Matching,
    pub plateau: Plateau,
    pub theta_ok: bool,
    pub theta_ratio: f64,
}

/// Decay rate and its factors, in units of `w0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateReport {
    pub gamma_rate: f64,
    pub arrhenius: f64,
    pub prefactor_classical: f64,
    pub quantum_factor: f64,
    pub omega_r: f64,
    pub theta: f64,
    pub theta_c: f64,
    pub lambda: f64,
    /// `None` for strict Ohmic damping.
    pub omega: Option<f64>,
    pub validity: Validity,
}

fn omega_of(table: &MatsubaraTable) -> Result<Option<f64>> {
    if table.model().is_strict_ohmic() {
        Ok(None)
    } else {
        Ok(Some(table.omega()?.value))
    }
}

fn check_theta(table: &MatsubaraTable, params: &SystemParams) -> Result<()> {
    params.validate()?;
    if table.theta() != params.theta {
        return Err(crate::error::invalid(
            "theta",
            params.theta,
            "differs from the Matsubara table",
        ));
    }
    Ok(())
}

/// `ln Z` of the damped harmonic well.
pub fn log_partition_well(table: &MatsubaraTable, params: &SystemParams) -> Result<f64> {
    check_theta(table, params)?;
    let theta = params.theta;
    let logp = table.log_well_product(params.omega_w)?.value;
    Ok(logp - (theta * params.omega_w).ln() + theta * params.v_b)
}

/// Partition function of the damped harmonic well, `exp(theta v_b)` included.
pub fn partition_well(table: &MatsubaraTable, params: &SystemParams) -> Result<f64> {
    Ok(log_partition_well(table, params)?.exp())
}

/// Resolves `theta_c` and applies the temperature guard.
pub fn temperature_guard(
    model: &DampingModel,
    theta: f64,
    config: &RateConfig,
) -> Result<f64> {
    let theta_c = match config.theta_c {
        Some(t) => t,
        None => theta_critical(model, config.terms)?,
    };
    if theta > (1.0 - config.delta) * theta_c {
        return Err(Error::TemperatureGuard {
            theta,
            theta_c,
            delta: config.delta,
        });
    }
    Ok(theta_c)
}

/// Decay rate with its decomposition and validity flags.
pub fn decay_rate(
    table: &MatsubaraTable,
    params: &SystemParams,
    config: &RateConfig,
) -> Result<RateReport> {
    check_theta(table, params)?;
    let model = table.model();
    let theta = params.theta;
    let theta_c = temperature_guard(model, theta, config)?;
    let omega_r = grote_hynes(model)?;
    let quantum_factor = table.ratio_product(params.omega_w)?;
    let arrhenius = (-theta * params.v_b).exp();
    let prefactor_classical = params.omega_w * omega_r / (2.0 * PI);
    let lambda = table.lambda().value;
    let omega = omega_of(table)?;
    let matching = matching_from(lambda, omega, omega_r, params.epsilon, config.matching_threshold);
    let plateau = plateau_from(lambda, omega_r, params.epsilon, config.plateau_c);
    Ok(RateReport {
        gamma_rate: arrhenius * prefactor_classical * quantum_factor,
        arrhenius,
        prefactor_classical,
        quantum_factor,
        omega_r,
        theta,
        theta_c,
        lambda,
        omega,
        validity: Validity {
            matching,
            plateau,
            theta_ok: true,
            theta_ratio: theta / theta_c,
        },
    })
}

/// Total flux `(2/i) d rho_fl / dx` at the barrier top with the absolute
/// prefactor. Drude baths only.
pub fn flux_current(state: &FluxState, table: &MatsubaraTable) -> Result<f64> {
    if table.model().is_strict_ohmic() {
        return Err(Error::Unsupported("the absolute flux"));
    }
    let logp = table.log_fluct_product()?.value;
    Ok(2.0 * relative_current(state) * crate::fluxstate::absolute_prefactor(state.lambda(), table.theta(), logp))
}

fn relative_current(state: &FluxState) -> f64 {
    state.current_density(0.0) / state.prefactor()
}

/// Rate from the flux at the barrier top over the well partition function.
/// Strict Ohmic damping uses regularized products whose common factor
/// cancels in the quotient.
pub fn flux_at_top(state: &FluxState, table: &MatsubaraTable, params: &SystemParams) -> Result<f64> {
    check_theta(table, params)?;
    let theta = params.theta;
    let (log_fluct, log_well) = if table.model().is_strict_ohmic() {
        (
            table.log_fluct_product_regularized().value,
            table.log_well_product_regularized(params.omega_w).value,
        )
    } else {
        (
            table.log_fluct_product()?.value,
            table.log_well_product(params.omega_w)?.value,
        )
    };
    let log_pref = log_fluct - 0.5 * state.lambda().abs().ln() - (2.0 * theta * PI.sqrt()).ln();
    let log_z = log_well - (theta * params.omega_w).ln() + theta * params.v_b;
    Ok(2.0 * relative_current(state) * (log_pref - log_z).exp())
}

fn drude_parts(model: &DampingModel) -> Result<(f64, f64)> {
    match *model {
        DampingModel::Drude { gamma, omega_d } => Ok((gamma, omega_d)),
        DampingModel::Ohmic { gamma } => Err(crate::error::invalid(
            "model",
            gamma,
            "a Drude bath is required",
        )),
    }
}

fn resonance_guard(theta: f64, terms: usize) -> Result<()> {
    // nu_n = 1 at n = theta / 2 pi
    let n = (theta / (2.0 * PI)).round();
    if n >= 1.0 && (n as usize) <= terms {
        let nu = 2.0 * PI * n / theta;
        let d = nu * nu - 1.0;
        if d.abs() < 1e-9 {
            return Err(Error::PoleProximity {
                n: n as usize,
                denominator: d,
            });
        }
    }
    Ok(())
}

fn check_sum_args(model: &DampingModel, theta: f64, terms: usize) -> Result<(f64, f64)> {
    model.validate()?;
    let parts = drude_parts(model)?;
    if !(theta > 0.0 && theta.is_finite()) {
        return Err(crate::error::invalid("theta", theta, "must be finite and > 0"));
    }
    if terms < crate::matsubara::MIN_TERMS {
        return Err(crate::error::invalid("terms", terms as f64, "below the minimum"));
    }
    resonance_guard(theta, terms)?;
    Ok(parts)
}

/// `kappa = (2/theta) sum_{n>=1} nu omega_D / ((nu^2 - 1)(omega_D + nu))`.
pub fn kappa(model: &DampingModel, theta: f64, terms: usize) -> Result<SeriesValue> {
    let (_, w) = check_sum_args(model, theta, terms)?;
    Ok(sum_with_tail(terms, |n| {
        let nu = 2.0 * PI * n / theta;
        nu * w / ((nu * nu - 1.0) * (w + nu))
    })
    .scale(2.0 / theta))
}

/// First-order coefficients `(Lambda'(0), Omega'(0))` in the damping strength.
pub fn lambda_omega_prime(
    model: &DampingModel,
    theta: f64,
    terms: usize,
) -> Result<(SeriesValue, SeriesValue)> {
    let (_, w) = check_sum_args(model, theta, terms)?;
    let lp = sum_with_tail(terms, |n| {
        let nu = 2.0 * PI * n / theta;
        let d = nu * nu - 1.0;
        nu * w / (d * d * (w + nu))
    })
    .scale(-2.0 / theta);
    let op = sum_with_tail(terms, |n| {
        let nu = 2.0 * PI * n / theta;
        let d = nu * nu - 1.0;
        nu * nu * nu * w / (d * d * (w + nu))
    })
    .scale(2.0 / theta);
    Ok((lp, op))
}

fn matching_from(
    lambda: f64,
    omega: Option<f64>,
    omega_r: f64,
    epsilon: f64,
    threshold: f64,
) -> Matching {
    let l = lambda.abs();
    let denom = match omega {
        Some(om) => 1.0 - omega_r * omega_r * l / om,
        None => 1.0,
    };
    if !(denom > MATCHING_FLOOR) {
        return Matching {
            ratio: None,
            ok: false,
        };
    }
    let ratio = l * epsilon * epsilon / denom;
    Matching {
        ratio: Some(ratio),
        ok: ratio < threshold,
    }
}

/// Matching condition of the flux solution to the well-side equilibrium.
pub fn matching_condition(state: &FluxState, params: &SystemParams, threshold: f64) -> Matching {
    matching_from(
        state.lambda(),
        state.omega(),
        state.omega_r(),
        params.epsilon,
        threshold,
    )
}

/// Lower bound on the Drude damping strength from the matching condition.
pub fn drude_min_gamma(
    model: &DampingModel,
    theta: f64,
    v_b: f64,
    terms: usize,
) -> Result<f64> {
    let (_, w) = drude_parts(model)?;
    if !(theta > 0.0 && theta < PI) {
        return Err(Error::Domain {
            what: "drude_min_gamma theta (needs 0 < theta < pi)",
            value: theta,
        });
    }
    if !(v_b > 0.0) {
        return Err(crate::error::invalid("v_b", v_b, "must be > 0"));
    }
    let k = kappa(model, theta, terms)?.value;
    let tan = (theta / 2.0).tan();
    let cut = (w + 1.0) / w;
    Ok(cut / (2.0 * v_b * tan) / (1.0 + 2.0 * k * tan * cut))
}

fn plateau_from(lambda: f64, omega_r: f64, epsilon: f64, c: f64) -> Plateau {
    let t_min = c / omega_r;
    let t_max = (1.0 / (epsilon * lambda.abs().sqrt())).ln() / omega_r;
    Plateau {
        t_min,
        t_max,
        ok: t_max > t_min,
    }
}

/// Plateau window `(c / omega_R, ln(1 / (eps sqrt|Lambda|)) / omega_R)`.
pub fn plateau_window(state: &FluxState, params: &SystemParams, c: f64) -> Plateau {
    plateau_from(state.lambda(), state.omega_r(), params.epsilon, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fluxstate::Normalization;
    use crate::matsubara::lambda_direct;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn ohmic(g: f64) -> DampingModel {
        DampingModel::ohmic(g).unwrap()
    }

    fn drude(g: f64, w: f64) -> DampingModel {
        DampingModel::drude(g, w).unwrap()
    }

    fn params(theta: f64, v_b: f64) -> SystemParams {
        SystemParams::new(theta, 0.1, v_b, 1.0).unwrap()
    }

    fn table(model: DampingModel, theta: f64) -> MatsubaraTable {
        MatsubaraTable::build(model, theta, DEFAULT_TERMS).unwrap()
    }

    #[test]
    fn partition_examples() {
        let t = table(ohmic(0.0), 1.0);
        let mut p = params(1.0, 1.0);
        p.v_b = 1e-300;
        let z = partition_well(&t, &p).unwrap();
        assert!((z - 1.0 / (2.0 * 0.5f64.sinh())).abs() < 1e-9);
        assert!((z - 0.959_517).abs() < 1e-6);
        let z10 = partition_well(&t, &params(1.0, 10.0)).unwrap();
        assert_relative_eq!(z10 / z, 10f64.exp(), max_relative = 1e-13);
        let t = table(ohmic(0.0), 1e-3);
        p.theta = 1e-3;
        let z = partition_well(&t, &p).unwrap();
        assert!((z * 1e-3 - 1.0).abs() < 1e-6);
        let t = table(ohmic(1.0), 1.0);
        assert!(matches!(
            partition_well(&t, &params(1.0, 1.0)),
            Err(Error::Divergent(_))
        ));
    }

    #[test]
    fn undamped_rate_closed_form() {
        let t = table(ohmic(0.0), 1.0);
        let r = decay_rate(&t, &params(1.0, 10.0), &RateConfig::default()).unwrap();
        let q = 0.5f64.sinh() / 0.5f64.sin();
        assert!((r.quantum_factor - q).abs() < 1e-9);
        assert!((r.quantum_factor - 1.086_916).abs() < 1e-6);
        assert_relative_eq!(r.gamma_rate, q / (2.0 * PI) * (-10f64).exp(), max_relative = 1e-9);
        assert_eq!(
            r.gamma_rate,
            r.arrhenius * r.prefactor_classical * r.quantum_factor
        );
        assert!(r.validity.matching.impossible());
    }

    #[test]
    fn classical_limit() {
        for g in [0.0, 1.0, 3.0] {
            let t = table(ohmic(g), 0.01);
            let r = decay_rate(&t, &params(0.01, 10.0), &RateConfig::default()).unwrap();
            assert!(r.quantum_factor >= 1.0 && r.quantum_factor <= 1.001);
            let classical = r.omega_r / (2.0 * PI) * (-0.1f64).exp();
            assert!((r.gamma_rate / classical - 1.0).abs() < 1e-3);
        }
    }

    #[test]
    fn truncation_convergence() {
        let p = params(2.0, 5.0);
        let a = decay_rate(
            &MatsubaraTable::build(ohmic(3.0), 2.0, 1_000).unwrap(),
            &p,
            &RateConfig::default(),
        )
        .unwrap();
        let b = decay_rate(&table(ohmic(3.0), 2.0), &p, &RateConfig::default()).unwrap();
        assert!((a.gamma_rate / b.gamma_rate - 1.0).abs() < 1e-6);
    }

    #[test]
    fn guard_refuses_near_critical() {
        let t = table(ohmic(3.0), 5.0);
        let e = decay_rate(&t, &params(5.0, 5.0), &RateConfig::default()).unwrap_err();
        assert!(matches!(e, Error::TemperatureGuard { .. }));
        assert!(e.is_regime_violation());
    }

    #[test]
    fn two_route_identity() {
        let cases = [
            (ohmic(0.0), 1.0),
            (ohmic(3.0), 2.0),
            (drude(1.0, 10.0), 1.0),
        ];
        for (model, theta) in cases {
            let t = table(model, theta);
            let p = params(theta, 5.0);
            let s = FluxState::from_table(&t, Normalization::Relative).unwrap();
            let flux = flux_at_top(&s, &t, &p).unwrap();
            let rate = decay_rate(&t, &p, &RateConfig::default()).unwrap().gamma_rate;
            assert!((flux / rate - 1.0).abs() < 1e-8, "{model:?}: {flux} vs {rate}");
        }
        let t = table(drude(1.0, 10.0), 1.0);
        let s = FluxState::from_table(&t, Normalization::DrudeAbsolute).unwrap();
        let j = flux_current(&s, &t).unwrap();
        assert!(j > 0.0);
        let z = partition_well(&t, &params(1.0, 5.0)).unwrap();
        let rate = decay_rate(&t, &params(1.0, 5.0), &RateConfig::default()).unwrap();
        assert!((j / z / rate.gamma_rate - 1.0).abs() < 1e-8);
    }

    #[test]
    fn kappa_examples() {
        let k = kappa(&drude(1.0, 100.0), 2.0, DEFAULT_TERMS).unwrap().value;
        let lead = 200f64.ln() / PI;
        assert!((k / lead - 1.0).abs() < 0.25, "{k} vs {lead}");
        let mut ratios = [0.0; 3];
        for (i, wt) in [1e2, 1e3, 1e4].iter().enumerate() {
            let k = kappa(&drude(1.0, wt / 2.0), 2.0, DEFAULT_TERMS).unwrap().value;
            ratios[i] = k / (wt.ln() / PI);
        }
        assert!((ratios[0] - 1.0).abs() > (ratios[1] - 1.0).abs());
        assert!((ratios[1] - 1.0).abs() > (ratios[2] - 1.0).abs());
        let small = kappa(&drude(1.0, 1e-8), 2.0, DEFAULT_TERMS).unwrap().value;
        assert!(small.abs() < 1e-7);
        assert!(matches!(
            kappa(&drude(1.0, 10.0), 2.0 * PI, DEFAULT_TERMS),
            Err(Error::PoleProximity { n: 1, .. })
        ));
        assert!(kappa(&ohmic(1.0), 1.0, DEFAULT_TERMS).is_err());
    }

    #[test]
    fn kappa_direct_sum_oracle() {
        // brute force to 10^6 terms plus the analytic 1/n^2 tail
        let (theta, w) = (2.0, 100.0);
        let n_max = 1_000_000;
        let mut acc = 0.0;
        for n in (1..=n_max).rev() {
            let nu = 2.0 * PI * n as f64 / theta;
            acc += nu * w / ((nu * nu - 1.0) * (w + nu));
        }
        let c = w * theta * theta / (4.0 * PI * PI);
        acc += c / n_max as f64;
        let oracle = 2.0 / theta * acc;
        let k = kappa(&drude(1.0, w), theta, DEFAULT_TERMS).unwrap().value;
        assert!((k - oracle).abs() < 1e-8 * oracle, "{k} vs {oracle}");
    }

    fn brute_lambda_omega(gamma: f64, w: f64, theta: f64, n_max: usize) -> (f64, f64) {
        // signed gamma allowed: the oracle bypasses model validation
        let mut l = 0.0;
        let mut o = 0.0;
        for n in (1..=n_max).rev() {
            let nu = 2.0 * PI * n as f64 / theta;
            let z = gamma * nu * w / (w + nu);
            let u = 1.0 / (nu * nu + z - 1.0);
            l += u;
            o += u * (z - 1.0);
        }
        ((-1.0 + 2.0 * l) / theta, (1.0 + 2.0 * o) / theta)
    }

    #[test]
    fn first_order_coefficients_match_central_differences() {
        let (w, theta) = (10.0, 1.0);
        let model = drude(1.0, w);
        let (lp, op) = lambda_omega_prime(&model, theta, DEFAULT_TERMS).unwrap();
        let h = 1e-4;
        let n = 200_000;
        let (lpl, opl) = brute_lambda_omega(h, w, theta, n);
        let (lmi, omi) = brute_lambda_omega(-h, w, theta, n);
        let fd_l = (lpl - lmi) / (2.0 * h);
        let fd_o = (opl - omi) / (2.0 * h);
        assert!((lp.value / fd_l - 1.0).abs() < 1e-5, "{} vs {fd_l}", lp.value);
        assert!((op.value / fd_o - 1.0).abs() < 1e-5, "{} vs {fd_o}", op.value);
        let k = kappa(&model, theta, DEFAULT_TERMS).unwrap().value;
        assert!((lp.value + op.value - k).abs() < 1e-10);
        // library Lambda agrees with the brute-force oracle at gamma = 0
        let l0 = lambda_direct(&drude(0.0, w), theta, DEFAULT_TERMS).unwrap().value;
        assert!((l0 - brute_lambda_omega(0.0, w, theta, n).0).abs() < 1e-6);
    }

    #[test]
    fn matching_examples() {
        let t = table(ohmic(0.0), 1.0);
        let s = FluxState::from_table(&t, Normalization::Relative).unwrap();
        let m = matching_condition(&s, &params(1.0, 100.0), 0.1);
        assert!(m.impossible() && !m.ok);

        // ratio falls as theta approaches theta_c
        let model = drude(1.0, 100.0);
        let tc = theta_critical(&model, DEFAULT_TERMS).unwrap();
        let mut last = f64::INFINITY;
        for f in [0.3, 0.6, 0.9] {
            let t = table(model, f * tc);
            let s = FluxState::from_table(&t, Normalization::Relative).unwrap();
            let r = matching_condition(&s, &params(f * tc, 100.0), 0.1).ratio.unwrap();
            assert!(r < last);
            last = r;
        }
    }

    fn boundary_gamma(theta: f64, w: f64, v_b: f64) -> f64 {
        // gamma where |Lambda| eps^2 = 1 - omega_R^2 |Lambda| / Omega, eps^2 = 1 / v_b
        let f = |g: f64| {
            let model = drude(g, w);
            let t = MatsubaraTable::build(model, theta, 4_000).unwrap();
            let s = FluxState::from_table(&t, Normalization::Relative).unwrap();
            let p = SystemParams::new(theta, (1.0 / v_b).sqrt(), v_b, 1.0).unwrap();
            matching_condition(&s, &p, 0.1).ratio.unwrap() - 1.0
        };
        crate::numeric::roots::brent(f, 1e-6, 5.0, 1e-10, "boundary").unwrap()
    }

    #[test]
    fn min_gamma_cross_check() {
        for (theta, w, v_b) in [(0.05, 1e3, 100.0), (2.0, 1e3, 50.0)] {
            let bound = drude_min_gamma(&drude(1.0, w), theta, v_b, DEFAULT_TERMS).unwrap();
            assert!(bound > 0.0 && bound.is_finite());
            let g = boundary_gamma(theta, w, v_b);
            assert!((bound / g - 1.0).abs() < 0.2, "theta={theta}: {bound} vs {g}");
        }
    }

    #[test]
    fn min_gamma_limits() {
        let (theta, v_b) = (0.01, 100.0);
        let b = drude_min_gamma(&drude(1.0, 1e4), theta, v_b, DEFAULT_TERMS).unwrap();
        assert!((b * v_b * theta - 1.0).abs() < 0.02, "{}", b * v_b * theta);
        let mut last = f64::INFINITY;
        for k in 0..=12 {
            let theta = 0.1 + 0.2 * k as f64;
            let b = drude_min_gamma(&drude(1.0, 1e3), theta, 50.0, DEFAULT_TERMS).unwrap();
            assert!(b < last);
            last = b;
        }
        assert!(drude_min_gamma(&drude(1.0, 1e3), PI, 50.0, DEFAULT_TERMS).is_err());
        assert!(drude_min_gamma(&ohmic(1.0), 1.0, 50.0, DEFAULT_TERMS).is_err());
    }

    #[test]
    fn plateau_examples() {
        let t = table(ohmic(3.0), 3.0);
        let s = FluxState::from_table(&t, Normalization::Relative).unwrap();
        let mut p = params(3.0, 5.0);
        p.epsilon = 0.01;
        let w = plateau_window(&s, &p, 3.0);
        let want = (1.0 / (0.01 * s.lambda().abs().sqrt())).ln() / s.omega_r();
        assert_relative_eq!(w.t_max, want);
        assert!(w.ok && w.t_max > w.t_min);
        p.epsilon = 1e-300;
        assert!(plateau_window(&s, &p, 3.0).t_max > 1e2);
        // high temperature: exp(omega_R t_max) ~ sqrt(theta) / eps
        let t = table(ohmic(3.0), 1e-3);
        let s = FluxState::from_table(&t, Normalization::Relative).unwrap();
        let mut p = params(1e-3, 5.0);
        p.epsilon = 1e-3;
        let w = plateau_window(&s, &p, 3.0);
        let approx = (1e-3f64.sqrt() / 1e-3).ln() / s.omega_r();
        assert!((w.t_max / approx - 1.0).abs() < 1e-3);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn decomposition_lossless_and_factor_above_one(g in 0.0f64..5.0, frac in 0.05f64..0.9, ww in 0.2f64..3.0) {
            let model = DampingModel::Drude { gamma: g, omega_d: 50.0 };
            let tc = theta_critical(&model, 1_000).unwrap();
            let theta = frac * tc;
            let t = MatsubaraTable::build(model, theta, 1_000).unwrap();
            let p = SystemParams::new(theta, 0.1, 3.0, ww).unwrap();
            let cfg = RateConfig { theta_c: Some(tc), ..RateConfig::default() };
            let r = decay_rate(&t, &p, &cfg).unwrap();
            prop_assert_eq!(r.gamma_rate, r.arrhenius * r.prefactor_classical * r.quantum_factor);
            prop_assert!(r.quantum_factor >= 1.0);
        }
    }
}
