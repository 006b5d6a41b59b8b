//! Damping models and bath-derived kernels.
//!
//! Two baths are supported: Ohmic with constant friction `gamma_hat(z) = gamma`
//! and Drude with `gamma_hat(z) = gamma omega_d / (omega_d + z)`. The Drude
//! memory kernel is `gamma(s) = gamma omega_d exp(-omega_d s)` and its
//! spectral density `I(w) = gamma w omega_d^2 / (w^2 + omega_d^2)`.
//!
//! Strict Ohmic damping (`gamma > 0`) has a delta-function memory kernel, so
//! every quantity that needs `gamma(s)` or the coefficients `g_n(s)` pointwise
//! rejects it with [`Error::Unsupported`]. A Drude bath with a large cutoff is
//! the regularized substitute.

use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::invalid;
use crate::numeric::quad::{integrate, integrate_to_infinity, QuadOptions};
use crate::numeric::series::SeriesValue;
use crate::numeric::special::exprel;
use crate::{Error, Result};

/// Bath specification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DampingModel {
    Ohmic { gamma: f64 },
    Drude { gamma: f64, omega_d: f64 },
}

impl DampingModel {
    pub fn ohmic(gamma: f64) -> Result<Self> {
        let m = DampingModel::Ohmic { gamma };
        m.validate()?;
        Ok(m)
    }

    pub fn drude(gamma: f64, omega_d: f64) -> Result<Self> {
        let m = DampingModel::Drude { gamma, omega_d };
        m.validate()?;
        Ok(m)
    }

    /// Checks `gamma >= 0` and, for Drude, `omega_d > 0`.
    pub fn validate(&self) -> Result<()> {
        let g = self.gamma();
        if !(g >= 0.0 && g.is_finite()) {
            return Err(invalid("gamma", g, "must be finite and >= 0"));
        }
        if let DampingModel::Drude { omega_d, .. } = *self {
            if !(omega_d > 0.0 && omega_d.is_finite()) {
                return Err(invalid("omega_d", omega_d, "must be finite and > 0"));
            }
        }
        Ok(())
    }

    pub fn gamma(&self) -> f64 {
        match *self {
            DampingModel::Ohmic { gamma } | DampingModel::Drude { gamma, .. } => gamma,
        }
    }

    pub fn omega_d(&self) -> Option<f64> {
        match *self {
            DampingModel::Drude { omega_d, .. } => Some(omega_d),
            DampingModel::Ohmic { .. } => None,
        }
    }

    /// Same model with a different damping strength.
    pub fn with_gamma(&self, gamma: f64) -> Self {
        match *self {
            DampingModel::Ohmic { .. } => DampingModel::Ohmic { gamma },
            DampingModel::Drude { omega_d, .. } => DampingModel::Drude { gamma, omega_d },
        }
    }

    /// Ohmic with nonzero friction: the memory kernel is a delta function.
    pub fn is_strict_ohmic(&self) -> bool {
        matches!(*self, DampingModel::Ohmic { gamma } if gamma > 0.0)
    }

    /// `gamma_hat(z)`, the Laplace transform of the memory kernel.
    pub fn gamma_hat(&self, z: Complex64) -> Result<Complex64> {
        match *self {
            DampingModel::Ohmic { gamma } => Ok(Complex64::new(gamma, 0.0)),
            DampingModel::Drude { gamma, omega_d } => {
                let d = z + omega_d;
                if d.norm() <= 1e-14 * omega_d {
                    return Err(Error::Domain {
                        what: "gamma_hat (Drude pole at z = -omega_d)",
                        value: z.re,
                    });
                }
                Ok(gamma * omega_d / d)
            }
        }
    }

    /// `gamma_hat(z)` for real `z > -omega_d`.
    pub fn gamma_hat_real(&self, z: f64) -> f64 {
        match *self {
            DampingModel::Ohmic { gamma } => gamma,
            DampingModel::Drude { gamma, omega_d } => gamma * omega_d / (omega_d + z),
        }
    }

    /// `d gamma_hat / dz` for real `z`.
    pub fn gamma_hat_derivative(&self, z: f64) -> f64 {
        match *self {
            DampingModel::Ohmic { .. } => 0.0,
            DampingModel::Drude { gamma, omega_d } => {
                let d = omega_d + z;
                -gamma * omega_d / (d * d)
            }
        }
    }

    /// Memory kernel `gamma(s)` for `s >= 0`.
    pub fn gamma_kernel(&self, s: f64) -> Result<f64> {
        if !(s >= 0.0) {
            return Err(Error::Domain {
                what: "gamma_kernel",
                value: s,
            });
        }
        match *self {
            DampingModel::Ohmic { gamma: 0.0 } => Ok(0.0),
            DampingModel::Ohmic { .. } => Err(Error::Unsupported("the pointwise memory kernel")),
            DampingModel::Drude { gamma, omega_d } => Ok(gamma * omega_d * (-omega_d * s).exp()),
        }
    }

    /// Spectral density `I(w)` for `w >= 0`.
    pub fn spectral_density(&self, w: f64) -> f64 {
        match *self {
            DampingModel::Ohmic { gamma } => gamma * w,
            DampingModel::Drude { gamma, omega_d } => {
                gamma * w * omega_d * omega_d / (w * w + omega_d * omega_d)
            }
        }
    }

    /// `zeta = |nu| gamma_hat(|nu|)`.
    pub fn zeta(&self, nu: f64) -> f64 {
        let a = nu.abs();
        if a == 0.0 {
            return 0.0;
        }
        a * self.gamma_hat_real(a)
    }

    /// Fourier coefficients `(g_n(s), f_n(s))` of the bath correlation kernel.
    ///
    /// Closed forms from partial fractions of the Drude integrand, written
    /// so that the removable singularity at `|nu_n| = omega_d` is harmless.
    pub fn fourier_coeffs(&self, n: i64, theta: f64, s: f64) -> Result<(f64, f64)> {
        if !(theta > 0.0) {
            return Err(invalid("theta", theta, "must be > 0"));
        }
        let nu = 2.0 * PI * n as f64 / theta;
        self.fourier_coeffs_at(nu, s)
    }

    /// As [`fourier_coeffs`](Self::fourier_coeffs) with the Matsubara
    /// frequency `nu` (signed) given directly.
    pub fn fourier_coeffs_at(&self, nu: f64, s: f64) -> Result<(f64, f64)> {
        if !(s >= 0.0) {
            return Err(Error::Domain {
                what: "fourier_coeffs",
                value: s,
            });
        }
        match *self {
            DampingModel::Ohmic { gamma: 0.0 } => Ok((0.0, 0.0)),
            DampingModel::Ohmic { .. } => Err(Error::Unsupported("the coefficients g_n(s)")),
            DampingModel::Drude { gamma, omega_d } => {
                Ok(drude_coeffs(gamma, omega_d, nu, s))
            }
        }
    }

    /// Weight of the periodic delta comb removed from the imaginary-time
    /// kernel: `gamma(0)`. Infinite for strict Ohmic damping.
    pub fn k_endpoint_weight(&self) -> f64 {
        match *self {
            DampingModel::Ohmic { gamma: 0.0 } => 0.0,
            DampingModel::Ohmic { .. } => f64::INFINITY,
            DampingModel::Drude { gamma, omega_d } => gamma * omega_d,
        }
    }

    /// Imaginary-time kernel `k(sigma) = (2/theta) sum_{n>=1} zeta_n cos(nu_n sigma)`
    /// for `0 < sigma < theta`, with the periodic delta comb of weight
    /// [`k_endpoint_weight`](Self::k_endpoint_weight) removed.
    ///
    /// The cosine series converges only in the distributional sense, so it
    /// is resummed. Ohmic: `-gamma pi / (theta^2 sin^2(pi sigma / theta))`.
    /// Drude: writing `1/(omega_d + nu) = int_0^inf exp(-(omega_d + nu) t) dt`
    /// turns the sum into a geometric series, leaving the smooth integral
    /// `k = (2 gamma omega_d / theta) [-1/2 - int_0^inf e^{-u} Re(q/(1-q)) du]`
    /// with `q = exp(-2 pi u / (theta omega_d) + i 2 pi sigma / theta)`.
    /// The result carries the quadrature error estimate as `tail_error`.
    pub fn k_kernel(&self, theta: f64, sigma: f64) -> Result<SeriesValue> {
        if !(theta > 0.0) {
            return Err(invalid("theta", theta, "must be > 0"));
        }
        if !(sigma > 0.0 && sigma < theta) {
            return Err(Error::Domain {
                what: "k_kernel (open interval 0 < sigma < theta)",
                value: sigma,
            });
        }
        let x = 2.0 * PI * sigma / theta;
        match *self {
            DampingModel::Ohmic { gamma } => {
                let half_sin = (0.5 * x).sin();
                let v = -gamma * PI / (theta * theta * half_sin * half_sin);
                Ok(SeriesValue::exact(v))
            }
            DampingModel::Drude { gamma, omega_d } => {
                if gamma == 0.0 {
                    return Ok(SeriesValue::exact(0.0));
                }
                let rate = 2.0 * PI / (theta * omega_d);
                let opts = QuadOptions {
                    rel_tol: 1e-12,
                    abs_tol: 1e-15,
                    max_intervals: 4000,
                };
                // Re(q / (1 - q)) with 1 - q formed without cancellation
                let (sx, cx) = x.sin_cos();
                let half = (0.5 * x).sin();
                let integrand = |u: f64| {
                    let a = -u * rate;
                    let ea = a.exp();
                    let one_minus_q = Complex64::new(
                        -(libm::expm1(a) * cx - 2.0 * half * half),
                        -ea * sx,
                    );
                    let q = Complex64::new(ea * cx, ea * sx);
                    (-u).exp() * (q / one_minus_q).re
                };
                // near the endpoints the integrand peaks at u ~ dist / rate
                let dist = x.min(2.0 * PI - x);
                let mut lo = 0.0;
                let mut hi = (dist / rate).min(1.0);
                let mut value = 0.0;
                let mut error = 0.0;
                loop {
                    let p = integrate(integrand, lo, hi, &opts)?;
                    value += p.value;
                    error += p.error;
                    if hi >= 1.0 {
                        break;
                    }
                    lo = hi;
                    hi = (hi * 4.0).min(1.0);
                }
                let t = integrate_to_infinity(integrand, 1.0, &opts)?;
                let r = (value + t.value, error + t.error);
                let k = 2.0 * gamma * omega_d / theta;
                let v = k * (-0.5 - r.0);
                Ok(SeriesValue {
                    value: v,
                    partial: v,
                    tail: 0.0,
                    tail_error: k * r.1,
                    terms: 0,
                })
            }
        }
    }
}

/// Drude `(g, f)` at signed Matsubara frequency `nu`.
pub(crate) fn drude_coeffs(gamma: f64, omega_d: f64, nu: f64, s: f64) -> (f64, f64) {
    let a = omega_d;
    let b = nu.abs();
    let (m, big) = if a < b { (a, b) } else { (b, a) };
    let delta = big - m;
    let pre = gamma * omega_d * omega_d / (a + b);
    let decay = (-m * s).exp();
    let rel = exprel(-delta * s);
    let g = if delta * s > 1.0 {
        pre * (big * (-big * s).exp() - m * decay) / delta
    } else {
        pre * decay * (1.0 - big * s * rel)
    };
    let f = pre * nu * decay * s * rel;
    (g, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::quad::integrate_vec;
    use crate::numeric::series::NeumaierSum;
    use approx::assert_relative_eq;

    fn drude(g: f64, w: f64) -> DampingModel {
        DampingModel::drude(g, w).unwrap()
    }

    #[test]
    fn gamma_hat_examples() {
        let o = DampingModel::ohmic(3.0).unwrap();
        assert_eq!(o.gamma_hat(Complex64::new(0.5, 0.0)).unwrap().re, 3.0);
        let d = drude(1.0, 10.0);
        assert_eq!(d.gamma_hat(Complex64::new(0.0, 0.0)).unwrap().re, 1.0);
        assert_eq!(d.gamma_hat(Complex64::new(10.0, 0.0)).unwrap().re, 0.5);
        assert!(matches!(
            d.gamma_hat(Complex64::new(-10.0, 0.0)),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn rejects_invalid_parameters() {
        assert!(DampingModel::ohmic(-1.0).is_err());
        assert!(DampingModel::ohmic(f64::NAN).is_err());
        assert!(DampingModel::drude(1.0, 0.0).is_err());
        assert!(DampingModel::drude(1.0, -2.0).is_err());
    }

    #[test]
    fn kernel_examples() {
        let d = drude(1.0, 10.0);
        assert_eq!(d.gamma_kernel(0.0).unwrap(), 10.0);
        assert_relative_eq!(d.gamma_kernel(0.1).unwrap(), 3.678_794_411_714_423, max_relative = 1e-12);
        assert!(matches!(
            DampingModel::ohmic(1.0).unwrap().gamma_kernel(0.0),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn spectral_density_and_zeta_examples() {
        assert_eq!(DampingModel::ohmic(2.0).unwrap().spectral_density(3.0), 6.0);
        assert_eq!(drude(2.0, 10.0).spectral_density(0.0), 0.0);
        assert_relative_eq!(drude(1.0, 10.0).spectral_density(10.0), 5.0, max_relative = 1e-15);
        assert_eq!(DampingModel::ohmic(3.0).unwrap().zeta(2.0), 6.0);
        assert_eq!(drude(1.0, 10.0).zeta(0.0), 0.0);
        assert_relative_eq!(drude(1.0, 10.0).zeta(10.0), 5.0, max_relative = 1e-15);
    }

    #[test]
    fn drude_tends_to_ohmic() {
        let d = drude(2.0, 1e4);
        for z in [0.1, 1.0, 10.0] {
            let v = d.gamma_hat(Complex64::new(z, 0.0)).unwrap().re;
            assert!((v - 2.0).abs() < 1e-3 * 2.0, "z={z}: {v}");
        }
    }

    #[test]
    fn coefficient_parity_and_zero_mode() {
        let d = drude(1.0, 10.0);
        for n in [1_i64, 2, 7, 40] {
            for s in [0.0, 0.05, 0.3, 2.0] {
                let (gp, fp) = d.fourier_coeffs(n, 1.3, s).unwrap();
                let (gm, fm) = d.fourier_coeffs(-n, 1.3, s).unwrap();
                assert_eq!(gp, gm);
                assert_eq!(fp, -fm);
            }
        }
        for s in [0.0, 0.4, 3.0] {
            let (g0, f0) = d.fourier_coeffs(0, 1.0, s).unwrap();
            assert_eq!(f0, 0.0);
            assert_relative_eq!(g0, d.gamma_kernel(s).unwrap(), max_relative = 1e-14);
        }
    }

    #[test]
    fn coefficients_continuous_through_resonance() {
        // |nu| = omega_d: theta = 2 pi / 10 at n = 1
        let d = drude(1.0, 10.0);
        let theta = 2.0 * PI / 10.0;
        let (g, f) = d.fourier_coeffs(1, theta, 0.2).unwrap();
        let (g2, f2) = d.fourier_coeffs(1, theta * (1.0 + 1e-9), 0.2).unwrap();
        assert!((g - g2).abs() < 1e-7 && (f - f2).abs() < 1e-7);
        // limit a = b: g = gamma w^2 (1 - w s) e^{-w s} / (2 w)
        let want = 100.0 * (1.0 - 2.0) * (-2.0_f64).exp() / 20.0;
        assert_relative_eq!(g, want, max_relative = 1e-12);
    }

    fn oscillatory_tail(h: &dyn Fn(f64) -> f64, cosine: bool, w: f64, s: f64) -> f64 {
        // int_W^inf h(w) cos|sin(w s) dw with W a multiple of 2 pi / s,
        // by two integrations by parts.
        let dh = |x: f64| {
            let e = 1e-3 * x;
            (h(x + e) - h(x - e)) / (2.0 * e)
        };
        if cosine {
            -dh(w) / (s * s)
        } else {
            h(w) / s
        }
    }

    fn quad_coeffs(d: &DampingModel, nu: f64, s: f64) -> (f64, f64) {
        let periods = 400.0;
        let wmax = periods * 2.0 * PI / s;
        let hg = |w: f64| 2.0 / PI * d.spectral_density(w) * w / (w * w + nu * nu);
        let hf = |w: f64| 2.0 / PI * d.spectral_density(w) * nu / (w * w + nu * nu);
        let opts = QuadOptions {
            rel_tol: 1e-13,
            abs_tol: 1e-15,
            max_intervals: 20000,
        };
        let step = 2.0 * PI / s;
        let mut g = 0.0;
        let mut f = 0.0;
        let mut a = 0.0;
        while a < wmax - 1e-9 {
            let r = integrate_vec(
                |w| [hg(w) * (w * s).cos(), hf(w) * (w * s).sin()],
                a,
                a + step,
                &opts,
            )
            .unwrap();
            g += r.value[0];
            f += r.value[1];
            a += step;
        }
        g += oscillatory_tail(&hg, true, wmax, s);
        f += oscillatory_tail(&hf, false, wmax, s);
        (g, f)
    }

    #[test]
    fn coefficients_match_frequency_integrals() {
        let d = drude(1.0, 10.0);
        for (n, theta, s) in [(1_i64, 1.0, 0.3), (3, 1.0, 0.7), (1, 2.0 * PI / 10.0, 0.5), (-2, 0.5, 1.1)] {
            let nu = 2.0 * PI * n as f64 / theta;
            let (g, f) = d.fourier_coeffs(n, theta, s).unwrap();
            let (gq, fq) = quad_coeffs(&d, nu, s);
            assert!((g - gq).abs() < 1e-8, "n={n} s={s}: g {g} vs {gq}");
            assert!((f - fq).abs() < 1e-8, "n={n} s={s}: f {f} vs {fq}");
        }
    }

    #[test]
    fn kernel_is_cosine_transform_of_spectral_density() {
        let d = drude(1.0, 10.0);
        let h = |w: f64| 2.0 / PI * d.spectral_density(w) / w;
        let opts = QuadOptions {
            rel_tol: 1e-12,
            abs_tol: 1e-14,
            max_intervals: 20000,
        };
        for s in [0.01, 0.1, 0.5, 1.0, 2.0] {
            let step = 2.0 * PI / s;
            let wmax = 200.0 * step;
            let mut acc = 0.0;
            let mut a = 0.0;
            while a < wmax - 1e-9 {
                acc += integrate(|w| h(w) * (w * s).cos(), a, a + step, &opts)
                    .unwrap()
                    .value;
                a += step;
            }
            acc += oscillatory_tail(&h, true, wmax, s);
            let want = d.gamma_kernel(s).unwrap();
            assert!((acc - want).abs() < 1e-6 * want.max(1.0), "s={s}: {acc} vs {want}");
        }
    }

    #[test]
    fn k_kernel_vanishes_without_damping() {
        let o = DampingModel::ohmic(0.0).unwrap();
        assert_eq!(o.k_kernel(2.0, 0.7).unwrap().value, 0.0);
        let d = drude(0.0, 10.0);
        assert_eq!(d.k_kernel(2.0, 0.7).unwrap().value, 0.0);
    }

    #[test]
    fn k_kernel_rejects_endpoints() {
        let d = drude(1.0, 10.0);
        assert!(d.k_kernel(2.0, 0.0).is_err());
        assert!(d.k_kernel(2.0, 2.0).is_err());
    }

    #[test]
    fn k_kernel_reports_small_error() {
        let d = drude(1.0, 10.0);
        let k = d.k_kernel(2.0, 1.0).unwrap();
        assert!(k.tail_error < 1e-9 * k.value.abs());
    }

    #[test]
    fn k_kernel_matches_direct_sum_with_smoothing() {
        // Abel-regularized direct sum: sum zeta_n cos(nu sigma) r^n, r -> 1.
        let d = drude(1.0, 3.0);
        let theta = 1.5;
        let sigma = 0.4;
        let k = d.k_kernel(theta, sigma).unwrap().value;
        let mut vals = [0.0; 2];
        for (i, r) in [1.0 - 2e-5, 1.0 - 1e-5].into_iter().enumerate() {
            let mut acc = NeumaierSum::new();
            for n in 1..4_000_000 {
                let nu = 2.0 * PI * n as f64 / theta;
                acc.add(d.zeta(nu) * (nu * sigma).cos() * r.powi(n));
            }
            vals[i] = 2.0 / theta * acc.value();
        }
        // linear extrapolation to r = 1
        let direct = 2.0 * vals[1] - vals[0];
        assert!((k - direct).abs() < 1e-4 * k.abs(), "{k} vs {direct}");
    }

    #[test]
    fn k_kernel_integrates_to_minus_endpoint_weight() {
        let d = drude(1.0, 10.0);
        let theta = 2.0;
        let r = integrate(
            |s| d.k_kernel(theta, s).unwrap().value,
            0.0,
            theta,
            &QuadOptions {
                rel_tol: 1e-9,
                abs_tol: 1e-9,
                max_intervals: 4000,
            },
        );
        let r = r.unwrap();
        let total = r.value + d.k_endpoint_weight();
        assert!(total.abs() < 1e-5, "{total}");
    }

    #[test]
    fn ohmic_k_kernel_closed_form_matches_drude_limit() {
        let theta = 2.0;
        let sigma = 0.8;
        let o = DampingModel::ohmic(1.0).unwrap().k_kernel(theta, sigma).unwrap().value;
        let d = drude(1.0, 1e5).k_kernel(theta, sigma).unwrap().value;
        assert!(((o - d) / o).abs() < 1e-3, "{o} vs {d}");
    }
}
