//! Barrier dynamics: the propagator `G+`, the functions `A(t)` and `S(t)`,
//! the bath functions `C1`, `C2`, and the minimal-action paths.
//!
//! `G+` has Laplace transform `1 / (z^2 + z gamma_hat(z) - 1)`. For the
//! rational baths supported here this is a finite sum over simple poles,
//! `G+^{(k)}(t) = sum_i r_i z_i^k exp(z_i t)` with
//! `r_i = 1 / (2 z_i + gamma_hat(z_i) + z_i gamma_hat'(z_i))`.
//!
//! * `A(t) = -G+(t) / 2`
//! * `S(t) = Lambda G+'(t) + int_0^t C1(s) G+(t - s) ds`
//!
//! For `omega_R t >> 1` both grow like `exp(omega_R t)` with the residue
//! `r_R` of the positive pole, and `S / A -> cot(omega_R theta / 2)`.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::bath::{drude_coeffs, DampingModel};
use crate::matsubara::MatsubaraTable;
use crate::numeric::quad::{integrate_vec, QuadOptions};
use crate::numeric::roots::brent;
use crate::numeric::series::{tail_estimate, NeumaierSum, SeriesValue};
use crate::{Error, Result};

/// Smallest accepted separation between two poles.
pub const POLE_SEPARATION: f64 = 1e-8;
/// Smallest accepted `|Lambda|` for the imaginary-time path.
pub const LAMBDA_CAUSTIC: f64 = 1e-6;

/// Positive root `omega_R` of `z^2 + z gamma_hat(z) = 1`.
pub fn grote_hynes(model: &DampingModel) -> Result<f64> {
    model.validate()?;
    let f = |z: f64| z * z + model.zeta(z) - 1.0;
    let mut z = brent(f, 0.0, 1.0, 1e-16, "the Grote-Hynes frequency")?;
    // one Newton step to land on the closest double
    let df = 2.0 * z + model.gamma_hat_real(z) + z * model.gamma_hat_derivative(z);
    if df > 0.0 {
        let step = f(z) / df;
        if step.abs() < 1e-12 {
            z -= step;
        }
    }
    Ok(z)
}

fn gamma_hat_c(model: &DampingModel, z: Complex64) -> (Complex64, Complex64) {
    match *model {
        DampingModel::Ohmic { gamma } => (Complex64::new(gamma, 0.0), Complex64::new(0.0, 0.0)),
        DampingModel::Drude { gamma, omega_d } => {
            let d = z + omega_d;
            (gamma * omega_d / d, -gamma * omega_d / (d * d))
        }
    }
}

/// Poles and residues of the Laplace-transformed barrier propagator.
#[derive(Debug, Clone, PartialEq)]
pub struct PoleDecomposition {
    poles: Vec<Complex64>,
    residues: Vec<Complex64>,
    gh_index: usize,
}

impl PoleDecomposition {
    /// Ohmic: roots of `z^2 + gamma z - 1`. Drude: roots of
    /// `z^3 + omega_d z^2 + (gamma omega_d - 1) z - omega_d`.
    pub fn new(model: &DampingModel) -> Result<Self> {
        let wr = grote_hynes(model)?;
        let mut poles: Vec<Complex64> = Vec::with_capacity(3);
        poles.push(Complex64::new(wr, 0.0));
        match *model {
            DampingModel::Ohmic { .. } => {
                // product of the roots is -1
                poles.push(Complex64::new(-1.0 / wr, 0.0));
            }
            DampingModel::Drude { gamma, omega_d } => {
                // deflate by (z - wr): z^2 + p z + q
                let p = omega_d + wr;
                let q = gamma * omega_d - 1.0 + wr * p;
                let disc = p * p - 4.0 * q;
                if disc >= 0.0 {
                    let s = disc.sqrt();
                    let r1 = -0.5 * (p + s);
                    let r2 = if r1 != 0.0 { q / r1 } else { 0.0 };
                    poles.push(Complex64::new(r1, 0.0));
                    poles.push(Complex64::new(r2, 0.0));
                } else {
                    let im = 0.5 * (-disc).sqrt();
                    poles.push(Complex64::new(-0.5 * p, im));
                    poles.push(Complex64::new(-0.5 * p, -im));
                }
                let cubic = |z: Complex64| ((z + omega_d) * z + (gamma * omega_d - 1.0)) * z - omega_d;
                let dcubic = |z: Complex64| (3.0 * z + 2.0 * omega_d) * z + (gamma * omega_d - 1.0);
                for z in poles.iter_mut().skip(1) {
                    for _ in 0..3 {
                        let d = dcubic(*z);
                        if d.norm() == 0.0 {
                            break;
                        }
                        let step = cubic(*z) / d;
                        *z -= step;
                        if step.norm() <= 1e-16 * z.norm() {
                            break;
                        }
                    }
                }
            }
        }
        let mut min_sep = f64::INFINITY;
        for i in 0..poles.len() {
            for j in (i + 1)..poles.len() {
                min_sep = min_sep.min((poles[i] - poles[j]).norm());
            }
        }
        if min_sep <= POLE_SEPARATION {
            return Err(Error::DegeneratePoles {
                separation: min_sep,
            });
        }
        let residues = poles
            .iter()
            .map(|&z| {
                let (g, dg) = gamma_hat_c(model, z);
                1.0 / (2.0 * z + g + z * dg)
            })
            .collect();
        Ok(Self {
            poles,
            residues,
            gh_index: 0,
        })
    }

    pub fn poles(&self) -> &[Complex64] {
        &self.poles
    }

    pub fn residues(&self) -> &[Complex64] {
        &self.residues
    }

    pub fn gh_index(&self) -> usize {
        self.gh_index
    }

    /// `omega_R`.
    pub fn omega_r(&self) -> f64 {
        self.poles[self.gh_index].re
    }

    /// Residue at `omega_R`, `1 / (2 w + gamma_hat(w) + w gamma_hat'(w))`.
    pub fn residue_r(&self) -> f64 {
        self.residues[self.gh_index].re
    }

    fn sum(&self, t: f64, order: u32) -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&z, &r) in self.poles.iter().zip(&self.residues) {
            acc += r * z.powu(order) * (z * t).exp();
        }
        acc.re
    }

    /// `d^order G+ / dt^order` at `t`, `order <= 3`. `G+(t < 0) = 0`.
    pub fn gplus(&self, t: f64, order: u32) -> Result<f64> {
        if order > 3 {
            return Err(Error::Domain {
                what: "gplus derivative order",
                value: order as f64,
            });
        }
        if t < 0.0 {
            return if order == 0 {
                Ok(0.0)
            } else {
                Err(Error::Domain {
                    what: "gplus derivative at negative time",
                    value: t,
                })
            };
        }
        Ok(self.sum(t, order))
    }

    /// Sum of `|r_i exp(z_i t)|`, the magnitude scale of `G+(t)` roundoff.
    fn gplus_scale(&self, t: f64) -> f64 {
        self.poles
            .iter()
            .zip(&self.residues)
            .map(|(&z, &r)| (r * (z * t).exp()).norm())
            .sum()
    }

    /// `[G+, G+', G+'', G+''']` at `t >= 0`.
    pub fn gplus_all(&self, t: f64) -> [f64; 4] {
        let mut out = [Complex64::new(0.0, 0.0); 4];
        for (&z, &r) in self.poles.iter().zip(&self.residues) {
            let mut term = r * (z * t).exp();
            for o in out.iter_mut() {
                *o += term;
                term *= z;
            }
        }
        [out[0].re, out[1].re, out[2].re, out[3].re]
    }

    /// `A(t) = -G+(t) / 2`, zero for `t < 0`.
    pub fn a_of_t(&self, t: f64) -> f64 {
        if t < 0.0 {
            0.0
        } else {
            -0.5 * self.sum(t, 0)
        }
    }

    /// `A'' - A'^2 / A` from the pole pairs,
    /// `(G G'' - G'^2) = sum_{i<j} r_i r_j (z_i - z_j)^2 exp((z_i + z_j) t)`.
    pub fn a_curvature(&self, t: f64) -> f64 {
        let n = self.poles.len();
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for j in (i + 1)..n {
                let (zi, zj) = (self.poles[i], self.poles[j]);
                let dz = zi - zj;
                acc += self.residues[i] * self.residues[j] * dz * dz * ((zi + zj) * t).exp();
            }
        }
        // A = -G/2: A A'' - A'^2 = (G G'' - G'^2) / 4
        0.25 * acc.re / self.a_of_t(t)
    }

    /// Leading large-time form `-r_R exp(omega_R t) / 2`.
    pub fn a_asymptotic(&self, t: f64) -> f64 {
        -0.5 * self.residue_r() * (self.omega_r() * t).exp()
    }

    /// Real-time path `x(s)` between `x(0) = x_i` and `x(t) = x_f`.
    pub fn x_path(&self, t_total: f64, x_i: f64, x_f: f64, s: f64) -> Result<f64> {
        if !(s >= 0.0 && s <= t_total) {
            return Err(Error::Domain {
                what: "x_path time",
                value: s,
            });
        }
        if s == 0.0 {
            return Ok(x_i);
        }
        if s == t_total {
            return Ok(x_f);
        }
        let gt = self.gplus_all(t_total);
        check_caustic(gt[0], self.gplus_scale(t_total))?;
        let g = self.gplus_all(t_total - s);
        Ok(x_i * g[0] / gt[0] + x_f * (g[1] - g[0] * gt[1] / gt[0]))
    }
}

fn check_caustic(g_t: f64, scale: f64) -> Result<()> {
    if !(g_t.abs() > 64.0 * f64::EPSILON * scale) || !g_t.is_finite() {
        return Err(Error::Caustic {
            what: "G+(t)",
            value: g_t,
        });
    }
    Ok(())
}

/// `A`, `S` and their first two time derivatives at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeFunctions {
    pub t: f64,
    pub a: f64,
    pub a_dot: f64,
    pub a_ddot: f64,
    pub s: f64,
    pub s_dot: f64,
    pub s_ddot: f64,
    /// `A'' - A'^2 / A`, exponentially small at large `t`.
    pub a_curv: f64,
    /// `S' - (A' / A) S`.
    pub s_drift: f64,
    /// `S'' - (A' / A) S'`.
    pub s_rel: f64,
}

impl TimeFunctions {
    /// Builds the small combinations by direct subtraction.
    pub fn from_values(t: f64, a: [f64; 3], s: [f64; 3]) -> Self {
        let ad_a = a[1] / a[0];
        Self {
            t,
            a: a[0],
            a_dot: a[1],
            a_ddot: a[2],
            s: s[0],
            s_dot: s[1],
            s_ddot: s[2],
            a_curv: a[2] - a[1] * ad_a,
            s_drift: s[1] - ad_a * s[0],
            s_rel: s[2] - ad_a * s[1],
        }
    }
}

/// Barrier dynamics for one bath and temperature.
#[derive(Debug, Clone)]
pub struct BarrierDynamics<'a> {
    decomposition: PoleDecomposition,
    table: &'a MatsubaraTable,
    lambda: f64,
    c1_quadrature_tol: f64,
}

impl<'a> BarrierDynamics<'a> {
    pub fn new(table: &'a MatsubaraTable) -> Result<Self> {
        Ok(Self {
            decomposition: PoleDecomposition::new(table.model())?,
            table,
            lambda: table.lambda().value,
            c1_quadrature_tol: 1e-9,
        })
    }

    /// Relative tolerance of the `S(t)` convolution quadrature.
    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.c1_quadrature_tol = tol;
        self
    }

    pub fn decomposition(&self) -> &PoleDecomposition {
        &self.decomposition
    }

    pub fn table(&self) -> &MatsubaraTable {
        self.table
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn omega_r(&self) -> f64 {
        self.decomposition.omega_r()
    }

    fn require_pointwise_kernel(&self) -> Result<()> {
        if self.table.model().is_strict_ohmic() {
            Err(Error::Unsupported("C1, C2 and the exact S(t)"))
        } else {
            Ok(())
        }
    }

    /// `C1(s)` and `C2(s)` with truncation metadata.
    pub fn c_functions(&self, s: f64) -> Result<(SeriesValue, SeriesValue)> {
        self.require_pointwise_kernel()?;
        if !(s >= 0.0) {
            return Err(Error::Domain {
                what: "c_functions time",
                value: s,
            });
        }
        let model = *self.table.model();
        let (gamma, omega_d) = match model {
            DampingModel::Drude { gamma, omega_d } => (gamma, omega_d),
            _ => {
                let zero = SeriesValue::exact(0.0);
                return Ok((zero, zero));
            }
        };
        if gamma == 0.0 {
            let zero = SeriesValue::exact(0.0);
            return Ok((zero, zero));
        }
        let theta = self.table.theta();
        let nu = self.table.nu();
        let u = self.table.u();
        let n_max = self.table.terms();
        let mut acc1 = NeumaierSum::new();
        let mut acc2 = NeumaierSum::new();
        for n in (1..=n_max).rev() {
            let (g, f) = drude_coeffs(gamma, omega_d, nu[n], s);
            acc1.add(u[n] * g);
            acc2.add(nu[n] * u[n] * f);
        }
        let c1_term = |x: f64| {
            let v = 2.0 * core::f64::consts::PI * x / theta;
            drude_coeffs(gamma, omega_d, v, s).0 * self.table.u_continuous(x)
        };
        let c2_term = |x: f64| {
            let v = 2.0 * core::f64::consts::PI * x / theta;
            v * drude_coeffs(gamma, omega_d, v, s).1 * self.table.u_continuous(x)
        };
        let (t1, e1) = tail_estimate(n_max, &c1_term);
        let (t2, e2) = tail_estimate(n_max, &c2_term);
        let g0 = drude_coeffs(gamma, omega_d, 0.0, s).0;
        let c1 = SeriesValue {
            value: acc1.value() + t1,
            partial: acc1.value(),
            tail: t1,
            tail_error: e1,
            terms: n_max,
        }
        .scale(2.0 / theta)
        .offset(-g0 / theta);
        let c2 = SeriesValue {
            value: acc2.value() + t2,
            partial: acc2.value(),
            tail: t2,
            tail_error: e2,
            terms: n_max,
        }
        .scale(2.0 / theta);
        Ok((c1, c2))
    }

    fn c1(&self, s: f64) -> Result<f64> {
        Ok(self.c_functions(s)?.0.value)
    }

    /// `[S, S', S'']` at `t >= 0` from the convolution with `C1`.
    pub fn s_of_t(&self, t: f64) -> Result<[f64; 3]> {
        self.require_pointwise_kernel()?;
        if !(t >= 0.0) {
            return Err(Error::Domain {
                what: "s_of_t time",
                value: t,
            });
        }
        let g = self.decomposition.gplus_all(t);
        let lam = self.lambda;
        let mut s = [lam * g[1], lam * g[2], lam * g[3]];
        if self.table.model().gamma() == 0.0 || t == 0.0 {
            if t == 0.0 {
                s[2] += self.c1(0.0)?;
            }
            return Ok(s);
        }
        let opts = QuadOptions {
            rel_tol: self.c1_quadrature_tol,
            abs_tol: 1e-300,
            max_intervals: 4000,
        };
        let mut failure = None;
        let conv = integrate_vec(
            |x| {
                let c = match self.c1(x) {
                    Ok(c) => c,
                    Err(e) => {
                        failure = Some(e);
                        0.0
                    }
                };
                let gg = self.decomposition.gplus_all(t - x);
                [c * gg[0], c * gg[1], c * gg[2]]
            },
            0.0,
            t,
            &opts,
        )?;
        if let Some(e) = failure {
            return Err(e);
        }
        s[0] += conv.value[0];
        s[1] += conv.value[1];
        s[2] += conv.value[2] + self.c1(t)?;
        Ok(s)
    }

    /// Leading large-time `[S, S', S'']`:
    /// `S = -cot(omega_R theta / 2) r_R exp(omega_R t) / 2`.
    pub fn s_asymptotic(&self, t: f64) -> [f64; 3] {
        let w = self.omega_r();
        let half = 0.5 * w * self.table.theta();
        let s = -0.5 * (half.cos() / half.sin()) * self.decomposition.residue_r() * (w * t).exp();
        [s, w * s, w * w * s]
    }

    /// Exact `A`, `S` and derivatives.
    pub fn time_functions(&self, t: f64) -> Result<TimeFunctions> {
        let g = self.decomposition.gplus_all(t);
        let s = self.s_of_t(t)?;
        let mut tf = TimeFunctions::from_values(t, [-0.5 * g[0], -0.5 * g[1], -0.5 * g[2]], s);
        tf.a_curv = self.decomposition.a_curvature(t);
        Ok(tf)
    }

    /// Leading large-time `A`, `S` and derivatives; available for every model.
    pub fn time_functions_asymptotic(&self, t: f64) -> TimeFunctions {
        let w = self.omega_r();
        let a = self.decomposition.a_asymptotic(t);
        let s = self.s_asymptotic(t);
        TimeFunctions {
            t,
            a,
            a_dot: w * a,
            a_ddot: w * w * a,
            s: s[0],
            s_dot: s[1],
            s_ddot: s[2],
            a_curv: 0.0,
            s_drift: 0.0,
            s_rel: 0.0,
        }
    }

    /// Real-time path `r(s)` with `r(0) = r_i`, `r(t) = r_f` driven by
    /// `F'(s) = rbar C1(s) / Lambda`.
    pub fn r_path(&self, t_total: f64, r_i: f64, r_f: f64, rbar: f64, s: f64) -> Result<f64> {
        if !(s >= 0.0 && s <= t_total) {
            return Err(Error::Domain {
                what: "r_path time",
                value: s,
            });
        }
        let d = &self.decomposition;
        let gt = d.gplus_all(t_total);
        check_caustic(gt[0], d.gplus_scale(t_total))?;
        let gs = d.gplus_all(s);
        let hom = r_f * gs[0] / gt[0] + r_i * (gs[1] - gs[0] * gt[1] / gt[0]);
        if rbar == 0.0 || self.table.model().gamma() == 0.0 {
            return Ok(hom);
        }
        self.require_pointwise_kernel()?;
        if self.lambda.abs() < LAMBDA_CAUSTIC {
            return Err(Error::Caustic {
                what: "Lambda",
                value: self.lambda,
            });
        }
        let k = rbar / self.lambda;
        let opts = QuadOptions::with_rel_tol(self.c1_quadrature_tol);
        let conv = |upper: f64| -> Result<f64> {
            if upper == 0.0 {
                return Ok(0.0);
            }
            let mut failure = None;
            let r = integrate_vec(
                |x| {
                    let c = self.c1(x).unwrap_or_else(|e| {
                        failure = Some(e);
                        0.0
                    });
                    [d.gplus_all(upper - x)[0] * c]
                },
                0.0,
                upper,
                &opts,
            )?;
            match failure {
                Some(e) => Err(e),
                None => Ok(k * r.value[0]),
            }
        };
        let p_s = conv(s)?;
        let p_t = conv(t_total)?;
        Ok(hom + p_s - gs[0] / gt[0] * p_t)
    }

    /// Minimal imaginary-time path for endpoints `xbar`, `rbar`, coupled to
    /// a real-time path `x(s)` sampled on the uniform grid
    /// `s_k = k t_total / (len - 1)`.
    pub fn imaginary_path(
        &self,
        xbar: f64,
        rbar: f64,
        sampled_x: &[f64],
        t_total: f64,
    ) -> Result<ImaginaryPath> {
        ImaginaryPath::new(self, xbar, rbar, sampled_x, t_total)
    }
}

/// `q(sigma)` for `0 < sigma < theta`, precomputed for repeated evaluation.
#[derive(Debug, Clone)]
pub struct ImaginaryPath {
    theta: f64,
    xbar: f64,
    b: Complex64,
    lambda: f64,
    nu: Vec<f64>,
    u: Vec<f64>,
    zeta: Vec<f64>,
    f_x: Vec<f64>,
    g_x: Vec<f64>,
    cg0: f64,
}

impl ImaginaryPath {
    fn new(
        dynamics: &BarrierDynamics<'_>,
        xbar: f64,
        rbar: f64,
        sampled_x: &[f64],
        t_total: f64,
    ) -> Result<Self> {
        let lambda = dynamics.lambda;
        if lambda.abs() < LAMBDA_CAUSTIC {
            return Err(Error::Caustic {
                what: "Lambda",
                value: lambda,
            });
        }
        if sampled_x.len() < 2 {
            return Err(Error::Domain {
                what: "sampled_x length",
                value: sampled_x.len() as f64,
            });
        }
        if !(t_total >= 0.0) {
            return Err(Error::Domain {
                what: "imaginary_path t_total",
                value: t_total,
            });
        }
        let table = dynamics.table;
        let n_max = table.terms();
        let mut f_x = alloc::vec![0.0; n_max + 1];
        let mut g_x = alloc::vec![0.0; n_max + 1];
        if sampled_x.iter().any(|&v| v != 0.0) && t_total > 0.0 {
            let model = table.model();
            for n in 0..=n_max {
                let nu = table.nu()[n];
                let (g, f) = functionals(model, nu, sampled_x, t_total)?;
                g_x[n] = g;
                f_x[n] = f;
            }
        }
        let u = table.u();
        let mut acc = NeumaierSum::new();
        for n in (1..=n_max).rev() {
            acc.add(u[n] * g_x[n]);
        }
        let cg0 = u[0] * g_x[0] + 2.0 * acc.value();
        let theta = table.theta();
        let b = -(Complex64::new(rbar, -cg0 / theta)) / lambda;
        Ok(Self {
            theta,
            xbar,
            b,
            lambda,
            nu: table.nu().to_vec(),
            u: u.to_vec(),
            zeta: table.zeta().to_vec(),
            f_x,
            g_x,
            cg0,
        })
    }

    /// Jump coefficient `b = q'(0+) - q'(theta-)`.
    pub fn b(&self) -> Complex64 {
        self.b
    }

    /// `q(sigma)` on the open interval; the endpoints are the one-sided
    /// limits `q(0+) = rbar - xbar/2` and `q(theta-) = rbar + xbar/2`.
    pub fn at(&self, sigma: f64) -> Result<Complex64> {
        let theta = self.theta;
        if !(sigma >= 0.0 && sigma <= theta) {
            return Err(Error::Domain {
                what: "imaginary_path sigma",
                value: sigma,
            });
        }
        let endpoint = sigma == 0.0 || sigma == theta;
        let mut odd_x = NeumaierSum::new();
        let mut odd_f = NeumaierSum::new();
        let mut even_u = NeumaierSum::new();
        let mut even_g = NeumaierSum::new();
        if !endpoint {
            for n in (1..self.nu.len()).rev() {
                let nu = self.nu[n];
                let u = self.u[n];
                let (sn, cs) = (nu * sigma).sin_cos();
                odd_x.add(u * (self.zeta[n] - 1.0) * sn / nu);
                odd_f.add(u * self.f_x[n] * sn);
                even_u.add(u * cs);
                even_g.add(u * self.g_x[n] * cs);
            }
        }
        // cosine sums converge faster in the interior than their
        // endpoint values, which are taken from the tail-corrected totals
        let (cu, cg) = if endpoint {
            (theta * self.lambda, self.cg0)
        } else {
            (
                self.u[0] + 2.0 * even_u.value(),
                self.u[0] * self.g_x[0] + 2.0 * even_g.value(),
            )
        };
        let x = self.xbar;
        let real_part = x * (sigma / theta - 0.5) + 2.0 * x / theta * odd_x.value();
        let bracket =
            self.b * cu + Complex64::new(2.0 * odd_f.value(), 0.0) - Complex64::new(0.0, cg);
        Ok(Complex64::new(real_part, 0.0) - bracket / theta)
    }
}

/// `(g_n[x], f_n[x]) = int_0^t (g_n(s), f_n(s)) x(s) ds` by the trapezoid
/// rule with one Richardson step when the grid has an even number of panels.
fn functionals(model: &DampingModel, nu: f64, x: &[f64], t: f64) -> Result<(f64, f64)> {
    let panels = x.len() - 1;
    let h = t / panels as f64;
    let mut gv = Vec::with_capacity(x.len());
    let mut fv = Vec::with_capacity(x.len());
    for (k, &xv) in x.iter().enumerate() {
        let (g, f) = model.fourier_coeffs_at(nu, k as f64 * h)?;
        gv.push(g * xv);
        fv.push(f * xv);
    }
    let trap = |v: &[f64], stride: usize| {
        let mut acc = NeumaierSum::new();
        let last = v.len() - 1;
        let mut k = 0;
        while k <= last {
            let w = if k == 0 || k == last { 0.5 } else { 1.0 };
            acc.add(w * v[k]);
            k += stride;
        }
        acc.value() * h * stride as f64
    };
    if panels >= 2 && panels.is_multiple_of(2) {
        let (g1, g2) = (trap(&gv, 1), trap(&gv, 2));
        let (f1, f2) = (trap(&fv, 1), trap(&fv, 2));
        Ok(((4.0 * g1 - g2) / 3.0, (4.0 * f1 - f2) / 3.0))
    } else {
        Ok((trap(&gv, 1), trap(&fv, 1)))
    }
}
