//! Globally adaptive Gauss-Kronrod (G10/K21) quadrature.
//!
//! The integrand may be vector valued (`[f64; K]`) so that several
//! convolutions sharing one expensive kernel are integrated on a single
//! subdivision. The error estimate is the raw `|K21 - G10|` difference,
//! which is conservative for smooth integrands.

use alloc::vec::Vec;

use crate::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_059_5,
    0.865_063_366_688_984_510_732_096_688_423_5,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_114_9,
    0.562_757_134_668_604_683_339_000_099_272_7,
    0.433_395_394_129_247_190_799_265_943_165_8,
    0.294_392_862_701_460_198_131_126_603_103_9,
    0.148_874_338_981_631_210_884_826_001_129_7,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_19,
    0.032_558_162_307_964_727_478_818_972_459_39,
    0.054_755_896_574_351_996_031_381_300_244_58,
    0.075_039_674_810_919_952_767_043_140_916_19,
    0.093_125_454_583_697_605_535_065_465_083_37,
    0.109_387_158_802_297_641_899_210_590_325_8,
    0.123_491_976_262_065_851_077_208_977_184_4,
    0.134_709_217_311_473_325_928_054_001_771_7,
    0.142_775_938_577_060_080_797_094_273_138_7,
    0.147_739_104_901_338_491_374_841_515_972_1,
    0.149_445_554_002_916_905_664_936_468_389_8,
];

// Gauss weights for the odd Kronrod nodes XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_33,
    0.149_451_349_150_580_593_145_776_339_657_7,
    0.219_086_362_515_982_043_995_534_934_228_2,
    0.269_266_719_309_996_355_091_226_921_569_5,
    0.295_524_224_714_752_870_173_892_994_651_3,
];

/// Tolerances and limits for adaptive quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-300,
            max_intervals: 2000,
        }
    }
}

impl QuadOptions {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<T> {
    pub value: T,
    pub error: f64,
    pub evaluations: usize,
}

struct Panel<const K: usize> {
    a: f64,
    b: f64,
    value: [f64; K],
    error: f64,
}

fn kronrod_panel<const K: usize, F>(f: &mut F, a: f64, b: f64) -> Panel<K>
where
    F: FnMut(f64) -> [f64; K],
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kron = [0.0; K];
    let mut gauss = [0.0; K];
    for k in 0..K {
        kron[k] = WGK[10] * fc[k];
    }
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        for k in 0..K {
            let s = f1[k] + f2[k];
            kron[k] += WGK[j] * s;
            if j % 2 == 1 {
                gauss[k] += WG[j / 2] * s;
            }
        }
    }
    let mut error: f64 = 0.0;
    for k in 0..K {
        kron[k] *= half;
        gauss[k] *= half;
        error = error.max((kron[k] - gauss[k]).abs());
    }
    Panel {
        a,
        b,
        value: kron,
        error,
    }
}

/// Integrates a vector-valued function over `[a, b]`.
///
/// Converged when the summed error estimate is below
/// `max(abs_tol, rel_tol * max_k |I_k|)`.
pub fn integrate_vec<const K: usize, F>(
    mut f: F,
    a: f64,
    b: f64,
    opts: &QuadOptions,
) -> Result<QuadResult<[f64; K]>>
where
    F: FnMut(f64) -> [f64; K],
{
    if a == b {
        return Ok(QuadResult {
            value: [0.0; K],
            error: 0.0,
            evaluations: 0,
        });
    }
    let mut panels: Vec<Panel<K>> = Vec::with_capacity(64);
    panels.push(kronrod_panel(&mut f, a, b));
    let mut evaluations = 21;
    loop {
        let mut total = [0.0; K];
        let mut error = 0.0;
        for p in &panels {
            for k in 0..K {
                total[k] += p.value[k];
            }
            error += p.error;
        }
        let scale = total.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let tol = opts.abs_tol.max(opts.rel_tol * scale);
        if error <= tol {
            return Ok(QuadResult {
                value: total,
                error,
                evaluations,
            });
        }
        if panels.len() >= opts.max_intervals {
            return Err(Error::Quadrature {
                achieved: error,
                requested: tol,
            });
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .fold((0, -1.0), |(wi, we), (i, p)| {
                if p.error > we {
                    (i, p.error)
                } else {
                    (wi, we)
                }
            });
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a || mid >= p.b {
            return Err(Error::Quadrature {
                achieved: error,
                requested: tol,
            });
        }
        panels.push(kronrod_panel(&mut f, p.a, mid));
        panels.push(kronrod_panel(&mut f, mid, p.b));
        evaluations += 42;
    }
}

/// Scalar adaptive quadrature over `[a, b]`.
pub fn integrate<F>(mut f: F, a: f64, b: f64, opts: &QuadOptions) -> Result<QuadResult<f64>>
where
    F: FnMut(f64) -> f64,
{
    let r = integrate_vec(|x| [f(x)], a, b, opts)?;
    Ok(QuadResult {
        value: r.value[0],
        error: r.error,
        evaluations: r.evaluations,
    })
}

/// `int_start^inf f(x) dx` through the substitution `x = start / t`.
///
/// `start` must be positive and `f` must decay at least like `x^-2`.
pub fn integrate_to_infinity<F>(f: F, start: f64, opts: &QuadOptions) -> Result<QuadResult<f64>>
where
    F: Fn(f64) -> f64,
{
    integrate(
        |t| {
            let x = start / t;
            f(x) * start / (t * t)
        },
        0.0,
        1.0,
        opts,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x| x.powi(7) - 3.0 * x * x, -1.0, 2.0, &QuadOptions::default()).unwrap();
        let exact = (256.0 - 1.0) / 8.0 - (8.0 + 1.0);
        assert!((r.value - exact).abs() < 1e-13);
    }

    #[test]
    fn peaked_integrand_converges() {
        let r = integrate(
            |x| 1.0 / (1e-4 + x * x),
            -1.0,
            1.0,
            &QuadOptions::with_rel_tol(1e-12),
        )
        .unwrap();
        let exact = 2.0 * (1.0 / 1e-2) * (1.0 / 1e-2_f64).atan();
        assert!((r.value / exact - 1.0).abs() < 1e-11);
    }

    #[test]
    fn semi_infinite_lorentzian() {
        let r = integrate_to_infinity(|x| 1.0 / (1.0 + x * x), 1.0, &QuadOptions::default())
            .unwrap();
        assert!((r.value - PI / 4.0).abs() < 1e-12);
    }

    #[test]
    fn vector_integrand_shares_panels() {
        let r = integrate_vec(|x| [x.sin(), x.cos()], 0.0, PI, &QuadOptions::default()).unwrap();
        assert!((r.value[0] - 2.0).abs() < 1e-12);
        assert!(r.value[1].abs() < 1e-12);
    }

    #[test]
    fn reports_failure_when_budget_exhausted() {
        let opts = QuadOptions {
            rel_tol: 1e-15,
            abs_tol: 0.0,
            max_intervals: 3,
        };
        let err = integrate(|x| x.abs().sqrt(), -1.0, 1.0, &opts).unwrap_err();
        assert!(matches!(err, Error::Quadrature { .. }));
    }
}
