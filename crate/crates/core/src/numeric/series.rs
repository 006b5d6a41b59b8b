//! Truncated Matsubara sums with an integral tail.
//!
//! A sum `sum_{n >= 1} f(n)` over a smooth summand decaying at least like
//! `n^-2` is split into the explicit partial sum up to `N` and the tail
//! `sum_{n > N} f(n) ~ int_{N+1/2}^inf f(x) dx + f'(N+1/2) / 24`
//! (midpoint Euler-Maclaurin). The derivative is replaced by the forward
//! difference `f(N+1) - f(N)`.


use super::quad::{integrate_to_infinity, QuadOptions};

/// Neumaier (improved Kahan) compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl Extend<f64> for NeumaierSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}

/// Value of a truncated series together with its truncation metadata.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    /// Best estimate: partial sum plus tail.
    pub value: f64,
    /// Explicit partial sum over the first `terms` terms.
    pub partial: f64,
    /// Estimated remainder beyond `terms`.
    pub tail: f64,
    /// Estimated error of `tail`.
    pub tail_error: f64,
    /// Number of explicitly summed terms `N`.
    pub terms: usize,
}

/// Termwise sum of two series with the same truncation.
impl core::ops::Add for SeriesValue {
    type Output = Self;

    fn add(self, other: Self) -> Self {
        Self {
            value: self.value + other.value,
            partial: self.partial + other.partial,
            tail: self.tail + other.tail,
            tail_error: self.tail_error + other.tail_error,
            terms: self.terms.max(other.terms),
        }
    }
}

impl SeriesValue {
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            partial: value,
            tail: 0.0,
            tail_error: 0.0,
            terms: 0,
        }
    }

    /// Multiplies the series by a constant.
    pub fn scale(self, k: f64) -> Self {
        Self {
            value: self.value * k,
            partial: self.partial * k,
            tail: self.tail * k,
            tail_error: self.tail_error * k.abs(),
            terms: self.terms,
        }
    }

    /// Adds a constant (e.g. the `n = 0` term) to the series.
    pub fn offset(self, c: f64) -> Self {
        Self {
            value: self.value + c,
            partial: self.partial + c,
            ..self
        }
    }

    /// Relative size of the tail error.
    pub fn relative_error(&self) -> f64 {
        if self.value == 0.0 {
            self.tail_error
        } else {
            self.tail_error / self.value.abs()
        }
    }
}

/// Sums `term(n)` for `n = 1..=terms` (smallest terms first, compensated)
/// and adds the integral tail. `term` must accept non-integer `n`.
pub fn sum_with_tail<F>(terms: usize, term: F) -> SeriesValue
where
    F: Fn(f64) -> f64,
{
    let mut acc = NeumaierSum::new();
    for n in (1..=terms).rev() {
        acc.add(term(n as f64));
    }
    let partial = acc.value();
    let (tail, tail_error) = tail_estimate(terms, &term);
    SeriesValue {
        value: partial + tail,
        partial,
        tail,
        tail_error,
        terms,
    }
}

/// Tail estimate `sum_{n > terms} term(n)` and its error.
pub fn tail_estimate<F>(terms: usize, term: &F) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let start = terms as f64 + 0.5;
    let opts = QuadOptions {
        rel_tol: 1e-12,
        abs_tol: 1e-300,
        max_intervals: 400,
    };
    let (integral, quad_err) = match integrate_to_infinity(term, start, &opts) {
        Ok(r) => (r.value, r.error),
        Err(_) => {
            // Fall back to the leading power-law estimate term(N) * N.
            let t = term(terms as f64);
            (t * terms as f64, (t * terms as f64).abs())
        }
    };
    let slope = term(terms as f64 + 1.0) - term(terms as f64);
    let correction = slope / 24.0;
    (integral + correction, quad_err + correction.abs())
}
