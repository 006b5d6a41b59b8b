//! Quantum Kramers flux state and thermally activated escape rate for a
//! damped system near a parabolic barrier top.
//!
//! All quantities are dimensionless: coordinates in units of the barrier
//! length `q0 = sqrt(hbar / 2 M w0)`, frequencies in units of the barrier
//! frequency `w0`, times in units of `1 / w0`, and the inverse temperature
//! as `theta = hbar w0 / (k_B T)`.
//!
//! The crate is `no_std` (with `alloc`); file formats and the command line
//! front end live in `qkramers-cli`.
//!
//! Module map:
//!
//! * [`bath`]: damping models, kernels, Matsubara Fourier coefficients.
//! * [`matsubara`]: Matsubara table, `Lambda`, `Omega`, `theta_c`, products.
//! * [`dynamics`]: barrier propagator, `A(t)`, `S(t)`, minimal-action paths.
//! * [`action`]: effective actions and the extremal shift.
//! * [`fluxstate`]: equilibrium density matrix, form factors, flux state.
//! * [`rate`]: partition function, decay rate, validity conditions.
#![cfg_attr(not(test), no_std)]
// Float methods come from `num_traits::Float` (libm) in no_std builds and
// from std's inherent impls in test builds.
#![cfg_attr(test, allow(unused_imports))]
// `!(x > 0.0)` is used on purpose so that NaN is rejected.
#![allow(
    clippy::neg_cmp_op_on_partial_ord,
    clippy::excessive_precision,
    clippy::needless_range_loop
)]

extern crate alloc;

pub mod action;
pub mod bath;
pub mod dynamics;
mod error;
pub mod fluxstate;
pub mod matsubara;
pub mod numeric;
pub mod rate;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub use action::ActionContext;
pub use bath::DampingModel;
pub use dynamics::{BarrierDynamics, PoleDecomposition, TimeFunctions};
pub use fluxstate::{FluxState, Normalization};
pub use matsubara::{MatsubaraTable, SystemParams};
pub use numeric::series::SeriesValue;
pub use rate::{RateConfig, RateReport};
