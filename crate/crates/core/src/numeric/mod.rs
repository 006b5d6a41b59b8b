//! Numerical building blocks: compensated sums, Matsubara series tails,
//! adaptive Gauss-Kronrod quadrature, root finding, and the complex
//! error function.

pub mod quad;
pub mod roots;
pub mod series;
pub mod special;

pub use series::{NeumaierSum, SeriesValue};
