//! Numerical toolkit for Lebesgue-type inequalities of Fourier sums on the
//! classes of generalized Poisson integrals with kernel coefficients
//! `ψ(k) = exp(-α k^r)`, `0 < r < 1`.
//!
//! The crate evaluates the tail kernels `P⁽ⁿ⁾`, certifies their `2n` zeros,
//! integrates their `L₁` norms, computes best uniform trigonometric
//! approximations by a circular Remez exchange, and builds the extremal
//! functions that turn the Lebesgue-type bound into an equality.

pub mod chebyshev;
pub mod dd;
pub mod error;
pub mod extremal;
pub mod gamma;
pub mod kernel;
pub mod norms;
pub mod params;
pub mod poisson;
pub mod quadrature;
pub mod sequences;
pub mod sweep;
pub mod thresholds;
pub mod trig;
pub mod zeros;

pub use error::{Error, ErrorClass, Result};
pub use kernel::TailKernel;
pub use params::KernelParams;
pub use trig::{PeriodicFunction, TrigPolynomial};
pub use zeros::ZeroSet;

pub(crate) const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Reduces `t` into `[0, 2π)`.
pub fn wrap_angle(t: f64) -> f64 {
    let w = t.rem_euclid(TWO_PI);
    if w >= TWO_PI {
        0.0
    } else {
        w
    }
}
