//! The generalized Poisson integral `f = a0/2 + (1/π)∫ P(x − t) φ(t) dt`,
//! its Fourier partial sums and the deviation `ρ_n = f − S_{n−1}(f)`.
//!
//! For a trigonometric polynomial `φ` everything is a finite spectral sum;
//! [`convolve_quadrature`] is the independent route through the tail kernel.

use serde::{Deserialize, Serialize};

use crate::kernel::TailKernel;
use crate::params::KernelParams;
use crate::quadrature::{integrate_noisy, DEFAULT_MAX_DEPTH};
use crate::trig::{PeriodicFunction, TrigPolynomial};
use crate::zeros::{locate_zeros, ZeroSet, DEFAULT_ZERO_TOL};
use crate::{wrap_angle, Error, Result, TWO_PI};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoissonPair {
    pub params: KernelParams,
    pub phi: TrigPolynomial,
    pub f_coeffs: TrigPolynomial,
}

impl PoissonPair {
    pub fn eval(&self, x: f64) -> f64 {
        self.f_coeffs.eval(x)
    }
}

/// Maps each harmonic of `φ` through the kernel: scale by `ψ(k)` and rotate
/// by `βπ/2`. The constant `a0` passes through unchanged.
pub fn poisson_integral(params: &KernelParams, phi: &TrigPolynomial) -> PoissonPair {
    let (s, c) = params.phase().sin_cos();
    let mut f = TrigPolynomial::zero(phi.order());
    f.a0 = phi.a0;
    for k in 1..=phi.order() {
        let (a, b) = phi.harmonic(k);
        let w = params.psi(k as u64);
        // a cos(kx − θ) + b sin(kx − θ)
        f.cos[k - 1] = w * (a * c - b * s);
        f.sin[k - 1] = w * (a * s + b * c);
    }
    PoissonPair {
        params: *params,
        phi: phi.clone(),
        f_coeffs: f,
    }
}

/// `S_{n−1}(f)`: harmonics of order `< n`.
pub fn partial_sum(f: &TrigPolynomial, n: usize) -> Result<TrigPolynomial> {
    if n == 0 {
        return Err(Error::Domain("partial sums need n ≥ 1".into()));
    }
    Ok(f.truncate(n - 1))
}

/// The harmonics of order `≥ n` as a polynomial.
fn tail_part(f: &TrigPolynomial, n: usize) -> TrigPolynomial {
    let mut out = TrigPolynomial::zero(f.order());
    for k in n.max(1)..=f.order() {
        out.cos[k - 1] = f.cos[k - 1];
        out.sin[k - 1] = f.sin[k - 1];
    }
    out
}

/// `ρ_n(f; x)` for `f = J(φ)`, summed over harmonics `k ≥ n`.
pub fn deviation_rho(params: &KernelParams, phi: &TrigPolynomial, n: usize, x: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("deviation needs n ≥ 1".into()));
    }
    Ok(tail_part(&poisson_integral(params, phi).f_coeffs, n).eval(x))
}

/// `max_j |ρ_n(f; 2πj/m)|`.
pub fn deviation_sup(params: &KernelParams, phi: &TrigPolynomial, n: usize, m: usize) -> Result<f64> {
    if n == 0 || m == 0 {
        return Err(Error::Domain("deviation needs n ≥ 1 and a nonempty grid".into()));
    }
    let rho = tail_part(&poisson_integral(params, phi).f_coeffs, n);
    Ok((0..m)
        .map(|j| rho.eval(TWO_PI * j as f64 / m as f64).abs())
        .fold(0.0, f64::max))
}

/// `(1/π)∫_0^{2π} g(t) P⁽ⁿ⁾(x − t) dt` to absolute accuracy `tol`.
///
/// With `u = x − t` the integrand is `g(x − u) P⁽ⁿ⁾(u)`, integrated piecewise
/// between the zeros of `P⁽ⁿ⁾` and the images of the breakpoints of `g`.
/// Zeros are located when not supplied.
pub fn convolve_quadrature<G: PeriodicFunction + ?Sized>(
    kernel: &TailKernel,
    g: &G,
    x: f64,
    zeros: Option<&ZeroSet>,
    tol: f64,
) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let owned;
    let zeros = match zeros {
        Some(z) => z,
        None => {
            owned = locate_zeros(kernel, DEFAULT_ZERO_TOL)?;
            &owned
        }
    };
    let mut cuts: Vec<f64> = zeros.zeros.clone();
    cuts.extend(g.breakpoints().into_iter().map(|b| wrap_angle(x - b)));
    cuts.push(0.0);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    cuts.push(TWO_PI);

    let scale = kernel.scale();
    let pieces = (cuts.len() - 1) as f64;
    // scaled units; never looser than the kernel's own accuracy warrants
    let piece_tol = (tol * std::f64::consts::PI / scale / pieces).min(1e-3).max(kernel.tol() * 1e-2);
    let f = |u: f64| g.eval(x - u) * kernel.eval_scaled(u).0;
    // kernel values carry a relative error ~ tol; scale it by a sampled sup of g
    let g_sup = (0..256)
        .map(|j| g.eval(TWO_PI * j as f64 / 256.0).abs())
        .chain(cuts.iter().map(|&u| g.eval(x - u).abs()))
        .fold(0.0, f64::max);
    let noise = kernel.tol() * 2.0 * g_sup;
    let mut total = 0.0;
    for w in cuts.windows(2) {
        total += integrate_noisy(&f, w[0], w[1], piece_tol, noise, DEFAULT_MAX_DEPTH)?.value;
    }
    Ok(total * scale / std::f64::consts::PI)
}
