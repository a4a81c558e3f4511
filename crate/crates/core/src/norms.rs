//! The scalar integrals `I_s(υ)`, the defect `Θ`, the `L₁` norm of `P⁽ⁿ⁾`
//! with its logarithmic decomposition, and the classical Lebesgue constants.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::kernel::{dirichlet, TailKernel};
use crate::params::{Exponent, KernelParams};
use crate::quadrature::{integrate, integrate_noisy, integrate_pieces, DEFAULT_MAX_DEPTH};
use crate::thresholds::{threshold_n1, DEFAULT_CEILING};
use crate::zeros::ZeroSet;
use crate::{Result, TWO_PI};

/// Above this the substitution `t = sinh u` is used.
const SINH_SWITCH: f64 = 1e4;

/// `(∫₀^υ (t² + 1)^{−s/2} dt)^{1/s}` for finite `s ≥ 1`, and `1` for `s = ∞`.
pub fn integral_is(s: Exponent, upsilon: f64) -> Result<f64> {
    if !(upsilon >= 0.0) {
        return Err(crate::Error::Domain(format!("upsilon must be nonnegative, got {upsilon}")));
    }
    let s = match s {
        Exponent::Infinity => return Ok(1.0),
        other => other.value(),
    };
    if upsilon == 0.0 {
        return Ok(0.0);
    }
    let integral = if upsilon > SINH_SWITCH {
        // dt = cosh u du and (sinh²u + 1)^{−s/2} = cosh^{−s} u
        let top = upsilon.asinh();
        let f = |u: f64| u.cosh().powf(1.0 - s);
        integrate_split(&f, top, 1e-15 * top)?
    } else {
        let f = |t: f64| (t * t + 1.0).powf(-0.5 * s);
        integrate_split(&f, upsilon, 1e-15 * (1.0 + upsilon.asinh()))?
    };
    Ok(integral.powf(1.0 / s))
}

/// `∫₀^top f` over geometrically growing panels `[0,1], [1,10], …`.
fn integrate_split<F: Fn(f64) -> f64>(f: &F, top: f64, tol: f64) -> Result<f64> {
    let mut points = vec![0.0];
    let mut edge = 1.0;
    while edge < top {
        points.push(edge);
        edge *= 10.0;
    }
    points.push(top);
    Ok(integrate_pieces(f, &points, tol)?.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaDefect {
    pub upsilon: f64,
    /// `I₁(υ) − ln υ`.
    pub theta: f64,
    /// Whether `0 < Θ < 1`.
    pub in_unit_interval: bool,
}

/// `υ = π n^{1−r}/(αr)`.
pub fn upsilon(params: &KernelParams, n: u64) -> f64 {
    PI * (n as f64).powf(1.0 - params.r()) / params.alpha_r()
}

pub fn theta_defect(params: &KernelParams, n: u64) -> Result<ThetaDefect> {
    let u = upsilon(params, n);
    let theta = integral_is(Exponent::One, u)? - u.ln();
    Ok(ThetaDefect {
        upsilon: u,
        theta,
        in_unit_interval: theta > 0.0 && theta < 1.0,
    })
}

/// `(4/π²) ln(n^{1−r}/(αr))`.
pub fn principal_term(params: &KernelParams, n: u64) -> f64 {
    4.0 / (PI * PI) * ((n as f64).powf(1.0 - params.r()) / params.alpha_r()).ln()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub n: u64,
    /// `‖P⁽ⁿ⁾‖₁ = ∫_0^{2π} |P⁽ⁿ⁾|`.
    pub l1_norm: f64,
    /// `‖P⁽ⁿ⁾‖₁ / ψ(n)`.
    pub l1_scaled: f64,
    /// `(4/π²) ln(n^{1−r}/(αr))`.
    pub principal: f64,
    /// Residual with `(1/π)‖P⁽ⁿ⁾‖₁ = e^{−αn^r}(principal + gamma_star)`.
    pub gamma_star: f64,
    pub theta: f64,
    pub theta_in_unit_interval: bool,
    /// Bound on the error of `l1_norm`.
    pub quad_error_bound: f64,
    pub n_ge_n1: bool,
}

/// Integrates `P⁽ⁿ⁾` over each sign-constant piece between consecutive
/// zeros; the last piece wraps through `2π`. `tol` is relative to `ψ(n)`.
pub fn l1_norm_tail_kernel(kernel: &TailKernel, zeros: &ZeroSet, tol: f64) -> Result<NormReport> {
    let params = kernel.params();
    let n = kernel.n();
    let z = &zeros.zeros;
    let m = z.len();
    let piece_tol = tol / (2 * n) as f64;
    let f = |t: f64| kernel.eval_scaled(t).0;
    let mut total = 0.0;
    let mut err = 0.0;
    let mut eval_err = 0.0f64;
    for k in 0..m {
        let (a, b) = if k + 1 < m {
            (z[k], z[k + 1])
        } else {
            (z[m - 1], z[0] + TWO_PI)
        };
        let q = integrate_noisy(&f, a, b, piece_tol, kernel.tol(), DEFAULT_MAX_DEPTH)?;
        total += q.value.abs();
        err += q.error;
        eval_err = eval_err.max(kernel.eval_scaled(0.5 * (a + b)).1);
    }
    let err = err + TWO_PI * eval_err;
    let scale = kernel.scale();
    let principal = principal_term(params, n);
    let gamma_star = total / PI - principal;
    let theta = theta_defect(params, n)?;
    let n1 = threshold_n1(params, DEFAULT_CEILING);
    Ok(NormReport {
        n,
        l1_norm: total * scale,
        l1_scaled: total,
        principal,
        gamma_star,
        theta: theta.theta,
        theta_in_unit_interval: theta.in_unit_interval,
        quad_error_bound: err * scale,
        n_ge_n1: n1.exact && n >= n1.value,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LebesgueConstant {
    pub n: u64,
    /// `L_{n−1} = (1/π) ∫_{−π}^{π} |D_{n−1}|`.
    pub value: f64,
    /// `L_{n−1} − (4/π²) ln n`.
    pub defect: f64,
}

/// Integrates `|D_{n−1}|` piecewise between its zeros `2πj/(2n−1)`.
pub fn lebesgue_constant(n: u64) -> Result<LebesgueConstant> {
    if n == 0 {
        return Err(crate::Error::Domain("n must be at least 1".into()));
    }
    if n == 1 {
        // D₀ ≡ 1/2
        return Ok(LebesgueConstant {
            n,
            value: 1.0,
            defect: 1.0,
        });
    }
    let odd = (2 * n - 1) as f64;
    let mut points = vec![0.0];
    points.extend((1..n).map(|j| TWO_PI * j as f64 / odd));
    points.push(PI);
    let mut total = 0.0;
    for w in points.windows(2) {
        let q = integrate(&|t: f64| dirichlet(n, t), w[0], w[1], 1e-15, DEFAULT_MAX_DEPTH)?;
        total += q.value.abs();
    }
    // even integrand: (1/π) ∫_{−π}^{π} = (2/π) ∫_0^π
    let value = 2.0 * total / PI;
    Ok(LebesgueConstant {
        n,
        value,
        defect: value - 4.0 / (PI * PI) * (n as f64).ln(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_integral_edge_cases() {
        assert_eq!(integral_is(Exponent::One, 0.0).unwrap(), 0.0);
        assert_eq!(integral_is(Exponent::Infinity, 123.0).unwrap(), 1.0);
        let v = integral_is(Exponent::One, 1.0).unwrap();
        assert!((v - 2f64.sqrt().ln_1p()).abs() < 1e-13);
    }

    #[test]
    fn scalar_integral_order_two() {
        // ∫₀^υ dt/(t²+1) = atan υ
        for &u in &[0.5, 3.0, 2e4] {
            let v = integral_is(Exponent::Finite(2.0), u).unwrap();
            assert!((v * v - u.atan()).abs() < 1e-12, "u={u}");
        }
    }

    #[test]
    fn theta_limits() {
        let p = KernelParams::new(1.0, 0.5, 0.0).unwrap();
        let t = theta_defect(&p, 64).unwrap();
        assert!(t.in_unit_interval);
        let big = KernelParams::new(50.0, 0.5, 0.0).unwrap();
        let t = theta_defect(&big, 1).unwrap();
        assert!(t.upsilon < 0.7 && t.theta > 1.0 && !t.in_unit_interval);
    }

    #[test]
    fn lebesgue_small_cases() {
        assert_eq!(lebesgue_constant(1).unwrap().value, 1.0);
        let l1 = lebesgue_constant(2).unwrap().value;
        assert!((l1 - (1.0 / 3.0 + 2.0 * 3f64.sqrt() / PI)).abs() < 1e-12);
    }
}
