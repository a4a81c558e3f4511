//! Finite differences of `a_k = exp(−α k^r)` and the absolute-monotonicity
//! check `(−1)^m Δ^m a_k > 0`.
//!
//! High-order differences are alternating sums of nearly equal terms, so they
//! are formed in double-double with a running error estimate. The common
//! factor `a_k` is pulled out first to keep large `k` from underflowing.

use serde::{Deserialize, Serialize};

use crate::dd::{self, DoubleDouble};
use crate::kernel::tail_sum;
use crate::params::KernelParams;
use crate::{Error, Result};

/// Largest acceptable relative error of a difference before it is
/// reported as unreliable.
pub const PRECISION_GUARD: f64 = 1e-6;

pub const DEFAULT_M_MAX: usize = 12;
pub const DEFAULT_K_MAX: u64 = 200;

/// `a_{k+v}/a_k` for `v = 0..=m` in double-double, plus the per-entry
/// absolute error estimate relative to `a_k`.
fn ratio_row(params: &KernelParams, k: u64, m: usize) -> (Vec<DoubleDouble>, f64) {
    let alpha = DoubleDouble::from_f64(params.alpha());
    let r = DoubleDouble::from_f64(params.r());
    let pow = |j: u64| {
        if j == 0 {
            DoubleDouble::ZERO
        } else {
            DoubleDouble::from_u64(j).powf(r)
        }
    };
    let base = pow(k);
    let row: Vec<DoubleDouble> = (0..=m as u64)
        .map(|v| (-(alpha * (pow(k + v) - base))).exp())
        .collect();
    let spread = params.alpha() * ((k + m as u64) as f64).powf(params.r());
    (row, (spread + 1.0) * 4.0 * dd::EPS)
}

fn log_a(params: &KernelParams, k: u64) -> f64 {
    if k == 0 {
        0.0
    } else {
        -params.alpha() * (k as f64).powf(params.r())
    }
}

/// `Δ^m a_k = Σ_v C(m,v) (−1)^{m+v} a_{k+v}`.
pub fn finite_difference(params: &KernelParams, m: usize, k: u64) -> Result<f64> {
    let (row, unit_err) = ratio_row(params, k, m);
    let mut sum = DoubleDouble::ZERO;
    let mut binom = DoubleDouble::ONE;
    let mut mass = 0.0;
    for (v, &x) in row.iter().enumerate() {
        let term = binom * x;
        mass += term.to_f64();
        if (m + v).is_multiple_of(2) {
            sum = sum + term;
        } else {
            sum = sum - term;
        }
        binom = binom * DoubleDouble::from_f64((m - v) as f64) / DoubleDouble::from_f64((v + 1) as f64);
    }
    let err = mass * unit_err + mass * 2.0 * dd::EPS * (m as f64 + 1.0);
    let value = sum.to_f64();
    let rel_err = err / value.abs();
    if !(rel_err <= PRECISION_GUARD) {
        return Err(Error::PrecisionLoss { m, k, rel_err });
    }
    Ok(value * log_a(params, k).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityCertificate {
    pub m_max: usize,
    pub k_max: u64,
    /// Smallest `(−1)^m Δ^m a_k` seen.
    pub min_signed_difference: f64,
    /// Smallest `(−1)^m Δ^m a_k / a_k` seen.
    pub min_relative_difference: f64,
    /// Largest estimated relative error of any difference.
    pub max_relative_error: f64,
    /// `Σ_{k≥1} a_k`, finite for every admissible `(α, r)`.
    pub tail_sum: Option<f64>,
    pub pass: bool,
}

/// Checks `(−1)^m Δ^m a_k > 0` for `0 ≤ m ≤ m_max`, `1 ≤ k ≤ k_max`.
pub fn check_abs_monotone(
    params: &KernelParams,
    m_max: usize,
    k_max: u64,
) -> Result<MonotonicityCertificate> {
    if k_max == 0 {
        return Err(Error::Domain("k_max must be at least 1".into()));
    }
    let mut min_signed = f64::INFINITY;
    let mut min_rel = f64::INFINITY;
    let mut max_err = 0.0f64;
    let mut pass = true;
    for k in 1..=k_max {
        let (mut row, unit_err) = ratio_row(params, k, m_max);
        let scale = log_a(params, k).exp();
        for m in 0..=m_max {
            let d = row[0].to_f64();
            let signed = if m % 2 == 0 { d } else { -d };
            // each difference level at most doubles the absolute error
            let rel_err = unit_err * 2f64.powi(m as i32) / signed.abs();
            if !(rel_err <= PRECISION_GUARD) {
                return Err(Error::PrecisionLoss { m, k, rel_err });
            }
            max_err = max_err.max(rel_err);
            min_rel = min_rel.min(signed);
            min_signed = min_signed.min(signed * scale);
            if !(signed > 0.0) {
                pass = false;
            }
            for i in 0..row.len() - 1 {
                row[i] = row[i + 1] - row[i];
            }
            row.pop();
        }
    }
    let tail = tail_sum(params, 1, 1e-10).ok().map(|t| t.value);
    Ok(MonotonicityCertificate {
        m_max,
        k_max,
        min_signed_difference: min_signed,
        min_relative_difference: min_rel,
        max_relative_error: max_err,
        tail_sum: tail,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(alpha: f64, r: f64) -> KernelParams {
        KernelParams::new(alpha, r, 0.0).unwrap()
    }

    #[test]
    fn order_zero_and_one() {
        let p = params(1.0, 0.5);
        let a = |k: u64| p.psi(k);
        assert!((finite_difference(&p, 0, 9).unwrap() - a(9)).abs() < 1e-17);
        for k in 1..50 {
            let d = finite_difference(&p, 1, k).unwrap();
            assert!(d < 0.0);
            assert!((d - (a(k + 1) - a(k))).abs() < 1e-15 * a(k));
        }
    }

    #[test]
    fn pascal_identity() {
        let p = params(1.0, 0.5);
        for m in 1..=10 {
            for k in [1u64, 5, 40, 150] {
                let lhs = finite_difference(&p, m, k).unwrap();
                let rhs = finite_difference(&p, m - 1, k + 1).unwrap()
                    - finite_difference(&p, m - 1, k).unwrap();
                assert!((lhs - rhs).abs() <= 1e-8 * lhs.abs(), "m={m} k={k}");
            }
        }
    }

    #[test]
    fn certificate_passes_for_default_grid() {
        let c = check_abs_monotone(&params(1.0, 0.5), 12, 100).unwrap();
        assert!(c.pass);
        assert!(c.min_signed_difference > 0.0);
        assert!(c.tail_sum.unwrap().is_finite());
    }

    #[test]
    fn zero_order_is_positivity() {
        let c = check_abs_monotone(&params(3.0, 0.2), 0, 30).unwrap();
        assert!(c.pass);
    }

    #[test]
    fn guard_trips_on_hopeless_cancellation() {
        // Δ^40 at a point where the sequence is nearly flat.
        let p = params(0.001, 0.1);
        assert!(matches!(
            finite_difference(&p, 40, 5000),
            Err(Error::PrecisionLoss { .. })
        ));
    }
}
