//! The threshold indices `n₀(α,r,p)`, `n₁(α,r)` and `n*(α,r)`.
//!
//! Each threshold is the smallest `n` satisfying an explicit inequality in
//! `n`. The inequalities are evaluated literally in binary64. Where the
//! left-hand side is provably decreasing the search is a doubling bracket
//! followed by bisection, which certifies minimality; below that region the
//! candidates are scanned linearly.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::params::{Exponent, KernelParams};
use crate::{Error, Result};

/// Default largest `n` examined.
pub const DEFAULT_CEILING: u64 = 1 << 40;

/// Longest linear scan before switching to doubling.
pub const LINEAR_SCAN_LIMIT: u64 = 1 << 26;

/// `(3π)^{-3}`
pub fn three_pi_cubed_inv() -> f64 {
    (3.0 * PI).powi(-3)
}

/// `117 / (784 π²)`
pub fn nstar_rhs() -> f64 {
    117.0 / (784.0 * PI * PI)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Threshold {
    /// The smallest `n` found, or the ceiling when `exact` is false.
    pub value: u64,
    /// False when no `n` up to the ceiling satisfies the inequality.
    pub exact: bool,
    /// True when every `m < value` is known to violate the inequality,
    /// either by direct evaluation or by monotonicity of the left side.
    pub minimal_certified: bool,
}

impl Threshold {
    pub fn require_exact(self) -> Result<u64> {
        if self.exact {
            Ok(self.value)
        } else {
            Err(Error::ScanCeiling {
                ceiling: self.value,
            })
        }
    }
}

/// Left side of the `n₁` inequality.
pub fn n1_lhs(params: &KernelParams, n: u64) -> f64 {
    let ar = params.alpha_r();
    let r = params.r();
    let nf = n as f64;
    (1.0 / ar) * nf.powf(-r) * (1.0 + (PI * nf.powf(1.0 - r) / ar).ln()) + ar / nf.powf(1.0 - r)
}

pub fn n1_holds(params: &KernelParams, n: u64) -> bool {
    n1_lhs(params, n) <= three_pi_cubed_inv()
}

/// Left side of the `n₀(p)` inequality.
pub fn n0_lhs(params: &KernelParams, p: Exponent, n: u64) -> f64 {
    let ar = params.alpha_r();
    let r = params.r();
    let nf = n as f64;
    1.0 / (ar * nf.powf(r)) + ar * p.chi() / nf.powf(1.0 - r)
}

/// Right side of the `n₀(p)` inequality.
pub fn n0_rhs(p: Exponent) -> f64 {
    match p {
        Exponent::One => 1.0 / 14.0,
        Exponent::Finite(q) => three_pi_cubed_inv() * (q - 1.0) / q,
        Exponent::Infinity => three_pi_cubed_inv(),
    }
}

pub fn n0_holds(params: &KernelParams, p: Exponent, n: u64) -> bool {
    n0_lhs(params, p, n) <= n0_rhs(p)
}

/// Left side of the `n*` inequality.
pub fn nstar_lhs(params: &KernelParams, n: u64) -> f64 {
    let ar = params.alpha_r();
    let r = params.r();
    let nf = n as f64;
    1.0 / (ar * nf.powf(r)) + ar / nf.powf(1.0 - r)
}

pub fn nstar_holds(params: &KernelParams, n: u64) -> bool {
    nstar_lhs(params, n) < nstar_rhs()
}

/// `⌈((3π)³ α r)^{1/(1-r)}⌉`: the second summand alone forces `n₁` above it.
pub fn n1_necessary_lower_bound(params: &KernelParams) -> u64 {
    let x = ((3.0 * PI).powi(3) * params.alpha_r()).powf(1.0 / (1.0 - params.r()));
    x.ceil() as u64
}

/// Start of the region where the `n₁` left side is strictly decreasing.
///
/// The first summand `(1 + ln(π x^{1-r}/(αr))) x^{-r}` decreases once
/// `x^{1-r} > (αr/π) e^{(1-2r)/r}`; the second summand always decreases.
fn n1_monotone_from(params: &KernelParams) -> u64 {
    let r = params.r();
    let base = params.alpha_r() / PI * ((1.0 - 2.0 * r) / r).exp();
    let x = base.powf(1.0 / (1.0 - r));
    if !x.is_finite() || x > 1e18 {
        return u64::MAX;
    }
    (x.ceil() as u64).max(1)
}

/// Smallest `n` with `holds(n)`. `holds` must be monotone (false then true)
/// on `[monotone_from, ∞)`.
fn search<F: Fn(u64) -> bool>(holds: F, monotone_from: u64, ceiling: u64) -> Threshold {
    let ceiling = ceiling.max(1);
    let linear_end = monotone_from.saturating_sub(1).min(LINEAR_SCAN_LIMIT).min(ceiling);
    for n in 1..=linear_end {
        if holds(n) {
            return Threshold {
                value: n,
                exact: true,
                minimal_certified: true,
            };
        }
    }
    let monotone = linear_end + 1 >= monotone_from;
    // Doubling for a satisfying point.
    let mut lo = linear_end; // all of 1..=lo fail (lo = 0 means none checked)
    let mut hi = (lo + 1).max(1);
    loop {
        if hi >= ceiling {
            hi = ceiling;
            if !holds(hi) {
                return Threshold {
                    value: ceiling,
                    exact: false,
                    minimal_certified: false,
                };
            }
            break;
        }
        if holds(hi) {
            break;
        }
        lo = hi;
        hi = hi.saturating_mul(2);
    }
    if monotone {
        // Bisection keeps holds(hi) and !holds(lo).
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if holds(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Threshold {
            value: hi,
            exact: true,
            minimal_certified: true,
        }
    } else {
        // Outside the proven-monotone region: walk down to the first failure.
        let mut n = hi;
        while n - 1 > lo && holds(n - 1) {
            n -= 1;
        }
        Threshold {
            value: n,
            exact: true,
            minimal_certified: n - 1 <= LINEAR_SCAN_LIMIT,
        }
    }
}

pub fn threshold_n1(params: &KernelParams, ceiling: u64) -> Threshold {
    search(|n| n1_holds(params, n), n1_monotone_from(params), ceiling)
}

/// Both summands of the `n₀` left side are decreasing in `n`.
pub fn threshold_n0(params: &KernelParams, p: Exponent, ceiling: u64) -> Threshold {
    search(|n| n0_holds(params, p, n), 1, ceiling)
}

/// Both summands of the `n*` left side are decreasing in `n`.
pub fn threshold_nstar(params: &KernelParams, ceiling: u64) -> Threshold {
    search(|n| nstar_holds(params, n), 1, ceiling)
}

pub fn exponent_key(p: Exponent) -> String {
    match p {
        Exponent::One => "1".to_string(),
        Exponent::Finite(q) => format!("{q:?}"),
        Exponent::Infinity => "inf".to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdSet {
    pub n0: BTreeMap<String, Threshold>,
    pub n1: Threshold,
    pub n_star: Threshold,
    pub scan_ceiling: u64,
    pub exact: bool,
}

impl ThresholdSet {
    pub fn compute(params: &KernelParams, exponents: &[Exponent], ceiling: u64) -> Self {
        let n0: BTreeMap<String, Threshold> = exponents
            .iter()
            .map(|&p| (exponent_key(p), threshold_n0(params, p, ceiling)))
            .collect();
        let n1 = threshold_n1(params, ceiling);
        let n_star = threshold_nstar(params, ceiling);
        let exact = n1.exact && n_star.exact && n0.values().all(|t| t.exact);
        Self {
            n0,
            n1,
            n_star,
            scan_ceiling: ceiling,
            exact,
        }
    }
}
