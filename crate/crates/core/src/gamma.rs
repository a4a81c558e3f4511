//! Upper incomplete gamma function and the integral tail bounds built on it.

use statrs::function::gamma::ln_gamma;

const MAX_ITER: usize = 10_000;

/// `ln Γ(a, x)` for `a > 0`, `x >= 0` (unregularized upper incomplete gamma).
///
/// Continued fraction (modified Lentz) for `x > a + 1`, otherwise the
/// complement of the lower series.
pub fn ln_upper_gamma(a: f64, x: f64) -> f64 {
    debug_assert!(a > 0.0 && x >= 0.0);
    if x == 0.0 {
        return ln_gamma(a);
    }
    let log_prefix = -x + a * x.ln();
    if x > a + 1.0 {
        log_prefix - continued_fraction(a, x).ln()
    } else {
        let p = (log_prefix - ln_gamma(a)).exp() * lower_series(a, x);
        ln_gamma(a) + (-p).ln_1p()
    }
}

/// Σ x^n / (a (a+1) ... (a+n)).
fn lower_series(a: f64, x: f64) -> f64 {
    let mut term = 1.0 / a;
    let mut sum = term;
    let mut ap = a;
    for _ in 0..MAX_ITER {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if term.abs() < sum.abs() * f64::EPSILON {
            break;
        }
    }
    sum
}

/// Denominator `x + 1 - a - 1(1-a)/(x + 3 - a - ...)`, so that
/// `Γ(a,x) = e^{-x} x^a / cf`.
fn continued_fraction(a: f64, x: f64) -> f64 {
    let tiny = 1e-300;
    let b0 = x + 1.0 - a;
    let mut f = if b0.abs() < tiny { tiny } else { b0 };
    let mut c = f;
    let mut d = 0.0;
    for n in 1..=MAX_ITER {
        let nf = n as f64;
        let an = nf * (a - nf);
        let bn = x + 2.0 * nf + 1.0 - a;
        d = bn + an * d;
        if d.abs() < tiny {
            d = tiny;
        }
        d = 1.0 / d;
        c = bn + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < f64::EPSILON {
            break;
        }
    }
    f
}

/// `ln ∫_K^∞ t^j e^{-α t^r} dt = ln[(1/(r α^{(j+1)/r})) Γ((j+1)/r, α K^r)]`.
///
/// For `j = 0` this bounds `Σ_{k>K} e^{-α k^r}`; for `j = 1` it bounds
/// `Σ_{k>K} k e^{-α k^r}` once `t e^{-α t^r}` is decreasing on `[K, ∞)`.
pub fn ln_power_tail_integral(alpha: f64, r: f64, j: u32, k: f64) -> f64 {
    let a = f64::from(j + 1) / r;
    -r.ln() - a * alpha.ln() + ln_upper_gamma(a, alpha * k.powf(r))
}
