//! The `2n` simple zeros of `P⁽ⁿ⁾` on `[0, 2π)`.
//!
//! Two independent routes are offered. For `β ∈ [0, 1)` the kernel is a sine
//! series `Σ a_k sin(kt + γ)`, `γ = (1−β)π/2`, with absolutely monotone
//! coefficients, and each zero sits in an explicit interval; bisection there
//! is certified by sign changes. For any `β` the zeros are also the preimages
//! `y⁻¹((π/2 + kπ)/n)` of the continuous phase.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::kernel::{PhaseCurve, TailKernel};
use crate::params::KernelParams;
use crate::{wrap_angle, Error, Result, TWO_PI};

/// Default abscissa tolerance for bisection.
pub const DEFAULT_ZERO_TOL: f64 = 1e-12;
/// Default kernel tolerance (relative to `ψ(n)`) near sign decisions.
pub const DEFAULT_SIGN_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ZeroMethod {
    Brackets,
    Phase,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroSet {
    pub n: u64,
    /// Strictly increasing, in `[0, 2π)`.
    pub zeros: Vec<f64>,
    pub method: ZeroMethod,
    /// `|P⁽ⁿ⁾(z_k)|`.
    pub residuals: Vec<f64>,
    pub alternation_ok: bool,
}

impl ZeroSet {
    /// Smallest cyclic distance between consecutive zeros.
    pub fn min_gap(&self) -> f64 {
        let z = &self.zeros;
        let mut gap = z[0] + TWO_PI - z[z.len() - 1];
        for w in z.windows(2) {
            gap = gap.min(w[1] - w[0]);
        }
        gap
    }

    /// Cyclic midpoints `(z_k + z_{k+1})/2`, the last wrapping through `2π`.
    pub fn midpoints(&self) -> Vec<f64> {
        let z = &self.zeros;
        let m = z.len();
        (0..m)
            .map(|k| {
                if k + 1 < m {
                    0.5 * (z[k] + z[k + 1])
                } else {
                    wrap_angle(0.5 * (z[m - 1] + z[0] + TWO_PI))
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BracketList {
    pub intervals: Vec<(f64, f64)>,
}

/// The `2n` intervals that each hold exactly one zero when `β ∈ [0, 1)`.
///
/// With `γ = (1−β)π/2`: `((2j−2+β)π/(2n−1), (jπ−γ)/n)` for `j = 1..n`,
/// `((jπ−γ)/n, (2j−2+β)π/(2n−1))` for `j = n+1..2n−1`, and finally
/// `(2π − γ/n, 2π)`.
pub fn corollary_brackets(n: u64, beta: f64) -> Result<BracketList> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    if !(0.0..1.0).contains(&beta) {
        return Err(Error::Domain(format!("bracket route needs beta in [0, 1), got {beta}")));
    }
    let nf = n as f64;
    let gamma = (1.0 - beta) * PI / 2.0;
    let odd = 2.0 * nf - 1.0;
    let mut intervals = Vec::with_capacity(2 * n as usize);
    for j in 1..=n {
        let jf = j as f64;
        intervals.push(((2.0 * jf - 2.0 + beta) * PI / odd, (jf * PI - gamma) / nf));
    }
    for j in n + 1..2 * n {
        let jf = j as f64;
        intervals.push(((jf * PI - gamma) / nf, (2.0 * jf - 2.0 + beta) * PI / odd));
    }
    intervals.push((TWO_PI - gamma / nf, TWO_PI));
    for (i, &(lo, hi)) in intervals.iter().enumerate() {
        if !(lo < hi) {
            return Err(Error::DegenerateBrackets(format!(
                "interval {i} is empty: ({lo}, {hi})"
            )));
        }
    }
    for (i, w) in intervals.windows(2).enumerate() {
        if w[0].1 > w[1].0 {
            return Err(Error::DegenerateBrackets(format!(
                "intervals {i} and {} overlap: {:?} and {:?}",
                i + 1,
                w[0],
                w[1]
            )));
        }
    }
    Ok(BracketList { intervals })
}

/// Signs of `P⁽ⁿ⁾` decided against the certified error, with a second,
/// tighter kernel for close calls.
struct SignOracle<'a> {
    coarse: &'a TailKernel,
    fine: std::sync::OnceLock<Option<TailKernel>>,
}

impl<'a> SignOracle<'a> {
    fn new(kernel: &'a TailKernel) -> Self {
        Self {
            coarse: kernel,
            fine: std::sync::OnceLock::new(),
        }
    }

    fn sign(&self, t: f64) -> Option<f64> {
        let (v, err) = self.coarse.eval_scaled(t);
        if v.abs() > err {
            return Some(v.signum());
        }
        let fine = self.fine.get_or_init(|| {
            TailKernel::new(*self.coarse.params(), self.coarse.n(), 1e-2 * self.coarse.tol()).ok()
        });
        let (v, err) = fine.as_ref()?.eval_scaled(t);
        (v.abs() > err).then(|| v.signum())
    }
}

/// Bisection on each bracket. Open brackets are probed at their ends.
pub fn locate_zeros_bracketed(kernel: &TailKernel, brackets: &BracketList, tol: f64) -> Result<ZeroSet> {
    let oracle = SignOracle::new(kernel);
    let zeros: Vec<f64> = brackets
        .intervals
        .par_iter()
        .enumerate()
        .map(|(index, &(lo, hi))| {
            let no_change = || Error::NoSignChange { index, lo, hi };
            let s_lo = oracle.sign(lo).ok_or_else(no_change)?;
            let s_hi = oracle.sign(hi).ok_or_else(no_change)?;
            if s_lo == s_hi {
                return Err(no_change());
            }
            let (mut a, mut b) = (lo, hi);
            while b - a > tol {
                let mid = 0.5 * (a + b);
                if mid <= a || mid >= b {
                    break;
                }
                match oracle.sign(mid) {
                    Some(s) if s == s_lo => a = mid,
                    Some(_) => b = mid,
                    None => return Ok(mid),
                }
            }
            Ok(0.5 * (a + b))
        })
        .collect::<Result<_>>()?;
    finish(kernel, zeros, ZeroMethod::Brackets)
}

/// Zeros as preimages of `(π/2 + kπ)/n` under the unwrapped phase `y`.
pub fn locate_zeros_phase(kernel: &TailKernel, tol: f64) -> Result<ZeroSet> {
    let curve = PhaseCurve::new(kernel)?;
    let n = kernel.n();
    let nf = n as f64;
    let ys: Vec<f64> = (0..curve.len()).map(|i| curve.y_node(i)).collect();
    for (i, w) in ys.windows(2).enumerate() {
        if !(w[1] > w[0]) {
            return Err(Error::PhaseNotMonotone { t: curve.node(i) });
        }
    }
    let y0 = ys[0];
    let first = ((nf * y0 - PI / 2.0) / PI).ceil();
    let zeros: Vec<f64> = (0..2 * n)
        .into_par_iter()
        .map(|k| {
            let target = (PI / 2.0 + (first + k as f64) * PI) / nf;
            let cell = ys.partition_point(|&y| y <= target).clamp(1, ys.len() - 1) - 1;
            let (mut a, mut b) = (curve.node(cell), curve.node(cell + 1));
            while b - a > tol {
                let mid = 0.5 * (a + b);
                if mid <= a || mid >= b {
                    break;
                }
                if curve.y(kernel, mid) <= target {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            wrap_angle(0.5 * (a + b))
        })
        .collect();
    let mut zeros = zeros;
    zeros.sort_by(f64::total_cmp);
    finish(kernel, zeros, ZeroMethod::Phase)
}

fn finish(kernel: &TailKernel, zeros: Vec<f64>, method: ZeroMethod) -> Result<ZeroSet> {
    let residuals = zeros.iter().map(|&z| kernel.eval(z).abs()).collect();
    let mut set = ZeroSet {
        n: kernel.n(),
        zeros,
        method,
        residuals,
        alternation_ok: false,
    };
    set.alternation_ok = verify_sign_alternation(kernel, &set).ok;
    Ok(set)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlternationCheck {
    pub ok: bool,
    /// First midpoint whose sign repeats its predecessor's.
    pub offending_midpoint: Option<usize>,
}

/// Signs of `P⁽ⁿ⁾` at consecutive cyclic midpoints must alternate, and there
/// must be exactly `2n` zeros strictly increasing in `[0, 2π)`.
pub fn verify_sign_alternation(kernel: &TailKernel, set: &ZeroSet) -> AlternationCheck {
    let z = &set.zeros;
    let ordered = z.windows(2).all(|w| w[0] < w[1]) && z.iter().all(|&v| (0.0..TWO_PI).contains(&v));
    if z.is_empty() || !ordered {
        return AlternationCheck {
            ok: false,
            offending_midpoint: Some(0),
        };
    }
    let signs: Vec<f64> = set.midpoints().iter().map(|&m| kernel.eval_scaled(m).0.signum()).collect();
    let m = signs.len();
    for k in 0..m {
        let next = signs[(k + 1) % m];
        if signs[k] == next || signs[k] == 0.0 {
            return AlternationCheck {
                ok: false,
                offending_midpoint: Some((k + 1) % m),
            };
        }
    }
    AlternationCheck {
        ok: z.len() as u64 == 2 * set.n,
        offending_midpoint: None,
    }
}

/// Which route `locate_zeros` takes for a given `β`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Route {
    /// Brackets apply to `β' ∈ [0, 1)`; the kernel equals `sign ·` that kernel.
    Brackets { beta: f64, sign: f64 },
    Phase,
}

/// `β` modulo 4 in `[0,1)` uses the brackets directly; in `[2,3)` the kernel
/// is the negation of the one at `β − 2`, which has the same zeros.
pub fn route_for(params: &KernelParams) -> Route {
    let b = params.beta_mod4();
    if b < 1.0 {
        Route::Brackets { beta: b, sign: 1.0 }
    } else if (2.0..3.0).contains(&b) {
        Route::Brackets {
            beta: b - 2.0,
            sign: -1.0,
        }
    } else {
        Route::Phase
    }
}

/// Zeros by whichever route applies to `β`.
pub fn locate_zeros(kernel: &TailKernel, tol: f64) -> Result<ZeroSet> {
    match route_for(kernel.params()) {
        Route::Brackets { beta, sign } => {
            let brackets = corollary_brackets(kernel.n(), beta)?;
            if sign > 0.0 {
                locate_zeros_bracketed(kernel, &brackets, tol)
            } else {
                let shifted = TailKernel::new(kernel.params().with_beta(beta)?, kernel.n(), kernel.tol())?;
                let set = locate_zeros_bracketed(&shifted, &brackets, tol)?;
                finish(kernel, set.zeros, ZeroMethod::Brackets)
            }
        }
        Route::Phase => locate_zeros_phase(kernel, tol),
    }
}

/// Bracket index containing each zero, or `None` if a zero falls outside.
pub fn bracket_membership(set: &ZeroSet, brackets: &BracketList) -> Vec<Option<usize>> {
    set.zeros
        .iter()
        .map(|&z| brackets.intervals.iter().position(|&(lo, hi)| lo < z && z < hi))
        .collect()
}
