//! Certified evaluation of the tail kernel
//! `P⁽ⁿ⁾(t) = Σ_{k≥n} ψ(k) cos(kt − βπ/2)`, its envelope pair `(g, h)`, the
//! phase `y`, the ratio `M_n`, and the Dirichlet kernel.
//!
//! All sums are carried relative to `ψ(n)`: the coefficients are
//! `c_k = ψ(k)/ψ(n) = exp(−α(k^r − n^r))`, so large `n` never underflows and
//! tolerances are relative to the leading coefficient.
//!
//! Away from `t ≡ 0` the complex tail `S(t) = Σ_{k≥K} c_k e^{ikt}` is resummed
//! by repeated summation by parts,
//!
//! ```text
//! S = Σ_{m<M} z^{K+m} Δ^m c_K / (1−z)^{m+1} + (z/(1−z))^M Σ_{k≥K} Δ^M c_k z^k,
//! ```
//!
//! and because `x ↦ exp(−αx^r)` is completely monotone the last sum is at most
//! `|Δ^{M−1} c_K|` in modulus. The differences are formed in double-double.
//! A geometric ladder of start indices `K` trades a short direct head against
//! the speed of the resummed tail; near `t ≡ 0` the series is summed directly
//! up to `trunc_k` with the incomplete-gamma certificate.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dd::{self, DoubleDouble};
use crate::gamma::ln_power_tail_integral;
use crate::params::KernelParams;
use crate::{wrap_angle, Error, Result, TWO_PI};

/// Default tolerance for kernel values, relative to `ψ(n)`.
pub const DEFAULT_KERNEL_TOL: f64 = 1e-12;
/// Default tolerance for scalar sums, relative to `ψ(n)`.
pub const DEFAULT_SUM_TOL: f64 = 1e-14;
/// Largest number of terms a direct sum may use.
pub const DEFAULT_TERM_CAP: u64 = 400_000_000;

const CHUNK: usize = 4096;
const RESEED: u64 = 64;
const MAX_ORDER: usize = 48;
const LADDER_GROWTH: f64 = 1.25;
/// Rounding allowance per unit of absolute coefficient mass.
const ROUNDING: f64 = 8.0 * f64::EPSILON;

const TWO_PI_LO: f64 = 2.449_293_598_294_706_4e-16;

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// `e^{ikt}` with `kt` reduced modulo `2π` in extended precision.
pub(crate) fn cis_kt(k: u64, t: f64) -> Complex64 {
    let (p, e) = two_prod(k as f64, t);
    let q = (p / TWO_PI).round();
    let (a, b) = two_prod(q, TWO_PI);
    let rem = ((p - a) - b) - q * TWO_PI_LO + e;
    let (s, c) = rem.sin_cos();
    Complex64::new(c, s)
}

/// Smallest `K ≥ n` with `Σ_{k>K} c_k ≤ ∫_K^∞ c(x) dx ≤ budget`, where the
/// integral is `e^{αn^r} ∫_K^∞ x^j e^{−αx^r} dx`.
fn truncation_index(params: &KernelParams, n: u64, j: u32, budget: f64, cap: u64) -> Result<u64> {
    let (alpha, r) = (params.alpha(), params.r());
    let log_scale = alpha * (n as f64).powf(r);
    let target = budget.ln();
    // x^j e^{-αx^r} must be decreasing beyond K for the comparison.
    let k_min = if j == 0 {
        n
    } else {
        let x = (f64::from(j) / (alpha * r)).powf(1.0 / r);
        n.max(x.ceil() as u64)
    };
    let ok = |k: u64| log_scale + ln_power_tail_integral(alpha, r, j, k as f64) <= target;
    if ok(k_min) {
        return Ok(k_min);
    }
    let mut lo = k_min;
    let mut step = 1u64;
    let mut hi;
    loop {
        hi = k_min.saturating_add(step);
        if hi - n > cap {
            return Err(Error::ToleranceUnreachable { tol: budget, cap });
        }
        if ok(hi) {
            break;
        }
        lo = hi;
        step = step.saturating_mul(2);
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

struct AbelEntry {
    k: u64,
    /// `Δ^m c_K`, `m = 0..MAX_ORDER`.
    diffs: Vec<f64>,
    /// Absolute error estimate of each difference.
    errs: Vec<f64>,
    /// Smallest `|1 − e^{it}|` at which this entry meets the budget.
    s_min: f64,
}

impl AbelEntry {
    fn new(params: &KernelParams, n: u64, k: u64, budget: f64) -> Self {
        let alpha = DoubleDouble::from_f64(params.alpha());
        let r = DoubleDouble::from_f64(params.r());
        let n_pow = DoubleDouble::from_u64(n).powf(r);
        let mut row: Vec<DoubleDouble> = (0..MAX_ORDER as u64)
            .map(|i| {
                let kp = DoubleDouble::from_u64(k + i).powf(r);
                (-(alpha * (kp - n_pow))).exp()
            })
            .collect();
        let arg = params.alpha() * params.power_gap(k, n);
        let c_k = row[0].to_f64();
        let base_err = c_k * (arg.abs() + 1.0) * 4.0 * dd::EPS;
        let mut diffs = Vec::with_capacity(MAX_ORDER);
        let mut errs = Vec::with_capacity(MAX_ORDER);
        for m in 0..MAX_ORDER {
            let d = row[0].to_f64();
            diffs.push(d);
            errs.push(base_err * 2f64.powi(m as i32) + d.abs() * f64::EPSILON);
            for i in 0..row.len() - 1 {
                row[i] = row[i + 1] - row[i];
            }
            row.pop();
        }
        let mut entry = Self {
            k,
            diffs,
            errs,
            s_min: f64::INFINITY,
        };
        entry.s_min = entry.min_modulus(budget);
        entry
    }

    /// Best order `M` at modulus `s` and the corresponding error bound.
    fn plan(&self, s: f64) -> (usize, f64) {
        let inv = 1.0 / s;
        let mut pow = inv; // s^{-(m+1)}
        let mut acc = 0.0;
        let mut best = (1, f64::INFINITY);
        for m in 0..MAX_ORDER {
            // stopping at M = m + 1 leaves |Δ^m c_K| / s^{m+1}
            let bound = acc + self.errs[m] * pow + self.diffs[m].abs() * pow;
            if bound < best.1 {
                best = (m + 1, bound);
            }
            acc += self.errs[m] * pow;
            pow *= inv;
            if !pow.is_finite() {
                break;
            }
        }
        best
    }

    fn min_modulus(&self, budget: f64) -> f64 {
        if self.plan(2.0).1 > budget {
            return f64::INFINITY;
        }
        let (mut lo, mut hi) = ((1e-14f64).ln(), 2f64.ln());
        if self.plan(lo.exp()).1 <= budget {
            return lo.exp();
        }
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if self.plan(mid.exp()).1 <= budget {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi.exp()
    }
}

/// Certified tail kernel `P⁽ⁿ⁾` for fixed `(α, r, β, n)`.
pub struct TailKernel {
    params: KernelParams,
    n: u64,
    tol: f64,
    log_scale: f64,
    trunc_k: u64,
    remainder: f64,
    chunks: Vec<OnceLock<Box<[f64]>>>,
    ladder_k: Vec<u64>,
    ladder: Vec<OnceLock<AbelEntry>>,
    total: OnceLock<(f64, f64)>,
    deriv_trunc: OnceLock<Result<(u64, f64)>>,
}

impl std::fmt::Debug for TailKernel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TailKernel")
            .field("params", &self.params)
            .field("n", &self.n)
            .field("tol", &self.tol)
            .field("trunc_k", &self.trunc_k)
            .finish()
    }
}

impl TailKernel {
    /// `tol` bounds the error of every value relative to `ψ(n)`.
    pub fn new(params: KernelParams, n: u64, tol: f64) -> Result<Self> {
        Self::with_cap(params, n, tol, DEFAULT_TERM_CAP)
    }

    pub fn with_cap(params: KernelParams, n: u64, tol: f64, cap: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("tail index n must be at least 1".into()));
        }
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
        }
        let budget = 0.25 * tol;
        let trunc_k = truncation_index(&params, n, 0, budget, cap)?;
        let log_scale = params.alpha() * (n as f64).powf(params.r());
        let remainder = (log_scale
            + ln_power_tail_integral(params.alpha(), params.r(), 0, trunc_k as f64))
        .exp();
        let span = (trunc_k - n + 1) as usize;
        let chunks = (0..span.div_ceil(CHUNK)).map(|_| OnceLock::new()).collect();
        let mut ladder_k = vec![n];
        while let Some(&last) = ladder_k.last() {
            let next = ((last as f64 * LADDER_GROWTH).ceil() as u64).max(last + 1);
            if next > trunc_k {
                break;
            }
            ladder_k.push(next);
        }
        let ladder = ladder_k.iter().map(|_| OnceLock::new()).collect();
        Ok(Self {
            params,
            n,
            tol,
            log_scale,
            trunc_k,
            remainder,
            chunks,
            ladder_k,
            ladder,
            total: OnceLock::new(),
            deriv_trunc: OnceLock::new(),
        })
    }

    pub fn params(&self) -> &KernelParams {
        &self.params
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Last index of the direct sum.
    pub fn trunc_k(&self) -> u64 {
        self.trunc_k
    }

    /// `α n^r`, so that `ψ(n) = e^{−log_scale}`.
    pub fn log_scale(&self) -> f64 {
        self.log_scale
    }

    /// `ψ(n)`.
    pub fn scale(&self) -> f64 {
        (-self.log_scale).exp()
    }

    /// Certified bound on `Σ_{k>trunc_k} ψ(k)`.
    pub fn remainder_bound(&self) -> f64 {
        self.remainder * self.scale()
    }

    /// Same bound relative to `ψ(n)`.
    pub fn scaled_remainder_bound(&self) -> f64 {
        self.remainder
    }

    fn chunk(&self, idx: usize) -> &[f64] {
        self.chunks[idx].get_or_init(|| {
            let start = self.n + (idx * CHUNK) as u64;
            let end = (start + CHUNK as u64).min(self.trunc_k + 1);
            (start..end).map(|k| self.params.psi_ratio(k, self.n)).collect()
        })
    }

    /// `c_k = ψ(k)/ψ(n)`.
    pub fn coeff(&self, k: u64) -> f64 {
        if k < self.n {
            return self.params.psi_ratio(k, self.n);
        }
        let i = (k - self.n) as usize;
        if k <= self.trunc_k {
            self.chunk(i / CHUNK)[i % CHUNK]
        } else {
            self.params.psi_ratio(k, self.n)
        }
    }

    fn entry(&self, j: usize) -> &AbelEntry {
        self.ladder[j]
            .get_or_init(|| AbelEntry::new(&self.params, self.n, self.ladder_k[j], 0.25 * self.tol))
    }

    /// `Σ_{k≥n} c_k` and its error bound.
    pub fn total_scaled(&self) -> (f64, f64) {
        *self.total.get_or_init(|| {
            // Neumaier summation; terms are generated on the fly so the
            // coefficient table is not filled up to `trunc_k`.
            let mut sum = 0.0f64;
            let mut comp = 0.0f64;
            for k in self.n..=self.trunc_k {
                let c = self.params.psi_ratio(k, self.n);
                let t = sum + c;
                if sum.abs() >= c.abs() {
                    comp += (sum - t) + c;
                } else {
                    comp += (c - t) + sum;
                }
                sum = t;
            }
            let value = sum + comp;
            (value, self.remainder + 4.0 * f64::EPSILON * value)
        })
    }

    /// `Σ_{k=from}^{to−1} c_k e^{ikt}` and `Σ c_k` over the same range.
    fn head(&self, t: f64, from: u64, to: u64) -> (Complex64, f64) {
        let step = Complex64::new(t.cos(), t.sin());
        let mut acc = Complex64::new(0.0, 0.0);
        let mut mass = 0.0;
        let mut k = from;
        while k < to {
            let end = (k + RESEED).min(to);
            let mut z = cis_kt(k, t);
            let i0 = (k - self.n) as usize;
            if end - 1 <= self.trunc_k && i0 / CHUNK == (end - 1 - self.n) as usize / CHUNK {
                let chunk = self.chunk(i0 / CHUNK);
                let off = i0 % CHUNK;
                for &c in &chunk[off..off + (end - k) as usize] {
                    acc += z * c;
                    mass += c;
                    z *= step;
                }
            } else {
                for kk in k..end {
                    let c = self.coeff(kk);
                    acc += z * c;
                    mass += c;
                    z *= step;
                }
            }
            k = end;
        }
        (acc, mass)
    }

    /// `S(t)/ψ(n)` with `S(t) = Σ_{k≥n} ψ(k) e^{ikt}`, and an error bound.
    pub fn sum_scaled(&self, t: f64) -> (Complex64, f64) {
        let t = wrap_angle(t);
        let s = 2.0 * (0.5 * t).sin();
        if s <= 0.0 {
            let (v, e) = self.total_scaled();
            return (Complex64::new(v, 0.0), e);
        }
        for j in 0..self.ladder.len() {
            let entry = self.entry(j);
            if s >= entry.s_min {
                return self.resummed(entry, t, s);
            }
        }
        self.direct(t)
    }

    fn resummed(&self, entry: &AbelEntry, t: f64, s: f64) -> (Complex64, f64) {
        let (head, mass) = self.head(t, self.n, entry.k);
        let (order, bound) = entry.plan(s);
        let half = Complex64::new((0.5 * t).cos(), (0.5 * t).sin());
        let i = Complex64::new(0.0, 1.0);
        // 1/(1−z) = i e^{−it/2}/s and z/(1−z) = i e^{it/2}/s
        let w = i * half / s;
        let mut term = cis_kt(entry.k, t) * i * half.conj() / s;
        let mut tail = Complex64::new(0.0, 0.0);
        let mut tail_mass = 0.0;
        for &d in &entry.diffs[..order] {
            let x = term * d;
            tail += x;
            tail_mass += x.norm();
            term *= w;
        }
        let err = bound + ROUNDING * (mass + tail_mass);
        (head + tail, err)
    }

    fn direct(&self, t: f64) -> (Complex64, f64) {
        let (v, mass) = self.head(t, self.n, self.trunc_k + 1);
        (v, self.remainder + ROUNDING * mass)
    }

    /// `P⁽ⁿ⁾(t)/ψ(n)` and its error bound.
    pub fn eval_scaled(&self, t: f64) -> (f64, f64) {
        let (s, err) = self.sum_scaled(t);
        let rot = Complex64::new(0.0, -self.params.phase()).exp();
        ((rot * s).re, err)
    }

    /// `P⁽ⁿ⁾(t)`.
    pub fn eval(&self, t: f64) -> f64 {
        self.eval_scaled(t).0 * self.scale()
    }

    /// `(g + ih)(t)/ψ(n) = e^{−int} S(t)/ψ(n)`.
    pub fn envelope_scaled(&self, t: f64) -> (Complex64, f64) {
        let t = wrap_angle(t);
        let (s, err) = self.sum_scaled(t);
        (cis_kt(self.n, t).conj() * s, err)
    }

    fn derivative_truncation(&self) -> Result<(u64, f64)> {
        self.deriv_trunc
            .get_or_init(|| {
                let k = truncation_index(&self.params, self.n, 1, 0.25 * self.tol, DEFAULT_TERM_CAP)?;
                let bound = (self.log_scale
                    + ln_power_tail_integral(self.params.alpha(), self.params.r(), 1, k as f64))
                .exp();
                Ok((k, bound))
            })
            .as_ref()
            .map(|&v| v)
            .map_err(|e| match e {
                Error::ToleranceUnreachable { tol, cap } => Error::ToleranceUnreachable {
                    tol: *tol,
                    cap: *cap,
                },
                other => Error::Domain(other.to_string()),
            })
    }

    /// `(g′ + ih′)(t)/ψ(n) = Σ_{j≥0} i j c_{n+j} e^{ijt}` by direct
    /// summation; the omitted part is bounded by `∫ x e^{−αx^r} dx`.
    pub fn envelope_derivative_scaled(&self, t: f64) -> Result<(Complex64, f64)> {
        let (k_end, bound) = self.derivative_truncation()?;
        let t = wrap_angle(t);
        let step = Complex64::new(t.cos(), t.sin());
        let mut acc = Complex64::new(0.0, 0.0);
        let mut mass = 0.0;
        let mut j = 0u64;
        while self.n + j <= k_end {
            let end = (j + RESEED).min(k_end - self.n + 1);
            let mut z = cis_kt(j, t);
            for jj in j..end {
                let c = self.coeff(self.n + jj) * jj as f64;
                acc += z * c;
                mass += c;
                z *= step;
            }
            j = end;
        }
        Ok((Complex64::new(-acc.im, acc.re), bound + ROUNDING * mass))
    }
}

/// Certified scalar tail `Σ_{k≥n} ψ(k)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailSum {
    /// `Σ_{k≥n} ψ(k)`; underflows to zero for very large `α n^r`.
    pub value: f64,
    /// `Σ_{k≥n} ψ(k)/ψ(n)`.
    pub scaled: f64,
    /// `α n^r`.
    pub log_scale: f64,
    /// Absolute error bound of `value`.
    pub error_bound: f64,
    /// Error bound of `scaled`.
    pub scaled_error: f64,
    pub trunc_k: u64,
}

/// `tol` is relative to `ψ(n)`.
pub fn tail_sum(params: &KernelParams, n: u64, tol: f64) -> Result<TailSum> {
    let kernel = TailKernel::new(*params, n, tol)?;
    let (scaled, scaled_error) = kernel.total_scaled();
    let scale = kernel.scale();
    Ok(TailSum {
        value: scaled * scale,
        scaled,
        log_scale: kernel.log_scale(),
        error_bound: scaled_error * scale,
        scaled_error,
        trunc_k: kernel.trunc_k(),
    })
}

/// `P⁽ⁿ⁾(t)` to within `tol·ψ(n)`.
pub fn eval_tail_kernel(params: &KernelParams, n: u64, t: f64, tol: f64) -> Result<f64> {
    Ok(TailKernel::new(*params, n, tol)?.eval(t))
}

/// Continuous branch of `arg(g + ih)` on `[0, 2π]`, sampled finely enough
/// that consecutive samples differ by less than `π/4`.
#[derive(Debug, Clone)]
pub struct PhaseCurve {
    n: u64,
    phase: f64,
    step: f64,
    args: Vec<f64>,
}

impl PhaseCurve {
    pub fn new(kernel: &TailKernel) -> Result<Self> {
        let mut size = 4096usize.max(8 * kernel.n() as usize);
        loop {
            let step = TWO_PI / size as f64;
            let mut args = Vec::with_capacity(size + 1);
            let mut prev: Option<f64> = None;
            let mut coarse = false;
            for i in 0..=size {
                let (g, _) = kernel.envelope_scaled(i as f64 * step);
                let raw = g.im.atan2(g.re);
                let a = match prev {
                    None => raw,
                    Some(p) => {
                        let a = p + (raw - p + PI).rem_euclid(TWO_PI) - PI;
                        if (a - p).abs() > 0.25 * PI {
                            coarse = true;
                        }
                        a
                    }
                };
                args.push(a);
                prev = Some(a);
            }
            if !coarse {
                return Ok(Self {
                    n: kernel.n(),
                    phase: kernel.params().phase(),
                    step,
                    args,
                });
            }
            if size >= 1 << 22 {
                return Err(Error::PhaseNotMonotone { t: 0.0 });
            }
            size *= 2;
        }
    }

    /// Continuous `arg(g + ih)` at `t ∈ [0, 2π]`, given the raw angle there.
    pub fn arg_at(&self, t: f64, raw: f64) -> f64 {
        let x = (t / self.step).clamp(0.0, (self.args.len() - 1) as f64);
        let i = (x.floor() as usize).min(self.args.len() - 2);
        let f = x - i as f64;
        let guess = self.args[i] * (1.0 - f) + self.args[i + 1] * f;
        guess + (raw - guess + PI).rem_euclid(TWO_PI) - PI
    }

    /// `y(t) = t − βπ/(2n) + arg(g + ih)/n` at the grid node `i`.
    pub fn y_node(&self, i: usize) -> f64 {
        i as f64 * self.step - self.phase / self.n as f64 + self.args[i] / self.n as f64
    }

    pub fn len(&self) -> usize {
        self.args.len()
    }

    pub fn is_empty(&self) -> bool {
        self.args.is_empty()
    }

    pub fn node(&self, i: usize) -> f64 {
        i as f64 * self.step
    }

    /// `y` at an arbitrary `t ∈ [0, 2π]`.
    pub fn y(&self, kernel: &TailKernel, t: f64) -> f64 {
        let (g, _) = kernel.envelope_scaled(t);
        let arg = self.arg_at(t, g.im.atan2(g.re));
        t - self.phase / self.n as f64 + arg / self.n as f64
    }
}

/// Envelope pair, phase and the pointwise lower bound on `y′` at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvelopePhase {
    pub t: f64,
    pub g: f64,
    pub h: f64,
    pub y: f64,
    /// `1 − |G′|/(n|G|)` with `G = g + ih`.
    pub y_prime_lower: Option<f64>,
}

impl EnvelopePhase {
    /// `√(g² + h²) cos(n y)`.
    pub fn reconstruct(&self, n: u64) -> f64 {
        self.g.hypot(self.h) * (n as f64 * self.y).cos()
    }
}

pub fn envelope_phase_at(
    kernel: &TailKernel,
    curve: &PhaseCurve,
    t: f64,
    with_derivative: bool,
) -> Result<EnvelopePhase> {
    let scale = kernel.scale();
    let periods = (t / TWO_PI).floor();
    let tw = t - periods * TWO_PI;
    let (g, _) = kernel.envelope_scaled(tw);
    let y = curve.y(kernel, tw) + periods * TWO_PI;
    let y_prime_lower = if with_derivative {
        let (d, _) = kernel.envelope_derivative_scaled(tw)?;
        Some(1.0 - d.norm() / (kernel.n() as f64 * g.norm()))
    } else {
        None
    };
    Ok(EnvelopePhase {
        t,
        g: g.re * scale,
        h: g.im * scale,
        y,
        y_prime_lower,
    })
}

pub fn eval_envelope_phase(params: &KernelParams, n: u64, t: f64, tol: f64) -> Result<EnvelopePhase> {
    let kernel = TailKernel::new(*params, n, tol)?;
    let curve = PhaseCurve::new(&kernel)?;
    envelope_phase_at(&kernel, &curve, t, true)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MnEstimate {
    /// Largest `|G′|/|G|` seen on the grid.
    pub empirical: f64,
    /// `(784π²/117)(n^{1−r}/(αr) + αr n^r)`.
    pub bound: f64,
    pub grid_size: usize,
}

pub fn mn_bound(params: &KernelParams, n: u64) -> f64 {
    let ar = params.alpha_r();
    let nf = n as f64;
    784.0 * PI * PI / 117.0 * (nf.powf(1.0 - params.r()) / ar + ar * nf.powf(params.r()))
}

pub fn estimate_mn(params: &KernelParams, n: u64, grid_size: usize, tol: f64) -> Result<MnEstimate> {
    if grid_size < 1024 {
        return Err(Error::Domain(format!("grid_size must be at least 1024, got {grid_size}")));
    }
    let kernel = TailKernel::new(*params, n, tol)?;
    let mut sup = 0.0f64;
    for i in 0..grid_size {
        let t = TWO_PI * i as f64 / grid_size as f64;
        let (g, _) = kernel.envelope_scaled(t);
        let (d, _) = kernel.envelope_derivative_scaled(t)?;
        sup = sup.max(d.norm() / g.norm());
    }
    Ok(MnEstimate {
        empirical: sup,
        bound: mn_bound(params, n),
        grid_size,
    })
}

/// `D_{n−1}(t) = 1/2 + Σ_{k<n} cos kt = sin((n − 1/2)t) / (2 sin(t/2))`.
pub fn dirichlet(n: u64, t: f64) -> f64 {
    assert!(n >= 1);
    let u = wrap_angle(t);
    let u = if u > PI { u - TWO_PI } else { u };
    let half = (0.5 * u).sin();
    let m = n as f64 - 0.5;
    if half.abs() < 1e-6 {
        // sin(mu)/(2 sin(u/2)) ≈ m (1 − (m² − 1/4) u²/6)
        return m * (1.0 - (m * m - 0.25) * u * u / 6.0);
    }
    (m * u).sin() / (2.0 * half)
}
