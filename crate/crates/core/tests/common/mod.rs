//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use leblab::TrigPolynomial;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

/// Binary fixed point with `BITS` fractional bits.
#[derive(Clone, Debug, PartialEq)]
pub struct Fixed(pub BigInt);

pub const BITS: u32 = 320;

impl Fixed {
    pub fn one() -> Self {
        Fixed(BigInt::one() << BITS)
    }

    pub fn zero() -> Self {
        Fixed(BigInt::zero())
    }

    pub fn from_int(k: i64) -> Self {
        Fixed(BigInt::from(k) << BITS)
    }

    /// Exact conversion of a finite double.
    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            return Self::zero();
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, e) = if exp == 0 { (frac, -1074) } else { (frac | (1u64 << 52), exp - 1075) };
        let m = BigInt::from(mant) * sign;
        let shift = e + BITS as i64;
        Fixed(if shift >= 0 { m << shift as u32 } else { m >> (-shift) as u32 })
    }

    pub fn to_f64(&self) -> f64 {
        // keep 64 significant bits, then scale
        let bits = self.0.bits() as i64;
        let drop = (bits - 64).max(0);
        let top = (&self.0 >> drop as u32).to_f64().unwrap();
        top * 2f64.powi((drop - BITS as i64) as i32)
    }

    pub fn add(&self, o: &Self) -> Self {
        Fixed(&self.0 + &o.0)
    }

    pub fn sub(&self, o: &Self) -> Self {
        Fixed(&self.0 - &o.0)
    }

    pub fn mul(&self, o: &Self) -> Self {
        Fixed((&self.0 * &o.0) >> BITS)
    }

    pub fn div(&self, o: &Self) -> Self {
        Fixed((&self.0 << BITS) / &o.0)
    }

    pub fn scale_int(&self, k: i64) -> Self {
        Fixed(&self.0 * k)
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// `2 atanh(y) = 2 Σ y^{2j+1}/(2j+1)` for small `|y|`.
    fn two_atanh(y: &Self) -> Self {
        let y2 = y.mul(y);
        let mut term = y.clone();
        let mut sum = Self::zero();
        let mut j = 0i64;
        while !term.0.is_zero() {
            sum = sum.add(&Fixed(&term.0 / (2 * j + 1)));
            term = term.mul(&y2);
            j += 1;
        }
        sum.scale_int(2)
    }

    pub fn ln2() -> Self {
        Self::two_atanh(&Self::one().div(&Self::from_int(3)))
    }

    /// Natural log of a positive integer.
    pub fn ln_int(k: u64) -> Self {
        assert!(k > 0);
        let e = 63 - k.leading_zeros() as i64;
        // k = 2^e m with m in [1, 2)
        let m = Fixed(BigInt::from(k) << BITS).div(&Self::from_int(1i64 << e));
        let y = m.sub(&Self::one()).div(&m.add(&Self::one()));
        Self::ln2().scale_int(e).add(&Self::two_atanh(&y))
    }

    /// `exp(x)` by halving until small, Taylor, then squaring back.
    pub fn exp(x: &Self) -> Self {
        let mut s = 0u32;
        let mut y = x.clone();
        let limit = BigInt::one() << (BITS - 12);
        while y.0.abs() > limit {
            y = Fixed(&y.0 >> 1);
            s += 1;
        }
        let mut term = Self::one();
        let mut sum = Self::one();
        let mut j = 1i64;
        while !term.0.is_zero() {
            term = Fixed(&term.mul(&y).0 / j);
            sum = sum.add(&term);
            j += 1;
        }
        for _ in 0..s {
            sum = sum.mul(&sum);
        }
        sum
    }

    /// `k^r` for a positive integer `k` and a double `r`.
    pub fn pow_int(k: u64, r: f64) -> Self {
        Self::exp(&Self::ln_int(k).mul(&Self::from_f64(r)))
    }
}

/// `Δ^m a_k / a_k` for `a_k = exp(−α k^r)`, in fixed point.
pub fn relative_difference(alpha: f64, r: f64, m: usize, k: u64) -> Fixed {
    let a = Fixed::from_f64(alpha);
    let base = Fixed::pow_int(k, r);
    let mut binom = BigInt::one();
    let mut sum = Fixed::zero();
    for v in 0..=m {
        let gap = Fixed::pow_int(k + v as u64, r).sub(&base);
        let ratio = Fixed::exp(&Fixed::zero().sub(&a.mul(&gap)));
        let term = Fixed(&ratio.0 * &binom);
        sum = if (m + v) % 2 == 0 { sum.add(&term) } else { sum.sub(&term) };
        binom = binom * BigInt::from(m - v) / BigInt::from(v + 1);
    }
    sum
}

/// Left side of the `n₁` inequality, written out directly.
pub fn n1_lhs_direct(alpha: f64, r: f64, n: u64) -> f64 {
    let n = n as f64;
    let ar = alpha * r;
    (1.0 / (ar * n.powf(r))) * (1.0 + (PI * n.powf(1.0 - r) / ar).ln()) + ar / n.powf(1.0 - r)
}

pub fn three_pi_cubed_inv() -> f64 {
    1.0 / (27.0 * PI * PI * PI)
}

/// Smallest `n` with `holds(n)`, by doubling and then stepping down one at a time.
pub fn doubling_then_downward(holds: impl Fn(u64) -> bool) -> u64 {
    let mut hi = 1u64;
    while !holds(hi) {
        hi *= 2;
    }
    let mut n = hi;
    while n > 1 && holds(n - 1) {
        n -= 1;
    }
    n
}

pub fn random_poly<R: Rng>(rng: &mut R, degree: usize) -> TrigPolynomial {
    let cos = (0..degree).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let sin = (0..degree).map(|_| rng.gen_range(-1.0..1.0)).collect();
    TrigPolynomial::new(rng.gen_range(-1.0..1.0), cos, sin).unwrap()
}

/// `(α, r)` pairs of the standard test grid.
pub fn param_grid() -> Vec<(f64, f64)> {
    let mut v = Vec::new();
    for &a in &[0.5, 1.0, 2.0] {
        for &r in &[0.3, 0.5, 0.7] {
            v.push((a, r));
        }
    }
    v
}

pub const BETAS: [f64; 4] = [0.0, 0.25, 0.5, 0.99];

/// Samples `P⁽ⁿ⁾(2πj/N)` by an inverse real DFT of the coefficients,
/// summing directly up to the index where `ψ(k)/ψ(n) < 1e−18`.
pub fn dense_kernel_samples(alpha: f64, r: f64, beta: f64, n: u64, log2_n: u32) -> Vec<f64> {
    use rustfft::num_complex::Complex;
    use rustfft::FftPlanner;
    let size = 1usize << log2_n;
    let nr = (n as f64).powf(r);
    let top = ((nr + 41.5 / alpha).powf(1.0 / r)).ceil() as usize;
    assert!(top < size / 2, "coefficients would alias");
    let theta = beta * PI / 2.0;
    // P(t) = Re Σ ψ(k) e^{−iθ} e^{ikt}
    let mut buf = vec![Complex::new(0.0, 0.0); size];
    for k in n as usize..=top {
        let w = (-alpha * ((k as f64).powf(r))).exp();
        buf[k] = Complex::new(w * theta.cos(), -w * theta.sin());
    }
    let mut planner = FftPlanner::new();
    planner.plan_fft_inverse(size).process(&mut buf);
    buf.iter().map(|c| c.re).collect()
}

/// `‖P⁽ⁿ⁾‖₁` by the trapezoid rule on `2^log2_n` points.
pub fn dense_l1(alpha: f64, r: f64, beta: f64, n: u64, log2_n: u32) -> f64 {
    let s = dense_kernel_samples(alpha, r, beta, n, log2_n);
    let h = 2.0 * PI / s.len() as f64;
    s.iter().map(|v| v.abs()).sum::<f64>() * h
}

/// `P⁽ⁿ⁾(t)` and its antiderivative `Σ ψ(k) sin(kt − θ)/k`, summed directly.
pub fn direct_kernel(alpha: f64, r: f64, beta: f64, n: u64, t: f64) -> (f64, f64) {
    let nr = (n as f64).powf(r);
    let top = ((nr + 41.5 / alpha).powf(1.0 / r)).ceil() as u64;
    let theta = beta * PI / 2.0;
    let (mut p, mut big_p) = (0.0, 0.0);
    for k in n..=top {
        let w = (-alpha * (k as f64).powf(r)).exp();
        let ph = k as f64 * t - theta;
        p += w * ph.cos();
        big_p += w * ph.sin() / k as f64;
    }
    (p, big_p)
}

/// `‖P⁽ⁿ⁾‖₁ = Σ |F(z_{j+1}) − F(z_j)|` over the sign changes of `P`, which
/// are bracketed on a dense grid and refined by bisection of the direct sum.
pub fn spectral_l1(alpha: f64, r: f64, beta: f64, n: u64, log2_n: u32) -> f64 {
    let s = dense_kernel_samples(alpha, r, beta, n, log2_n);
    let m = s.len();
    let h = 2.0 * PI / m as f64;
    let p = |t: f64| direct_kernel(alpha, r, beta, n, t).0;
    let mut zeros = Vec::new();
    for j in 0..m {
        if s[j].signum() != s[(j + 1) % m].signum() {
            let (mut lo, mut hi) = (j as f64 * h, (j + 1) as f64 * h);
            let neg_lo = p(lo) < 0.0;
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if (p(mid) < 0.0) == neg_lo {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            zeros.push(0.5 * (lo + hi));
        }
    }
    assert!(!zeros.is_empty());
    let f = |t: f64| direct_kernel(alpha, r, beta, n, t).1;
    let mut total = 0.0;
    for i in 0..zeros.len() {
        let a = zeros[i];
        let b = if i + 1 < zeros.len() { zeros[i + 1] } else { zeros[0] + 2.0 * PI };
        total += (f(b) - f(a)).abs();
    }
    total
}
