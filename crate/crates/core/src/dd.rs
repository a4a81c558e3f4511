//! Double-double ("twice binary64") arithmetic.
//!
//! A value is the unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`, giving
//! roughly 106 bits of significand. Only the operations needed for high-order
//! finite differences of `exp(-α k^r)` are provided.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Unit roundoff of double-double arithmetic (2^-104, conservatively).
pub const EPS: f64 = 4.930380657631324e-32;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

const LN2: DoubleDouble = DoubleDouble {
    hi: std::f64::consts::LN_2,
    lo: 2.319_046_813_846_299_6e-17,
};

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

impl DoubleDouble {
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };
    pub const ONE: Self = Self { hi: 1.0, lo: 0.0 };

    #[inline]
    pub const fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    /// Exact conversion of an integer up to 2^106.
    pub fn from_u64(k: u64) -> Self {
        let hi = k as f64;
        // `hi` may have rounded; the remainder is exactly representable.
        let lo = (k as i128 - hi as i128) as f64;
        let (hi, lo) = quick_two_sum(hi, lo);
        Self { hi, lo }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    /// Multiplies by `2^k` exactly (barring underflow of `lo`).
    fn ldexp(self, k: i32) -> Self {
        // Two steps keep the scale factor itself normal.
        let half = k / 2;
        let f1 = 2f64.powi(half);
        let f2 = 2f64.powi(k - half);
        Self {
            hi: self.hi * f1 * f2,
            lo: self.lo * f1 * f2,
        }
    }

    pub fn sqr(self) -> Self {
        self * self
    }

    /// `exp(x)` to double-double accuracy.
    pub fn exp(self) -> Self {
        if self.hi > 709.7 {
            return Self::from_f64(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return Self::ZERO;
        }
        let k = (self.hi / LN2.hi).round();
        let r = self - LN2 * Self::from_f64(k);
        // Scale the reduced argument down by 2^10, sum the Taylor series of
        // exp(r) - 1, then square back up in expm1 form.
        let r = r.ldexp(-10);
        let mut term = r;
        let mut sum = r;
        for j in 2..=12u32 {
            term = term * r / Self::from_f64(f64::from(j));
            sum = sum + term;
            if term.hi.abs() < 1e-36 {
                break;
            }
        }
        // (1 + p)^2 - 1 = 2p + p^2
        for _ in 0..10 {
            sum = sum.ldexp(1) + sum.sqr();
        }
        (sum + Self::ONE).ldexp(k as i32)
    }

    /// Natural logarithm for positive arguments.
    pub fn ln(self) -> Self {
        if self.hi <= 0.0 {
            return Self::from_f64(f64::NAN);
        }
        let mut y = Self::from_f64(self.hi.ln());
        // Newton on exp(y) = x: y <- y + x exp(-y) - 1.
        for _ in 0..2 {
            y = y + self * (-y).exp() - Self::ONE;
        }
        y
    }

    /// `x^p` for positive `x`.
    pub fn powf(self, p: Self) -> Self {
        (p * self.ln()).exp()
    }
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        Self::from_f64(x)
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    #[inline]
    fn add(self, b: Self) -> Self {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Self { hi, lo }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    #[inline]
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    #[inline]
    fn mul(self, b: Self) -> Self {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Self { hi, lo }
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        let r = self - b * Self::from_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b * Self::from_f64(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Self { hi, lo } + Self::from_f64(q3)
    }
}
