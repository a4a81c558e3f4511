//! Real trigonometric polynomials and the periodic-function interface used
//! by the approximation and quadrature routines.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{wrap_angle, Error, Result, TWO_PI};

/// A continuous `2π`-periodic function.
pub trait PeriodicFunction: Sync {
    fn eval(&self, t: f64) -> f64;

    /// Points in `[0, 2π)` where the function may fail to be smooth.
    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }
}

impl<T: PeriodicFunction + ?Sized> PeriodicFunction for &T {
    fn eval(&self, t: f64) -> f64 {
        (**self).eval(t)
    }

    fn breakpoints(&self) -> Vec<f64> {
        (**self).breakpoints()
    }
}

/// Wraps a smooth closure.
pub struct FnPeriodic<F>(pub F);

impl<F: Fn(f64) -> f64 + Sync> PeriodicFunction for FnPeriodic<F> {
    fn eval(&self, t: f64) -> f64 {
        (self.0)(t)
    }
}

/// `a0/2 + Σ_{k=1}^{m} (a_k cos kx + b_k sin kx)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrigPolynomial {
    pub a0: f64,
    /// `a_1, …, a_m`
    pub cos: Vec<f64>,
    /// `b_1, …, b_m`
    pub sin: Vec<f64>,
}

impl TrigPolynomial {
    pub fn new(a0: f64, cos: Vec<f64>, sin: Vec<f64>) -> Result<Self> {
        if cos.len() != sin.len() {
            return Err(Error::Domain(format!(
                "cosine and sine coefficient lists differ in length ({} vs {})",
                cos.len(),
                sin.len()
            )));
        }
        Ok(Self { a0, cos, sin })
    }

    pub fn zero(m: usize) -> Self {
        Self {
            a0: 0.0,
            cos: vec![0.0; m],
            sin: vec![0.0; m],
        }
    }

    /// Number of stored harmonics.
    pub fn order(&self) -> usize {
        self.cos.len()
    }

    /// Largest `k` with a nonzero coefficient (0 for a constant).
    pub fn degree(&self) -> usize {
        (1..=self.order())
            .rev()
            .find(|&k| self.cos[k - 1] != 0.0 || self.sin[k - 1] != 0.0)
            .unwrap_or(0)
    }

    /// Coefficient pair of harmonic `k ≥ 1`, zero beyond the stored order.
    pub fn harmonic(&self, k: usize) -> (f64, f64) {
        if k >= 1 && k <= self.order() {
            (self.cos[k - 1], self.sin[k - 1])
        } else {
            (0.0, 0.0)
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let x = wrap_angle(x);
        let step = Complex64::new(x.cos(), x.sin());
        let mut z = step;
        let mut sum = 0.5 * self.a0;
        for k in 1..=self.order() {
            if k % 32 == 0 {
                z = Complex64::new((k as f64 * x).cos(), (k as f64 * x).sin());
            }
            sum += self.cos[k - 1] * z.re + self.sin[k - 1] * z.im;
            z *= step;
        }
        sum
    }

    /// Truncation to harmonics `k ≤ m`.
    pub fn truncate(&self, m: usize) -> Self {
        let m = m.min(self.order());
        Self {
            a0: self.a0,
            cos: self.cos[..m].to_vec(),
            sin: self.sin[..m].to_vec(),
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            a0: c * self.a0,
            cos: self.cos.iter().map(|v| c * v).collect(),
            sin: self.sin.iter().map(|v| c * v).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let m = self.order().max(other.order());
        let mut out = Self::zero(m);
        out.a0 = self.a0 + other.a0;
        for k in 1..=m {
            let (a, b) = self.harmonic(k);
            let (c, d) = other.harmonic(k);
            out.cos[k - 1] = a + c;
            out.sin[k - 1] = b + d;
        }
        out
    }

    /// `p(x − τ)`.
    pub fn shift(&self, tau: f64) -> Self {
        let mut out = self.clone();
        for k in 1..=self.order() {
            let (a, b) = self.harmonic(k);
            let (s, c) = (k as f64 * tau).sin_cos();
            // a cos k(x−τ) + b sin k(x−τ)
            out.cos[k - 1] = a * c - b * s;
            out.sin[k - 1] = a * s + b * c;
        }
        out
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.cos
            .iter()
            .chain(&self.sin)
            .map(|v| v.abs())
            .fold((0.5 * self.a0).abs(), f64::max)
    }
}

impl PeriodicFunction for TrigPolynomial {
    fn eval(&self, t: f64) -> f64 {
        TrigPolynomial::eval(self, t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Interpolation {
    /// Piecewise linear through the samples, wrapping through `2π`.
    Linear,
    /// The trigonometric interpolant of equispaced samples.
    Trigonometric,
}

/// A periodic function given by samples `(t_i, f_i)` on `[0, 2π)`.
#[derive(Debug, Clone)]
pub struct SampledFunction {
    t: Vec<f64>,
    f: Vec<f64>,
    rule: Interpolation,
    interpolant: Option<TrigPolynomial>,
}

impl SampledFunction {
    pub fn new(samples: Vec<(f64, f64)>, rule: Interpolation) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::Domain("at least two samples are required".into()));
        }
        let mut samples: Vec<(f64, f64)> =
            samples.into_iter().map(|(t, f)| (wrap_angle(t), f)).collect();
        if samples.iter().any(|(_, f)| !f.is_finite()) {
            return Err(Error::Domain("sample values must be finite".into()));
        }
        samples.sort_by(|a, b| a.0.total_cmp(&b.0));
        if samples.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Domain("sample abscissae must be distinct modulo 2π".into()));
        }
        let (t, f): (Vec<f64>, Vec<f64>) = samples.into_iter().unzip();
        let interpolant = match rule {
            Interpolation::Linear => None,
            Interpolation::Trigonometric => Some(trig_interpolant(&t, &f)?),
        };
        Ok(Self {
            t,
            f,
            rule,
            interpolant,
        })
    }

    pub fn rule(&self) -> Interpolation {
        self.rule
    }
}

/// Interpolant of equispaced samples `t_j = t_0 + 2πj/N`.
fn trig_interpolant(t: &[f64], f: &[f64]) -> Result<TrigPolynomial> {
    let n = t.len();
    let h = TWO_PI / n as f64;
    if t
        .iter()
        .enumerate()
        .any(|(j, &tj)| (tj - t[0] - j as f64 * h).abs() > 1e-9)
    {
        return Err(Error::Domain(
            "trigonometric interpolation needs equispaced samples covering one period".into(),
        ));
    }
    let m = n / 2;
    let mut p = TrigPolynomial::zero(m);
    p.a0 = 2.0 * f.iter().sum::<f64>() / n as f64;
    for k in 1..=m {
        let (mut a, mut b) = (0.0, 0.0);
        for (&tj, &fj) in t.iter().zip(f) {
            let (s, c) = (k as f64 * tj).sin_cos();
            a += fj * c;
            b += fj * s;
        }
        // the Nyquist harmonic of an even grid carries half weight
        let w = if 2 * k == n { 1.0 } else { 2.0 };
        p.cos[k - 1] = w * a / n as f64;
        p.sin[k - 1] = if 2 * k == n { 0.0 } else { w * b / n as f64 };
    }
    Ok(p)
}

impl PeriodicFunction for SampledFunction {
    fn eval(&self, t: f64) -> f64 {
        if let Some(p) = &self.interpolant {
            return p.eval(t);
        }
        let x = wrap_angle(t);
        let n = self.t.len();
        let i = self.t.partition_point(|&v| v <= x);
        let (t0, f0, t1, f1) = if i == 0 {
            (self.t[n - 1] - TWO_PI, self.f[n - 1], self.t[0], self.f[0])
        } else if i == n {
            (self.t[n - 1], self.f[n - 1], self.t[0] + TWO_PI, self.f[0])
        } else {
            (self.t[i - 1], self.f[i - 1], self.t[i], self.f[i])
        };
        f0 + (f1 - f0) * (x - t0) / (t1 - t0)
    }

    fn breakpoints(&self) -> Vec<f64> {
        match self.rule {
            Interpolation::Linear => self.t.clone(),
            Interpolation::Trigonometric => Vec::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluation_and_degree() {
        let p = TrigPolynomial::new(2.0, vec![0.5, 0.0, 0.0], vec![0.0, -1.0, 0.0]).unwrap();
        assert_eq!(p.degree(), 2);
        let x: f64 = 0.8;
        let direct = 1.0 + 0.5 * x.cos() - (2.0 * x).sin();
        assert!((p.eval(x) - direct).abs() < 1e-15);
    }

    #[test]
    fn long_polynomial_is_accurate() {
        let m = 200;
        let p = TrigPolynomial::new(0.0, vec![1.0; m], vec![0.5; m]).unwrap();
        let x = 2.3;
        let direct: f64 = (1..=m)
            .map(|k| (k as f64 * x).cos() + 0.5 * (k as f64 * x).sin())
            .sum();
        assert!((p.eval(x) - direct).abs() < 1e-11);
    }

    #[test]
    fn shift_translates() {
        let p = TrigPolynomial::new(0.3, vec![1.0, 0.2], vec![-0.4, 0.7]).unwrap();
        let q = p.shift(0.9);
        for &x in &[0.0, 1.0, 4.0] {
            assert!((q.eval(x) - p.eval(x - 0.9)).abs() < 1e-14);
        }
    }

    #[test]
    fn linear_samples_wrap() {
        let s = SampledFunction::new(vec![(0.0, 0.0), (PI_HALF, 1.0), (3.0 * PI_HALF, -1.0)], Interpolation::Linear)
            .unwrap();
        assert!((s.eval(PI_HALF / 2.0) - 0.5).abs() < 1e-15);
        // between 3π/2 and 2π the value climbs back to 0
        assert!((s.eval(7.0 * PI_HALF / 2.0) + 0.5).abs() < 1e-15);
    }

    #[test]
    fn trigonometric_samples_reproduce_polynomial() {
        let p = TrigPolynomial::new(1.0, vec![0.5, 0.25, 0.0], vec![0.0, -0.3, 0.1]).unwrap();
        let n = 8;
        let samples = (0..n)
            .map(|j| {
                let t = TWO_PI * j as f64 / n as f64;
                (t, p.eval(t))
            })
            .collect();
        let s = SampledFunction::new(samples, Interpolation::Trigonometric).unwrap();
        for &x in &[0.1, 1.7, 5.5] {
            assert!((s.eval(x) - p.eval(x)).abs() < 1e-13);
        }
    }

    const PI_HALF: f64 = std::f64::consts::FRAC_PI_2;
}
