//! Validated class parameters `(α, r, β)`.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Parameters of the generalized Poisson kernel
/// `Σ_k exp(-α k^r) cos(k t - βπ/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelParams {
    alpha: f64,
    r: f64,
    beta: f64,
}

impl KernelParams {
    /// Rejects `α <= 0`, `r ∉ (0, 1)` and non-finite input.
    pub fn new(alpha: f64, r: f64, beta: f64) -> Result<Self> {
        if !(alpha.is_finite() && r.is_finite() && beta.is_finite()) {
            return Err(Error::Domain(format!(
                "parameters must be finite (alpha={alpha}, r={r}, beta={beta})"
            )));
        }
        if alpha <= 0.0 {
            return Err(Error::Domain(format!("alpha must be positive, got {alpha}")));
        }
        if r <= 0.0 || r >= 1.0 {
            return Err(Error::Domain(format!("r must lie in (0, 1), got {r}")));
        }
        Ok(Self { alpha, r, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        Self::new(self.alpha, self.r, beta)
    }

    /// Representative of `β` in `[0, 4)`; the kernel is 4-periodic in `β`.
    pub fn beta_mod4(&self) -> f64 {
        let b = self.beta.rem_euclid(4.0);
        if b >= 4.0 {
            0.0
        } else {
            b
        }
    }

    /// Phase shift `βπ/2`.
    pub fn phase(&self) -> f64 {
        self.beta * std::f64::consts::FRAC_PI_2
    }

    /// `α r`, the product that appears in every threshold.
    pub fn alpha_r(&self) -> f64 {
        self.alpha * self.r
    }

    /// `ψ(k) = exp(-α k^r)`, with `ψ(0) = 1`.
    pub fn psi(&self, k: u64) -> f64 {
        if k == 0 {
            return 1.0;
        }
        (-self.alpha * (k as f64).powf(self.r)).exp()
    }

    /// `ψ(k)/ψ(n) = exp(-α (k^r - n^r))`, computed without cancellation for
    /// `k` close to `n`.
    pub fn psi_ratio(&self, k: u64, n: u64) -> f64 {
        (-self.alpha * self.power_gap(k, n)).exp()
    }

    /// `k^r - n^r` for `n >= 1`.
    pub fn power_gap(&self, k: u64, n: u64) -> f64 {
        let nf = n as f64;
        let x = (k as f64 - nf) / nf;
        nf.powf(self.r) * (self.r * x.ln_1p()).exp_m1()
    }
}

/// Shorthand for [`KernelParams::new`].
pub fn validate_params(alpha: f64, r: f64, beta: f64) -> Result<KernelParams> {
    KernelParams::new(alpha, r, beta)
}

/// Exponent descriptor `p ∈ {1} ∪ (1, ∞) ∪ {∞}` used by the `n₀` threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Exponent {
    One,
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn new(p: f64) -> Result<Self> {
        if p == f64::INFINITY {
            Ok(Exponent::Infinity)
        } else if p == 1.0 {
            Ok(Exponent::One)
        } else if p.is_finite() && p > 1.0 {
            Ok(Exponent::Finite(p))
        } else {
            Err(Error::Domain(format!("exponent p must be >= 1 or infinite, got {p}")))
        }
    }

    /// `χ(p) = p` for finite `p`, `1` for `p = ∞`.
    pub fn chi(&self) -> f64 {
        match *self {
            Exponent::One => 1.0,
            Exponent::Finite(p) => p,
            Exponent::Infinity => 1.0,
        }
    }

    /// Conjugate exponent `p' = p/(p-1)`.
    pub fn conjugate(&self) -> Exponent {
        match *self {
            Exponent::One => Exponent::Infinity,
            Exponent::Finite(p) => {
                let q = p / (p - 1.0);
                if q == 1.0 {
                    Exponent::One
                } else {
                    Exponent::Finite(q)
                }
            }
            Exponent::Infinity => Exponent::One,
        }
    }

    pub fn value(&self) -> f64 {
        match *self {
            Exponent::One => 1.0,
            Exponent::Finite(p) => p,
            Exponent::Infinity => f64::INFINITY,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_interior_point() {
        let p = validate_params(1.0, 0.5, 0.0).unwrap();
        assert_eq!(p.alpha(), 1.0);
    }

    #[test]
    fn rejects_boundary_and_bad_values() {
        assert!(matches!(validate_params(1.0, 1.0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(validate_params(1.0, 0.0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(validate_params(-2.0, 0.5, 1.0), Err(Error::Domain(_))));
        assert!(matches!(validate_params(0.0, 0.5, 1.0), Err(Error::Domain(_))));
        assert!(matches!(validate_params(f64::NAN, 0.5, 1.0), Err(Error::Domain(_))));
        assert!(matches!(validate_params(1.0, 0.5, f64::INFINITY), Err(Error::Domain(_))));
    }

    #[test]
    fn psi_values() {
        let p = validate_params(1.0, 0.5, 0.0).unwrap();
        assert_eq!(p.psi(0), 1.0);
        assert!((p.psi(4) - (-2.0f64).exp()).abs() < 1e-16);
        for k in 1..200 {
            assert!(p.psi(k + 1) < p.psi(k));
        }
    }

    #[test]
    fn psi_ratio_is_stable_near_n() {
        let p = validate_params(1.0, 0.5, 0.0).unwrap();
        let n = 1_000_000_000u64;
        let direct = p.power_gap(n + 1, n);
        // √(n+1) - √n = 1/(√(n+1) + √n)
        let exact = 1.0 / (((n + 1) as f64).sqrt() + (n as f64).sqrt());
        assert!((direct - exact).abs() < 1e-15 * exact);
    }

    #[test]
    fn beta_reduction() {
        let p = validate_params(1.0, 0.5, -0.5).unwrap();
        assert!((p.beta_mod4() - 3.5).abs() < 1e-15);
        let q = validate_params(1.0, 0.5, 9.25).unwrap();
        assert!((q.beta_mod4() - 1.25).abs() < 1e-14);
    }

    #[test]
    fn exponent_descriptor() {
        assert_eq!(Exponent::new(1.0).unwrap(), Exponent::One);
        assert_eq!(Exponent::new(f64::INFINITY).unwrap().chi(), 1.0);
        assert_eq!(Exponent::new(3.0).unwrap().chi(), 3.0);
        assert_eq!(Exponent::new(2.0).unwrap().conjugate(), Exponent::Finite(2.0));
        assert_eq!(Exponent::One.conjugate(), Exponent::Infinity);
        assert!(Exponent::new(0.5).is_err());
    }
}
