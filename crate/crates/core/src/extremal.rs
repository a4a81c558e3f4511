//! The extremal function `Φ_δ`: `level · sign P⁽ⁿ⁾(−t)` with each jump
//! replaced by a linear ramp of half-width `δ`, and the quantities that show
//! it turns the Lebesgue-type bound into an equality up to `R_n(δ)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::kernel::TailKernel;
use crate::norms::l1_norm_tail_kernel;
use crate::poisson::convolve_quadrature;
use crate::quadrature::{integrate_noisy, DEFAULT_MAX_DEPTH};
use crate::trig::PeriodicFunction;
use crate::zeros::ZeroSet;
use crate::{wrap_angle, Error, Result, TWO_PI};

/// `13π(10π⁴ − 969)/14`, the constant of the admissible-δ inequality.
pub fn delta_constant() -> f64 {
    13.0 * PI * (10.0 * PI.powi(4) - 969.0) / 14.0
}

/// `20π⁴ − 1938`, the constant bounding `|R_n(δ)| e^{αn^r}/level` for `n ≥ n₁`.
pub fn rn_constant() -> f64 {
    20.0 * PI.powi(4) - 1938.0
}

/// Zeros of `t ↦ P⁽ⁿ⁾(−t)`: the reflections `−z_k` wrapped and re-sorted.
pub fn reflect_zero_set(set: &ZeroSet) -> ZeroSet {
    let mut pairs: Vec<(f64, f64)> = set
        .zeros
        .iter()
        .zip(&set.residuals)
        .map(|(&z, &r)| (wrap_angle(-z), r))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (zeros, residuals) = pairs.into_iter().unzip();
    ZeroSet {
        n: set.n,
        zeros,
        method: set.method,
        residuals,
        alternation_ok: set.alternation_ok,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremalFunction {
    /// Plateau height.
    pub level: f64,
    /// Reflected zero set; the ramps are centred on these points.
    pub zeros: ZeroSet,
    pub delta: f64,
    /// `plateau_signs[k]` is the sign on `(w_k, w_{k+1})`, the last plateau
    /// wrapping through `2π`.
    pub plateau_signs: Vec<i8>,
}

impl ExtremalFunction {
    /// Index `k` of the plateau containing `u ∈ [0, 2π)`.
    fn plateau(&self, u: f64) -> usize {
        let w = &self.zeros.zeros;
        match w.partition_point(|&z| z <= u) {
            0 => w.len() - 1,
            i => i - 1,
        }
    }

    /// Signed cyclic offset of `u` from the nearest ramp centre, with its index.
    fn nearest_zero(&self, u: f64) -> (usize, f64) {
        let w = &self.zeros.zeros;
        let m = w.len();
        let k = self.plateau(u);
        let next = (k + 1) % m;
        let left = wrap_angle(u - w[k]);
        let right = wrap_angle(w[next] - u);
        if left <= right {
            (k, left)
        } else {
            (next, -right)
        }
    }

    /// `Φ₀(t) = level · sign P⁽ⁿ⁾(−t)`, zero on the zero set.
    pub fn phi0(&self, t: f64) -> f64 {
        let u = wrap_angle(t);
        if self.zeros.zeros.contains(&u) {
            return 0.0;
        }
        self.level * f64::from(self.plateau_signs[self.plateau(u)])
    }

    /// Plateau midpoints; `Φ_δ` takes the values `±level` there.
    pub fn midpoints(&self) -> Vec<f64> {
        self.zeros.midpoints()
    }
}

impl PeriodicFunction for ExtremalFunction {
    fn eval(&self, t: f64) -> f64 {
        let u = wrap_angle(t);
        let (k, d) = self.nearest_zero(u);
        if d.abs() < self.delta {
            // the plateau to the right of w_k carries plateau_signs[k]
            self.level * f64::from(self.plateau_signs[k]) * d / self.delta
        } else {
            self.level * f64::from(self.plateau_signs[self.plateau(u)])
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        let mut b: Vec<f64> = self
            .zeros
            .zeros
            .iter()
            .flat_map(|&w| [wrap_angle(w - self.delta), wrap_angle(w + self.delta)])
            .collect();
        b.sort_by(f64::total_cmp);
        b
    }
}

/// Builds `Φ_δ` from the zeros of `P⁽ⁿ⁾`; plateau signs are read off the
/// kernel at the plateau midpoints.
pub fn build_phi_delta(kernel: &TailKernel, zeros: &ZeroSet, level: f64, delta: f64) -> Result<ExtremalFunction> {
    if !(level >= 0.0 && level.is_finite()) {
        return Err(Error::Domain(format!("level must be finite and nonnegative, got {level}")));
    }
    if zeros.zeros.len() < 2 {
        return Err(Error::Domain("at least two zeros are needed".into()));
    }
    let limit = 0.5 * zeros.min_gap();
    if !(delta > 0.0 && delta < limit) {
        return Err(Error::DeltaTooLarge { delta, limit });
    }
    let reflected = reflect_zero_set(zeros);
    let mids = reflected.midpoints();
    let signs: Vec<i8> = mids
        .iter()
        .map(|&m| if kernel.eval_scaled(wrap_angle(-m)).0 > 0.0 { 1 } else { -1 })
        .collect();
    let w = &reflected.zeros;
    for k in 0..signs.len() {
        if signs[k] == signs[(k + 1) % signs.len()] {
            let next = if k + 1 < w.len() { w[k + 1] } else { w[0] + TWO_PI };
            return Err(Error::NoSignChange {
                index: k,
                lo: mids[k],
                hi: next,
            });
        }
    }
    Ok(ExtremalFunction {
        level,
        zeros: reflected,
        delta,
        plateau_signs: signs,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaChoice {
    pub delta: f64,
    /// A quarter of the smallest zero gap.
    pub gap_limit: f64,
    /// Half of `13π(10π⁴−969)/14 · αr n^r/n²`.
    pub inequality_limit: f64,
}

pub fn choose_delta(kernel: &TailKernel, zeros: &ZeroSet) -> DeltaChoice {
    let p = kernel.params();
    let n = kernel.n() as f64;
    let gap_limit = 0.25 * zeros.min_gap();
    let inequality_limit = 0.5 * delta_constant() * p.alpha_r() * n.powf(p.r()) / (n * n);
    DeltaChoice {
        delta: gap_limit.min(inequality_limit),
        gap_limit,
        inequality_limit,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RnDelta {
    /// `(1/π)∫(Φ_δ − Φ₀)(t) P⁽ⁿ⁾(−t) dt`.
    pub value: f64,
    /// `(1/π) Σ_{k≥n} ψ(k) · 2nδ · level`.
    pub bound: f64,
}

/// `∫ Φ(t) P⁽ⁿ⁾(−t) dt` over `[a, b]` in units of `ψ(n)`, for `|Φ| ≤ 1`.
fn against_reflected<F: Fn(f64) -> f64>(kernel: &TailKernel, phi: &F, a: f64, b: f64, tol: f64) -> Result<f64> {
    let f = |t: f64| phi(t) * kernel.eval_scaled(wrap_angle(-t)).0;
    Ok(integrate_noisy(&f, a, b, tol, kernel.tol(), DEFAULT_MAX_DEPTH)?.value)
}

/// `R_n(δ)` integrated over the `2n` ramps only, each split at its centre.
/// `tol` is relative to `ψ(n) · level`.
pub fn compute_rn_delta(kernel: &TailKernel, ext: &ExtremalFunction, tol: f64) -> Result<RnDelta> {
    let m = ext.zeros.zeros.len();
    let piece_tol = tol / (2 * m) as f64;
    let diff = |t: f64| (ext.eval(t) - ext.phi0(t)) / ext.level.max(f64::MIN_POSITIVE);
    let mut total = 0.0;
    for &w in &ext.zeros.zeros {
        total += against_reflected(kernel, &diff, w - ext.delta, w, piece_tol)?;
        total += against_reflected(kernel, &diff, w, w + ext.delta, piece_tol)?;
    }
    let (sum, sum_err) = kernel.total_scaled();
    let scale = kernel.scale();
    Ok(RnDelta {
        value: total * ext.level * scale / PI,
        bound: (sum + sum_err + kernel.scaled_remainder_bound()) * scale * m as f64 * ext.delta * ext.level / PI,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EqualityReport {
    pub n: u64,
    pub level: f64,
    pub delta: f64,
    /// `(1/π)∫Φ_δ(t) P⁽ⁿ⁾(−t) dt`.
    pub a: f64,
    /// `(1/π)‖P⁽ⁿ⁾‖₁ · level`.
    pub b: f64,
    pub r: f64,
    pub r_bound: f64,
    pub l1_norm: f64,
    /// `|A − B − R| / |B|`.
    pub identity_residual: f64,
    /// `ρ_n(F; 0)` for the function induced by `Φ_δ`, by convolution quadrature.
    pub attained: f64,
    /// `|attained − A| / |B|`.
    pub attainment_residual: f64,
    /// `A/B`.
    pub ratio: f64,
    /// `1 − 2nδ Σ_{k≥n}ψ(k) / (π ‖P⁽ⁿ⁾‖₁)`.
    pub ratio_floor: f64,
}

/// Evaluates `A`, `B` and `R_n(δ)` independently and checks `A = B + R`.
/// `tol` is relative to `ψ(n) · level`.
pub fn verify_equality_case(kernel: &TailKernel, zeros: &ZeroSet, level: f64, delta: f64, tol: f64) -> Result<EqualityReport> {
    let ext = build_phi_delta(kernel, zeros, level, delta)?;
    let scale = kernel.scale();

    let mut cuts: Vec<f64> = ext.breakpoints();
    cuts.extend(&ext.zeros.zeros);
    cuts.push(0.0);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    cuts.push(TWO_PI);
    let piece_tol = tol / cuts.len() as f64;
    let unit = |t: f64| ext.eval(t) / level.max(f64::MIN_POSITIVE);
    let mut a = 0.0;
    for w in cuts.windows(2) {
        a += against_reflected(kernel, &unit, w[0], w[1], piece_tol)?;
    }
    let a = a * level * scale / PI;

    let norm = l1_norm_tail_kernel(kernel, zeros, tol)?;
    let b = norm.l1_norm * level / PI;
    let rn = compute_rn_delta(kernel, &ext, tol)?;
    let attained = convolve_quadrature(kernel, &ext, 0.0, Some(zeros), tol * scale * level.max(f64::MIN_POSITIVE))?;

    let (sum, _) = kernel.total_scaled();
    let denom = b.abs().max(f64::MIN_POSITIVE);
    Ok(EqualityReport {
        n: kernel.n(),
        level,
        delta,
        a,
        b,
        r: rn.value,
        r_bound: rn.bound,
        l1_norm: norm.l1_norm,
        identity_residual: (a - b - rn.value).abs() / denom,
        attained,
        attainment_residual: (attained - a).abs() / denom,
        ratio: a / denom,
        ratio_floor: 1.0 - 2.0 * kernel.n() as f64 * delta * sum * scale / (PI * norm.l1_norm),
    })
}

/// A nonincreasing nonnegative sequence `ε_ν`: explicit values for
/// `ν < values.len()`, then geometric decay by `tail_ratio`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMajorant {
    pub values: Vec<f64>,
    pub tail_ratio: f64,
}

impl ClassMajorant {
    pub fn new(values: Vec<f64>, tail_ratio: f64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain("majorant needs at least one value".into()));
        }
        if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::Domain("majorant values must be finite and nonnegative".into()));
        }
        if values.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::Domain("majorant must be nonincreasing".into()));
        }
        if !(0.0..=1.0).contains(&tail_ratio) {
            return Err(Error::Domain(format!("tail ratio must lie in [0, 1], got {tail_ratio}")));
        }
        Ok(Self { values, tail_ratio })
    }

    /// `ε_ν = q^ν`.
    pub fn geometric(q: f64) -> Result<Self> {
        Self::new(vec![1.0], q)
    }

    pub fn eps(&self, nu: usize) -> f64 {
        match self.values.get(nu) {
            Some(&v) => v,
            None => {
                let last = *self.values.last().unwrap();
                last * self.tail_ratio.powi((nu + 1 - self.values.len()) as i32)
            }
        }
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.values.iter().map(|v| c * v).collect(), self.tail_ratio)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassBracket {
    pub eps_n: f64,
    /// Deviation attained at `x = 0` by the extremal construction at level `ε_n`.
    pub lower: f64,
    /// `(1/π)‖P⁽ⁿ⁾‖₁ ε_n`.
    pub upper: f64,
    pub width: f64,
}

/// Brackets `sup ‖ρ_n(f)‖_C` over the class with majorant `ε`.
pub fn class_supremum(kernel: &TailKernel, zeros: &ZeroSet, eps: &ClassMajorant, delta: f64, tol: f64) -> Result<ClassBracket> {
    let eps_n = eps.eps(kernel.n() as usize);
    let rep = verify_equality_case(kernel, zeros, eps_n, delta, tol)?;
    Ok(ClassBracket {
        eps_n,
        lower: rep.a,
        upper: rep.b,
        width: rep.b - rep.a,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::KernelParams;
    use crate::zeros::{locate_zeros, DEFAULT_ZERO_TOL};

    fn setup(beta: f64, n: u64) -> (TailKernel, ZeroSet) {
        let k = TailKernel::new(KernelParams::new(1.0, 0.5, beta).unwrap(), n, 1e-13).unwrap();
        let z = locate_zeros(&k, DEFAULT_ZERO_TOL).unwrap();
        (k, z)
    }

    #[test]
    fn shape_of_phi_delta() {
        let (k, z) = setup(0.5, 4);
        let d = choose_delta(&k, &z);
        assert!(d.delta < 0.5 * z.min_gap());
        let e = build_phi_delta(&k, &z, 2.0, d.delta).unwrap();
        assert_eq!(e.plateau_signs.len(), 8);
        for (i, &m) in e.midpoints().iter().enumerate() {
            assert_eq!(e.eval(m), 2.0 * f64::from(e.plateau_signs[i]));
        }
        for i in 0..400 {
            let t = TWO_PI * i as f64 / 400.0;
            assert!(e.eval(t).abs() <= 2.0);
            assert!((e.eval(t + TWO_PI) - e.eval(t)).abs() < 1e-12);
            // same sign as P(−t)
            assert!(e.eval(t) * k.eval_scaled(wrap_angle(-t)).0 >= 0.0);
        }
        // continuity across a ramp
        let w = e.zeros.zeros[3];
        for &s in &[-1.0, 1.0] {
            let edge = w + s * e.delta;
            assert!((e.eval(edge - 1e-12) - e.eval(edge + 1e-12)).abs() < 1e-9);
        }
    }

    #[test]
    fn delta_bound_enforced() {
        let (k, z) = setup(0.0, 3);
        let too_big = 0.5 * z.min_gap();
        assert!(matches!(build_phi_delta(&k, &z, 1.0, too_big), Err(Error::DeltaTooLarge { .. })));
    }

    #[test]
    fn identity_and_quadratic_ramp_correction() {
        let (k, z) = setup(0.0, 4);
        let d = choose_delta(&k, &z).delta;
        let r1 = verify_equality_case(&k, &z, 1.0, d, 1e-12).unwrap();
        assert!(r1.identity_residual < 1e-9);
        assert!(r1.attainment_residual < 1e-9);
        assert!(r1.r <= 0.0 && r1.r.abs() <= r1.r_bound);
        assert!(r1.ratio <= 1.0 && r1.ratio >= r1.ratio_floor);
        let r2 = verify_equality_case(&k, &z, 1.0, 0.5 * d, 1e-12).unwrap();
        let q = r1.r / r2.r;
        assert!((q - 4.0).abs() < 0.4, "halving ratio {q}");
    }

    #[test]
    fn majorant_rules() {
        let m = ClassMajorant::new(vec![1.0, 0.5, 0.5], 0.5).unwrap();
        assert_eq!(m.eps(2), 0.5);
        assert_eq!(m.eps(4), 0.125);
        assert!(ClassMajorant::new(vec![1.0, 2.0], 0.5).is_err());
    }
}
