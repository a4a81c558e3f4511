//! Gauss–Legendre rules and the adaptive bisection driver used for every
//! integral in the crate.

use std::sync::OnceLock;

use crate::{Error, Result};

/// Fixed-order Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes are the roots of `P_order`, found by Newton iteration from the
    /// Chebyshev-like initial guesses.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1);
        let mut nodes = vec![0.0; order];
        let mut weights = vec![0.0; order];
        let m = order.div_ceil(2);
        let nf = order as f64;
        for i in 0..m {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(order, x);
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre_with_derivative(order, x);
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[order - 1 - i] = x;
            weights[i] = w;
            weights[order - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn integrate<F: Fn(f64) -> f64 + ?Sized>(&self, f: &F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let sum: f64 = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum();
        sum * half
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// The order-32 rule shared by all adaptive integrations.
pub fn gl32() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(32))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    /// Sum of the accepted `|halves - whole|` differences.
    pub error: f64,
}

pub const DEFAULT_MAX_DEPTH: usize = 40;

/// Adaptive bisection with the 32-point rule: a panel is accepted once
/// splitting it changes the estimate by at most its share of `tol`.
pub fn integrate<F: Fn(f64) -> f64 + ?Sized>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    max_depth: usize,
) -> Result<QuadResult> {
    integrate_noisy(f, a, b, tol, 0.0, max_depth)
}

/// As [`integrate`], for an integrand known only to within `noise`
/// (absolute, pointwise). Panels are not split below the level where that
/// uncertainty, integrated over the panel, dominates the refinement change.
pub fn integrate_noisy<F: Fn(f64) -> f64 + ?Sized>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    noise: f64,
    max_depth: usize,
) -> Result<QuadResult> {
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            error: 0.0,
        });
    }
    let rule = gl32();
    let whole = rule.integrate(f, a, b);
    recurse(f, rule, a, b, whole, tol, 2.0 * noise, 0, max_depth)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> f64 + ?Sized>(
    f: &F,
    rule: &GaussLegendre,
    a: f64,
    b: f64,
    whole: f64,
    tol: f64,
    noise: f64,
    depth: usize,
    max_depth: usize,
) -> Result<QuadResult> {
    let m = 0.5 * (a + b);
    let left = rule.integrate(f, a, m);
    let right = rule.integrate(f, m, b);
    let halves = left + right;
    let diff = (halves - whole).abs();
    // rounding floors: panel magnitude, pointwise noise, and the slope times
    // the abscissa rounding ε|x| (dominant on narrow panels far from 0)
    let slope_term = 64.0 * f64::EPSILON * a.abs().max(b.abs()) * ((f(b) - f(m)).abs() + (f(m) - f(a)).abs());
    let floor = (16.0 * f64::EPSILON * (left.abs() + right.abs()))
        .max(noise * (b - a))
        .max(slope_term);
    if diff <= tol.max(floor) {
        return Ok(QuadResult {
            value: halves,
            error: diff,
        });
    }
    if depth >= max_depth || m <= a || m >= b {
        return Err(Error::QuadratureStall { a, b, depth });
    }
    let l = recurse(f, rule, a, m, left, 0.5 * tol, noise, depth + 1, max_depth)?;
    let r = recurse(f, rule, m, b, right, 0.5 * tol, noise, depth + 1, max_depth)?;
    Ok(QuadResult {
        value: l.value + r.value,
        error: l.error + r.error,
    })
}

/// Integrates over consecutive breakpoints `points[0] < points[1] < ...`,
/// splitting `tol` evenly across the pieces.
pub fn integrate_pieces<F: Fn(f64) -> f64 + ?Sized>(
    f: &F,
    points: &[f64],
    tol: f64,
) -> Result<QuadResult> {
    let pieces = points.len().saturating_sub(1).max(1) as f64;
    let mut out = QuadResult {
        value: 0.0,
        error: 0.0,
    };
    for w in points.windows(2) {
        let q = integrate(f, w[0], w[1], tol / pieces, DEFAULT_MAX_DEPTH)?;
        out.value += q.value;
        out.error += q.error;
    }
    Ok(out)
}
