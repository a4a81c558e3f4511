//! Best uniform approximation by trigonometric polynomials of degree at most
//! `n − 1`, computed by a multi-point exchange on the circle.
//!
//! The space spanned by `1, cos kx, sin kx (k < n)` is a Haar space of
//! dimension `2n − 1`, so the optimum is characterised by `2n` points where
//! the residual alternates with equal magnitude. Each round solves for the
//! polynomial that levels the residual on the current reference, then moves
//! the reference to the local extrema of the new residual.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::trig::{PeriodicFunction, TrigPolynomial};
use crate::{wrap_angle, Error, Result, TWO_PI};

pub const DEFAULT_GAP_TOL: f64 = 1e-8;
pub const MAX_ROUNDS: usize = 100;
/// Consecutive rounds without growth of the levelled error before giving up.
pub const STALL_ROUNDS: usize = 10;

const GOLDEN: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlternationCertificate {
    /// Strictly increasing abscissae in `[0, 2π)`.
    pub points: Vec<f64>,
    /// Sign of the residual `f − p` at each point.
    pub signs: Vec<i8>,
    /// `min |f − p|` over the points; a lower bound for the best error.
    pub leveled_error: f64,
    /// `max |f − p|` found by the extremum scan.
    pub max_error: f64,
}

impl AlternationCertificate {
    /// `(max_error − leveled_error)/max_error`, zero for an exact fit.
    pub fn gap(&self) -> f64 {
        if self.max_error > 0.0 {
            (self.max_error - self.leveled_error) / self.max_error
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BestApprox {
    pub poly: TrigPolynomial,
    /// Best uniform error `E_n(f)_C`, taken as the achieved `max |f − p|`.
    pub error: f64,
    pub certificate: AlternationCertificate,
    pub rounds: usize,
    /// `(leveled_error, max_error)` after each exchange round.
    pub history: Vec<(f64, f64)>,
}

/// Solves for `p` of degree `< n` and `h` with `f(x_i) − p(x_i) = (−1)^i h`.
fn level(f: &dyn PeriodicFunction, n: usize, points: &[f64]) -> Option<(TrigPolynomial, f64)> {
    let dim = 2 * n;
    let mut a = DMatrix::<f64>::zeros(dim, dim);
    let mut b = DVector::<f64>::zeros(dim);
    for (i, &x) in points.iter().enumerate() {
        a[(i, 0)] = 1.0;
        for k in 1..n {
            let (s, c) = (k as f64 * x).sin_cos();
            a[(i, k)] = c;
            a[(i, n - 1 + k)] = s;
        }
        a[(i, dim - 1)] = if i % 2 == 0 { 1.0 } else { -1.0 };
        b[i] = f.eval(x);
    }
    let sol = a.lu().solve(&b)?;
    let mut p = TrigPolynomial::zero(n - 1);
    p.a0 = 2.0 * sol[0];
    for k in 1..n {
        p.cos[k - 1] = sol[k];
        p.sin[k - 1] = sol[n - 1 + k];
    }
    Some((p, sol[dim - 1]))
}

struct Extremum {
    x: f64,
    r: f64,
}

/// Maximises `sign · r` on `[a, b]` by golden-section search, starting from
/// the best known point `x0`.
fn refine<R: Fn(f64) -> f64>(res: &R, sign: f64, a: f64, b: f64, x0: f64, r0: f64) -> Extremum {
    let (mut a, mut b) = (a, b);
    let mut c = b - GOLDEN * (b - a);
    let mut d = a + GOLDEN * (b - a);
    let mut fc = sign * res(c);
    let mut fd = sign * res(d);
    for _ in 0..80 {
        if b - a < 1e-13 {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - GOLDEN * (b - a);
            fc = sign * res(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + GOLDEN * (b - a);
            fd = sign * res(d);
        }
    }
    let (x, v) = if fc >= fd { (c, fc) } else { (d, fd) };
    if v > sign * r0 {
        Extremum { x, r: sign * v }
    } else {
        Extremum { x: x0, r: r0 }
    }
}

/// One extremum per maximal run of constant residual sign on the cyclic
/// scan grid, refined between the neighbouring grid nodes.
fn extrema<R: Fn(f64) -> f64>(res: &R, grid: &[f64], vals: &[f64]) -> Vec<Extremum> {
    let m = grid.len();
    let nz: Vec<usize> = (0..m).filter(|&i| vals[i] != 0.0).collect();
    if nz.is_empty() {
        return Vec::new();
    }
    let sign = |i: usize| vals[i].signum();
    // start the cyclic walk just after a sign change
    let start = (0..nz.len()).find(|&j| sign(nz[j]) != sign(nz[(j + nz.len() - 1) % nz.len()]));
    let Some(start) = start else {
        return Vec::new();
    };
    let mut out = Vec::new();
    let mut j = 0;
    while j < nz.len() {
        let first = nz[(start + j) % nz.len()];
        let s = sign(first);
        let mut best = first;
        let mut len = 0;
        while j + len < nz.len() && sign(nz[(start + j + len) % nz.len()]) == s {
            let i = nz[(start + j + len) % nz.len()];
            // strict comparison keeps the first maximum in walk order
            if vals[i].abs() > vals[best].abs() {
                best = i;
            }
            len += 1;
        }
        j += len;
        let prev = grid[(best + m - 1) % m] - if best == 0 { TWO_PI } else { 0.0 };
        let next = grid[(best + 1) % m] + if best + 1 == m { TWO_PI } else { 0.0 };
        let e = refine(res, s, prev, next, grid[best], vals[best]);
        out.push(Extremum {
            x: wrap_angle(e.x),
            r: e.r,
        });
    }
    out
}

/// Drops the weakest extremum and merges its two (now equal-signed)
/// neighbours until `target` remain; the global maximum always survives.
fn reduce(mut ext: Vec<Extremum>, target: usize) -> Vec<Extremum> {
    while ext.len() > target && ext.len() >= 3 {
        let m = ext.len();
        let (idx, _) = ext
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (i, e)| if e.r.abs() < acc.1 { (i, e.r.abs()) } else { acc });
        let left = (idx + m - 1) % m;
        let right = (idx + 1) % m;
        let drop = if ext[left].r.abs() >= ext[right].r.abs() { right } else { left };
        let (a, b) = if idx > drop { (idx, drop) } else { (drop, idx) };
        ext.remove(a);
        ext.remove(b);
    }
    ext
}

/// `p` of degree `≤ n − 1` minimising `max |f − p|`, with its alternation
/// certificate. Stops once the relative gap between the levelled and the
/// maximal error drops below `tol`.
pub fn best_trig_approx<F: PeriodicFunction + ?Sized>(f: &F, n: usize, tol: f64) -> Result<BestApprox> {
    if n == 0 {
        return Err(Error::Domain("degree bound n must be at least 1".into()));
    }
    let f: &dyn PeriodicFunction = &f;
    let dim = 2 * n;
    let mut reference: Vec<f64> = (0..dim)
        .map(|j| j as f64 * std::f64::consts::PI / n as f64 + std::f64::consts::PI / (2 * n) as f64)
        .collect();
    let scan = (32 * n).max(1024);
    let base: Vec<f64> = (0..scan).map(|i| TWO_PI * i as f64 / scan as f64).collect();
    let breaks: Vec<f64> = f.breakpoints().into_iter().map(wrap_angle).collect();
    let f_scale = base.iter().map(|&x| f.eval(x).abs()).fold(0.0, f64::max);
    let floor = 1e-13 * f_scale.max(1e-300);

    let mut best_h = 0.0f64;
    let mut stalled = 0;
    let mut gap = f64::INFINITY;
    let mut history = Vec::new();
    for round in 1..=MAX_ROUNDS {
        let (p, h) = level(f, n, &reference).ok_or(Error::ExchangeStall { rounds: round, gap })?;
        let res = |x: f64| f.eval(x) - p.eval(x);

        let mut grid: Vec<f64> = base.iter().chain(&reference).chain(&breaks).copied().collect();
        grid.sort_by(f64::total_cmp);
        grid.dedup();
        let vals: Vec<f64> = grid.iter().map(|&x| res(x)).collect();
        let grid_max = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));

        if grid_max <= floor {
            let signs = reference.iter().map(|&x| res(x).signum() as i8).collect();
            return Ok(BestApprox {
                poly: p,
                error: grid_max,
                certificate: AlternationCertificate {
                    points: reference,
                    signs,
                    leveled_error: 0.0,
                    max_error: grid_max,
                },
                rounds: round,
                history,
            });
        }

        let ext = extrema(&res, &grid, &vals);
        if ext.len() < dim {
            return Err(Error::ExchangeStall { rounds: round, gap });
        }
        let max_error = ext.iter().fold(grid_max, |m, e| m.max(e.r.abs()));
        let mut ext = reduce(ext, dim);
        ext.sort_by(|a, b| a.x.total_cmp(&b.x));
        let leveled = ext.iter().fold(f64::INFINITY, |m, e| m.min(e.r.abs()));
        reference = ext.iter().map(|e| e.x).collect();
        gap = (max_error - leveled) / max_error;
        history.push((leveled, max_error));

        if gap < tol {
            let signs = ext.iter().map(|e| e.r.signum() as i8).collect();
            return Ok(BestApprox {
                poly: p,
                error: max_error,
                certificate: AlternationCertificate {
                    points: reference,
                    signs,
                    leveled_error: leveled,
                    max_error,
                },
                rounds: round,
                history,
            });
        }
        if h.abs() > best_h * (1.0 + 1e-14) {
            best_h = h.abs();
            stalled = 0;
        } else {
            stalled += 1;
            if stalled >= STALL_ROUNDS {
                return Err(Error::ExchangeStall { rounds: round, gap });
            }
        }
    }
    Err(Error::ExchangeStall {
        rounds: MAX_ROUNDS,
        gap,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlternationReport {
    pub ok: bool,
    /// First point whose residual breaks sign or level.
    pub offending_point: Option<usize>,
    /// `min |f − p|` over the points.
    pub min_level: f64,
}

/// Rechecks the certificate: residuals alternate in sign, carry the recorded
/// signs, and each has magnitude at least `leveled_error (1 − rel_tol)`.
pub fn verify_alternation<F: PeriodicFunction + ?Sized>(
    f: &F,
    p: &TrigPolynomial,
    cert: &AlternationCertificate,
    rel_tol: f64,
) -> AlternationReport {
    let res: Vec<f64> = cert.points.iter().map(|&x| f.eval(x) - p.eval(x)).collect();
    let min_level = res.iter().fold(f64::INFINITY, |m, r| m.min(r.abs()));
    let increasing = cert.points.windows(2).all(|w| w[0] < w[1]);
    let bad = (0..res.len()).find(|&i| {
        let s = res[i].signum() as i8;
        let prev = res[(i + res.len() - 1) % res.len()].signum();
        s != cert.signs[i]
            || prev == res[i].signum()
            || res[i].abs() < cert.leveled_error * (1.0 - rel_tol)
    });
    AlternationReport {
        ok: increasing && bad.is_none() && cert.points.len().is_multiple_of(2),
        offending_point: bad,
        min_level,
    }
}
