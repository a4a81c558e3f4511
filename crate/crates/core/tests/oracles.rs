//! Each computed quantity checked against an independently implemented
//! reference: extended-precision arithmetic, direct scans, a linear program,
//! FFT-sampled dense grids and closed forms.

mod common;

use std::f64::consts::PI;

use common::*;
use leblab::chebyshev::{best_trig_approx, DEFAULT_GAP_TOL};
use leblab::kernel::{tail_sum, TailKernel};
use leblab::norms::{integral_is, l1_norm_tail_kernel, theta_defect};
use leblab::params::Exponent;
use leblab::poisson::{convolve_quadrature, deviation_rho, poisson_integral};
use leblab::sequences::{check_abs_monotone, finite_difference};
use leblab::thresholds::{threshold_n0, threshold_n1, threshold_nstar, DEFAULT_CEILING};
use leblab::trig::FnPeriodic;
use leblab::zeros::{locate_zeros, verify_sign_alternation, DEFAULT_ZERO_TOL};
use leblab::{KernelParams, PeriodicFunction, TrigPolynomial};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn params(alpha: f64, r: f64, beta: f64) -> KernelParams {
    KernelParams::new(alpha, r, beta).unwrap()
}

#[test]
fn n1_matches_doubling_downward_scan() {
    for &alpha in &[1.0, 100.0] {
        let want = doubling_then_downward(|n| n1_lhs_direct(alpha, 0.5, n) <= three_pi_cubed_inv());
        let got = threshold_n1(&params(alpha, 0.5, 0.0), DEFAULT_CEILING);
        assert!(got.exact);
        assert_eq!(got.value, want, "alpha={alpha}");
        let necessary = ((27.0 * PI.powi(3) * alpha * 0.5).powf(2.0)).ceil() as u64;
        assert!(got.value >= necessary);
    }
    // with r = 1/2 the second summand αr/√n alone forces n ≥ (αr (3π)³)², which
    // grows with α, so the larger α has the larger threshold here
    let small = threshold_n1(&params(1.0, 0.5, 0.0), DEFAULT_CEILING).value;
    let large = threshold_n1(&params(100.0, 0.5, 0.0), DEFAULT_CEILING).value;
    assert!(large > small);
}

#[test]
fn n0_and_nstar_match_linear_scan() {
    let p = params(1.0, 0.5, 0.0);
    let first = |f: &dyn Fn(f64) -> bool| (1u64..).find(|&n| f(n as f64)).unwrap();
    // p = 1: 1/(αr n^r) + αr/n^{1−r} ≤ 1/14
    let n0 = first(&|n| 2.0 / n.sqrt() + 0.5 / n.sqrt() <= 1.0 / 14.0);
    assert_eq!(threshold_n0(&p, Exponent::One, DEFAULT_CEILING).value, n0);
    // 1/(αr n^r) + αr/n^{1−r} < 117/(784π²)
    let nstar = first(&|n| (2.0 / n.sqrt() + 0.5 / n.sqrt()) < 117.0 / (784.0 * PI * PI));
    let got = threshold_nstar(&p, DEFAULT_CEILING);
    assert_eq!(got.value, nstar);
    assert!(got.value <= threshold_n1(&p, DEFAULT_CEILING).value);
}

#[test]
fn finite_differences_match_fixed_point() {
    for &(alpha, r, m_max, k_max) in &[(1.0, 0.5, 12usize, 100u64), (0.01, 0.9, 8, 50)] {
        let p = params(alpha, r, 0.0);
        for m in 0..=m_max {
            for k in [1, 2, 7, 31, k_max] {
                let exact = relative_difference(alpha, r, m, k).to_f64() * p.psi(k);
                let got = finite_difference(&p, m, k).unwrap();
                assert!((got - exact).abs() <= 1e-9 * exact.abs(), "m={m} k={k}: {got} vs {exact}");
                let signed = if m % 2 == 0 { exact } else { -exact };
                assert!(signed > 0.0);
            }
        }
        assert!(check_abs_monotone(&p, m_max, k_max).unwrap().pass);
    }
}

#[test]
fn fixed_point_self_check() {
    let e = Fixed::exp(&Fixed::one()).to_f64();
    assert!((e - std::f64::consts::E).abs() < 1e-15);
    let l = Fixed::ln_int(1000).to_f64();
    assert!((l - 1000f64.ln()).abs() < 1e-14);
    assert!((Fixed::pow_int(9, 0.5).to_f64() - 3.0).abs() < 1e-15);
}

#[test]
fn tail_sum_against_extended_precision() {
    // α = 50: the first term dominates
    let p = params(50.0, 0.5, 0.0);
    let s = tail_sum(&p, 1, 1e-15).unwrap();
    let a = Fixed::from_f64(50.0);
    let one = Fixed::pow_int(1, 0.5);
    let mut total = Fixed::zero();
    for k in 1..=10_000u64 {
        let gap = Fixed::pow_int(k, 0.5).sub(&one);
        total = total.add(&Fixed::exp(&Fixed::zero().sub(&a.mul(&gap))));
    }
    let want = total.to_f64();
    assert!((s.scaled - want).abs() < 1e-14 * want);
    assert!(want - 1.0 < 1e-8);
}

#[test]
fn zeros_match_dense_sign_changes() {
    for &(beta, n) in &[(0.0, 8u64), (0.25, 8), (0.99, 4)] {
        let k = TailKernel::new(params(1.0, 0.5, beta), n, 1e-13).unwrap();
        let set = locate_zeros(&k, DEFAULT_ZERO_TOL).unwrap();
        let samples = dense_kernel_samples(1.0, 0.5, beta, n, 14);
        let m = samples.len();
        let h = 2.0 * PI / m as f64;
        let changes: Vec<f64> = (0..m)
            .filter(|&j| samples[j].signum() != samples[(j + 1) % m].signum())
            .map(|j| (j as f64 + 0.5) * h)
            .collect();
        assert_eq!(changes.len(), 2 * n as usize);
        for (z, c) in set.zeros.iter().zip(&changes) {
            assert!((z - c).abs() <= h, "beta={beta}: {z} vs {c}");
        }
        assert!(set.alternation_ok && verify_sign_alternation(&k, &set).ok);
    }
}

#[test]
fn l1_norm_against_fft_grid() {
    for &(alpha, r, beta) in &[(1.0, 0.5, 0.0), (2.0, 0.7, 0.5), (0.5, 0.5, 0.25)] {
        for n in [1u64, 2, 4, 8, 16, 32, 64] {
            let k = TailKernel::new(params(alpha, r, beta), n, 1e-13).unwrap();
            let set = locate_zeros(&k, DEFAULT_ZERO_TOL).unwrap();
            let rep = l1_norm_tail_kernel(&k, &set, 1e-12).unwrap();
            let dense = dense_l1(alpha, r, beta, n, 18);
            let rel = (rep.l1_norm - dense).abs() / dense;
            assert!(rel < 1e-6, "({alpha},{r},{beta}) n={n}: rel {rel:e}");
        }
    }
}

#[test]
fn gamma_star_at_64_against_antiderivative() {
    let k = TailKernel::new(params(1.0, 0.5, 0.0), 64, 1e-13).unwrap();
    let set = locate_zeros(&k, DEFAULT_ZERO_TOL).unwrap();
    let rep = l1_norm_tail_kernel(&k, &set, 1e-13).unwrap();
    let exact = spectral_l1(1.0, 0.5, 0.0, 64, 14);
    assert!(rep.gamma_star.is_finite());
    let rel = (rep.l1_norm - exact).abs() / exact;
    assert!(rel < 1e-8, "rel {rel:e}");
}

#[test]
fn theta_closed_form() {
    for &(alpha, r) in &param_grid() {
        let p = params(alpha, r, 0.0);
        for n in [1u64, 2, 8, 64, 1024] {
            let t = theta_defect(&p, n).unwrap();
            let u = t.upsilon;
            let closed = (1.0 + (1.0 + u.powi(-2)).sqrt()).ln();
            assert!((t.theta - closed).abs() < 1e-12, "u={u}");
        }
    }
    for &u in &[0.1, 1.0, 10.0, 1e3, 1e6] {
        let v = integral_is(Exponent::One, u).unwrap();
        assert!((v - (u + (u * u + 1.0).sqrt()).ln()).abs() < 1e-12);
    }
}

/// Minimax over a grid as a linear program: minimise `h` subject to
/// `|f(x_j) − p(x_j)| ≤ h`.
fn lp_minimax(f: &dyn Fn(f64) -> f64, n: usize, grid: usize) -> (f64, Vec<f64>) {
    use minilp::{ComparisonOp, OptimizationDirection, Problem};
    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let h = lp.add_var(1.0, (0.0, f64::INFINITY));
    let coeffs: Vec<_> = (0..2 * n - 1)
        .map(|_| lp.add_var(0.0, (f64::NEG_INFINITY, f64::INFINITY)))
        .collect();
    for j in 0..grid {
        let x = 2.0 * PI * j as f64 / grid as f64;
        let mut basis = vec![1.0];
        for k in 1..n {
            basis.push((k as f64 * x).cos());
        }
        for k in 1..n {
            basis.push((k as f64 * x).sin());
        }
        let fx = f(x);
        let mut upper: Vec<_> = coeffs.iter().zip(&basis).map(|(&v, &b)| (v, b)).collect();
        upper.push((h, -1.0));
        lp.add_constraint(&upper[..], ComparisonOp::Le, fx);
        let mut lower: Vec<_> = coeffs.iter().zip(&basis).map(|(&v, &b)| (v, b)).collect();
        lower.push((h, 1.0));
        lp.add_constraint(&lower[..], ComparisonOp::Ge, fx);
    }
    let sol = lp.solve().unwrap();
    (sol[h], coeffs.iter().map(|&v| sol[v]).collect())
}

#[test]
fn remez_matches_linear_program() {
    let f = |t: f64| (3.0 * t).cos() + 0.5 * t.cos();
    let (e_lp, c) = lp_minimax(&f, 3, 1 << 12);
    let b = best_trig_approx(&FnPeriodic(f), 3, DEFAULT_GAP_TOL).unwrap();
    assert!((b.error - 1.0).abs() < 1e-9, "{}", b.error);
    // the grid value sits below the true one by O(h²)
    assert!(e_lp <= 1.0 + 1e-12 && 1.0 - e_lp < 1e-5, "{e_lp}");
    assert!((b.poly.cos[0] - 0.5).abs() < 1e-9 && (c[1] - 0.5).abs() < 1e-4);

    // a smooth non-polynomial target: the grid value is a lower bound, short by O(h²)
    let g = |t: f64| (t.sin() * 2.0).exp() + 1.0 / (1.5 + (3.0 * t).cos());
    let (e_lp, _) = lp_minimax(&g, 4, 1 << 12);
    let b = best_trig_approx(&FnPeriodic(g), 4, DEFAULT_GAP_TOL).unwrap();
    assert!(b.certificate.leveled_error <= b.error);
    assert!(e_lp <= b.error * (1.0 + 1e-9) && b.error - e_lp < 1e-4 * b.error, "{} vs {}", b.error, e_lp);
}

#[test]
fn poisson_image_against_convolution() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for &(alpha, r, beta) in &[(1.0, 0.5, 0.3), (2.0, 0.7, 0.0), (0.5, 0.3, 0.99)] {
        let p = params(alpha, r, beta);
        for m in [1usize, 3, 6] {
            let mut phi = TrigPolynomial::zero(m);
            phi.cos[m - 1] = 1.0;
            let pair = poisson_integral(&p, &phi);
            // P⁽¹⁾ is the full kernel
            let k = TailKernel::new(p, 1, 1e-13).unwrap();
            let set = locate_zeros(&k, DEFAULT_ZERO_TOL).unwrap();
            for _ in 0..16 {
                let x = rand::Rng::gen_range(&mut rng, 0.0..2.0 * PI);
                let q = convolve_quadrature(&k, &phi, x, Some(&set), 1e-12).unwrap();
                let want = p.psi(m as u64) * (m as f64 * x - p.phase()).cos();
                assert!((q - want).abs() < 1e-8);
                assert!((pair.eval(x) - want).abs() < 1e-14);
            }
        }
    }
}

#[test]
fn single_harmonic_deviation() {
    let p = params(1.0, 0.5, 0.5);
    let n = 3;
    let k = TailKernel::new(p, n as u64, 1e-13).unwrap();
    let set = locate_zeros(&k, DEFAULT_ZERO_TOL).unwrap();
    for m in [3usize, 5] {
        let mut phi = TrigPolynomial::zero(m);
        phi.cos[m - 1] = 1.0;
        for &x in &[0.2, 2.5, 5.9] {
            let q = convolve_quadrature(&k, &phi, x, Some(&set), 1e-12).unwrap();
            let want = p.psi(m as u64) * (m as f64 * x - p.phase()).cos();
            assert!((deviation_rho(&p, &phi, n, x).unwrap() - want).abs() < 1e-15);
            assert!((q - want).abs() < 1e-8);
        }
    }
    // orthogonality to polynomials of degree < n
    let low = TrigPolynomial::new(0.7, vec![1.0, -0.4], vec![0.2, 0.9]).unwrap();
    assert!(convolve_quadrature(&k, &low, 1.3, Some(&set), 1e-12).unwrap().abs() < 1e-10);
    assert!(low.eval(0.0).is_finite() && PeriodicFunction::breakpoints(&low).is_empty());
}
