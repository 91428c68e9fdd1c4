//! Independent reference implementations used to cross-check the fast paths.
//!
//! Everything here is deliberately naive — trial division, recursive
//! quadrature, dense grids — and shares no code with the sieve, the closed
//! forms, or the grid minimizer it audits. The verify suites run these at
//! runtime, so they live in the library rather than in test code.

use crate::additive::AdditiveSpec;

/// μ(n) by trial-division factorization.
pub fn naive_mu(n: u64) -> i8 {
    assert!(n >= 1);
    let mut n = n;
    let mut sign = 1i8;
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// f(n) = Σ_{p | n} f(p) by trial-division factorization.
pub fn naive_f(n: u64, spec: &AdditiveSpec) -> u8 {
    assert!(n >= 1);
    let mut n = n;
    let mut total = 0u8;
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            total += spec.classify(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        total += spec.classify(n);
    }
    total
}

/// Σ_{n ≤ x} μ(n) via `naive_mu`.
pub fn naive_mertens(x: u64) -> i64 {
    (1..=x).map(|n| naive_mu(n) as i64).sum()
}

/// Adaptive Simpson quadrature of `f` on [a, b] to absolute tolerance `tol`.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        ((b - a) / 6.0 * (fa + 4.0 * fm + fb), m, fm)
    }
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        m: f64,
        fm: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (left, lm, flm) = simpson(f, a, fa, m, fm);
        let (right, rm, frm) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, fa, m, fm, left, lm, flm, 0.5 * tol, depth - 1)
            + recurse(f, m, fm, b, fb, right, rm, frm, 0.5 * tol, depth - 1)
    }
    let fa = f(a);
    let fb = f(b);
    let (whole, m, fm) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, whole, m, fm, tol, 48)
}

/// Mean of the cosine kernel h_ϑ over one period by adaptive quadrature,
/// split at the kink points of the min so each piece is smooth. Checked
/// against the closed form 1 − (2/π)|sin(πϑ)|.
pub fn kernel_mean_quadrature(theta: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let f = |t: f64| crate::halasz::h_theta(theta, t);
    // kinks where cos t = cos(2πϑ − t): t ≡ πϑ (mod π)
    let mut cuts = vec![-PI, PI];
    for k in [-2.0f64, -1.0, 0.0, 1.0, 2.0] {
        let t = PI * theta + k * PI;
        if (-PI..=PI).contains(&t) {
            cuts.push(t);
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut total = 0.0;
    for w in cuts.windows(2) {
        if w[1] > w[0] + 1e-12 {
            total += adaptive_simpson(&f, w[0], w[1], 1e-13);
        }
    }
    total / TAU
}

/// Dense-grid minimizer over [-bound, bound] (no refinement): the oracle the
/// coarse-grid + golden-section path is checked against.
pub fn dense_grid_min(f: &dyn Fn(f64) -> f64, bound: f64, points: usize) -> (f64, f64) {
    assert!(points >= 2);
    let step = 2.0 * bound / (points - 1) as f64;
    let mut best_v = f64::INFINITY;
    let mut best_t = -bound;
    for i in 0..points {
        let t = -bound + step * i as f64;
        let v = f(t);
        if v < best_v {
            best_v = v;
            best_t = t;
        }
    }
    (best_v, best_t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn mu_first_values() {
        let expect: [i8; 20] = [
            1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0, -1, 1, 1, 0, -1, 0, -1, 0,
        ];
        for (i, &e) in expect.iter().enumerate() {
            assert_eq!(naive_mu(i as u64 + 1), e, "mu({})", i + 1);
        }
    }

    #[test]
    fn f_matches_omega_for_all_ones() {
        assert_eq!(naive_f(60, &AdditiveSpec::AllOnes), 3);
        assert_eq!(naive_f(1, &AdditiveSpec::AllOnes), 0);
        assert_eq!(naive_f(1024, &AdditiveSpec::AllOnes), 1);
    }

    #[test]
    fn simpson_known_integrals() {
        let v = adaptive_simpson(&|t: f64| t.cos(), 0.0, std::f64::consts::PI, 1e-12);
        assert_abs_diff_eq!(v, 0.0, epsilon = 1e-10);
        let v = adaptive_simpson(&|t: f64| 1.0 + t.cos(), -std::f64::consts::PI, std::f64::consts::PI, 1e-12);
        assert_abs_diff_eq!(v, 2.0 * std::f64::consts::PI, epsilon = 1e-10);
    }

    #[test]
    fn dense_grid_finds_parabola_min() {
        let (v, t) = dense_grid_min(&|t: f64| (t - 0.3) * (t - 0.3), 1.0, 100_001);
        assert_abs_diff_eq!(t, 0.3, epsilon = 1e-4);
        assert!(v < 1e-8);
    }
}
