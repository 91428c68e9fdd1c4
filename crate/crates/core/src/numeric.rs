//! Small numeric helpers shared across modules: compensated accumulation,
//! exact log-factorials, iterated logarithms.

/// Neumaier (Kahan–Babuška) compensated accumulator.
///
/// Prime harmonic sums add ~5·10⁷ terms at desk scale; the compensation keeps
/// the ledger reproducible to well below the 10⁻¹² tolerances asserted by the
/// identity tests.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

/// ln(m!) by exact summation of logs. No special-function dependency; m stays
/// below ~64 at desk scale so the direct sum is both exact enough and cheap.
pub fn log_factorial(m: u64) -> f64 {
    let mut acc = CompensatedSum::new();
    for k in 2..=m {
        acc.add((k as f64).ln());
    }
    acc.value()
}

/// log log x. Requires x > e so the outer log is positive.
pub fn log2x(x: f64) -> f64 {
    x.ln().ln()
}

/// log log log x. Requires x ≥ 16 (the triple log is then defined and positive).
pub fn log3x(x: f64) -> f64 {
    x.ln().ln().ln()
}

/// `n` equispaced points covering [lo, hi] inclusive (n ≥ 2).
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2, "linspace needs at least two points");
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(|i| lo + step * i as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn compensated_recovers_cancelled_terms() {
        // naive left-to-right summation returns 0 here
        let acc: CompensatedSum = [1.0, 1e100, 1.0, -1e100].into_iter().collect();
        assert_eq!(acc.value(), 2.0);

        let mut acc = CompensatedSum::new();
        acc.add(1.0);
        for _ in 0..20 {
            acc.add(1e-17); // individually below ulp(1)/2
        }
        assert!(acc.value() > 1.0);
        assert_relative_eq!(acc.value(), 1.0 + 2e-16, max_relative = 1e-3);
    }

    #[test]
    fn log_factorial_matches_direct() {
        assert_eq!(log_factorial(0), 0.0);
        assert_eq!(log_factorial(1), 0.0);
        let direct: f64 = (2..=20u64).map(|k| k as f64).product::<f64>().ln();
        assert_relative_eq!(log_factorial(20), direct, max_relative = 1e-14);
    }

    #[test]
    fn linspace_endpoints() {
        let g = linspace(-0.5, 0.5, 101);
        assert_eq!(g.len(), 101);
        assert_eq!(g[0], -0.5);
        assert_eq!(g[100], 0.5);
        assert_relative_eq!(g[50], 0.0, epsilon = 1e-15);
    }
}
