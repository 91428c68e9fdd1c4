//! Exact ground truth: the spectra N_m(x;f) and N_m(x;f,μ), the derived
//! exponential sums and twisted mean values, and the inverse-transform
//! extraction of signed counts.
//!
//! Everything ϑ-dependent is derived from the integer spectrum — the sieve
//! runs once per (x, spec), and the Fourier side is a finite trigonometric
//! polynomial afterwards.

use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::additive::AdditiveSpec;
use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;
use crate::sieve::{enumerate_primes, scan, BlockStats, DEFAULT_SEGMENT};

/// m-indexed exact counts over squarefree n ≤ x, with their μ-signed sums.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumReport {
    pub x: u64,
    pub spec_id: String,
    /// counts[m] = N_m(x;f), the number of squarefree n ≤ x with f(n) = m
    pub counts: Vec<u64>,
    /// signed[m] = N_m(x;f,μ) = Σ_{n ≤ x, f(n) = m} μ(n)
    pub signed: Vec<i64>,
}

/// One sample of the Möbius exponential sum M(x;ϑ).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FourierSample {
    pub theta: f64,
    pub value: Complex64,
}

impl SpectrumReport {
    pub fn from_stats(x: u64, spec_id: String, stats: &BlockStats) -> Self {
        SpectrumReport {
            x,
            spec_id,
            counts: stats.counts.clone(),
            signed: stats.signed.clone(),
        }
    }

    /// Number of occupied m-bins, i.e. max observed f over squarefree n, +1.
    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn squarefree_total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn signed_total(&self) -> i64 {
        self.signed.iter().sum()
    }

    /// Q(x;f): the largest single-value count.
    pub fn q_plain(&self) -> u64 {
        self.counts.iter().copied().max().unwrap_or(0)
    }

    /// Q(x;f,μ): the largest |signed| count.
    pub fn q_mobius(&self) -> u64 {
        self.signed.iter().map(|s| s.unsigned_abs()).max().unwrap_or(0)
    }

    /// M(x;ϑ) = Σ_m signed[m]·e^{2πiϑm} — a trig polynomial of degree < bins.
    pub fn exp_sum(&self, theta: f64) -> Complex64 {
        let mut re = CompensatedSum::new();
        let mut im = CompensatedSum::new();
        for (m, &s) in self.signed.iter().enumerate() {
            let phase = TAU * theta * m as f64;
            let (sin, cos) = phase.sin_cos();
            re.add(s as f64 * cos);
            im.add(s as f64 * sin);
        }
        Complex64::new(re.value(), im.value())
    }

    pub fn sample(&self, theta: f64) -> FourierSample {
        FourierSample {
            theta,
            value: self.exp_sum(theta),
        }
    }

    /// M(x;g) = Σ_m signed[m]·(−ϱ)^m·e^{2πiϑm} for g(n) = μ(n)z^{f(n)},
    /// z = −ϱe^{2πiϑ}. No range check — see `mean_value_g`.
    pub fn twisted_mean(&self, rho: f64, theta: f64) -> Complex64 {
        let mut re = CompensatedSum::new();
        let mut im = CompensatedSum::new();
        let mut radius = 1.0f64;
        for (m, &s) in self.signed.iter().enumerate() {
            let phase = TAU * theta * m as f64;
            let (sin, cos) = phase.sin_cos();
            let w = s as f64 * radius;
            re.add(w * cos);
            im.add(w * sin);
            radius *= -rho;
        }
        Complex64::new(re.value(), im.value())
    }

    /// M(x;r) = Σ_m counts[m]·ϱ^m for r(n) = μ(n)²ϱ^{f(n)}.
    pub fn weighted_count(&self, rho: f64) -> f64 {
        let mut acc = CompensatedSum::new();
        let mut radius = 1.0f64;
        for &c in &self.counts {
            acc.add(c as f64 * radius);
            radius *= rho;
        }
        acc.value()
    }
}

/// Exact spectrum by sequential block reduction (the CLI provides the
/// parallel driver; results are identical).
pub fn spectrum(x: u64, spec: &AdditiveSpec) -> Result<SpectrumReport> {
    let stats = scan(x, spec, DEFAULT_SEGMENT)?;
    Ok(SpectrumReport::from_stats(x, spec.id(), &stats))
}

fn check_rho_window(rho: f64, kappa: f64) -> Result<()> {
    if !(0.0 < kappa && kappa < 1.0) {
        return Err(Error::Parameter(format!("kappa must be in (0,1), got {kappa}")));
    }
    if !(kappa..=1.0 / kappa).contains(&rho) {
        return Err(Error::Parameter(format!(
            "rho = {rho} outside [kappa, 1/kappa] = [{kappa}, {}]",
            1.0 / kappa
        )));
    }
    Ok(())
}

/// M(x;g) with the run's ϱ-window enforced.
pub fn mean_value_g(
    report: &SpectrumReport,
    rho: f64,
    theta: f64,
    kappa: f64,
) -> Result<Complex64> {
    check_rho_window(rho, kappa)?;
    Ok(report.twisted_mean(rho, theta))
}

/// M(x;r) with the run's ϱ-window enforced. Always ≥ 1 (n = 1 contributes 1).
pub fn mean_value_r(report: &SpectrumReport, rho: f64, kappa: f64) -> Result<f64> {
    check_rho_window(rho, kappa)?;
    Ok(report.weighted_count(rho))
}

/// Which prime sum Z(x;·) = Σ_{p ≤ x} ·(p)/p to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZSumKind {
    /// g(p) = μ(p)z^{f(p)}, z = −ϱe^{2πiϑ}
    G,
    /// r(p) = ϱ^{f(p)}
    R,
    /// |g|(p) − g(p)
    AbsGMinusG,
    /// r(p) − g(p)
    RMinusG,
}

/// Direct prime-by-prime evaluation of the requested Z-sum (the closed forms
/// ϱE + F etc. are asserted against this, never substituted for it).
pub fn z_sum(x: u64, spec: &AdditiveSpec, rho: f64, theta: f64, kind: ZSumKind) -> Complex64 {
    let z = -rho * Complex64::from_polar(1.0, TAU * theta);
    let mut re = CompensatedSum::new();
    let mut im = CompensatedSum::new();
    for p in enumerate_primes(x) {
        let recip = 1.0 / p as f64;
        let g = if spec.classify(p) == 1 { -z } else { Complex64::new(-1.0, 0.0) };
        let r = if spec.classify(p) == 1 { rho } else { 1.0 };
        let term = match kind {
            ZSumKind::G => g,
            ZSumKind::R => Complex64::new(r, 0.0),
            ZSumKind::AbsGMinusG => Complex64::new(g.norm(), 0.0) - g,
            ZSumKind::RMinusG => Complex64::new(r, 0.0) - g,
        };
        re.add(term.re * recip);
        im.add(term.im * recip);
    }
    Complex64::new(re.value(), im.value())
}

/// Recover the signed counts from twisted mean values alone: an exact
/// inverse transform of the degree-<D trig polynomial ϑ ↦ M(x;g) sampled at
/// ϑ = j/D, unscaled by ϱ^m per bin afterwards (in log space if ϱ^m would
/// overflow).
pub fn fourier_extract(report: &SpectrumReport, rho: f64) -> Result<Vec<f64>> {
    if rho <= 0.0 {
        return Err(Error::Parameter(format!("rho must be positive, got {rho}")));
    }
    let bins = report.bins();
    if bins == 0 {
        return Err(Error::Domain("empty spectrum".into()));
    }
    let d = bins as f64;
    let samples: Vec<Complex64> = (0..bins)
        .map(|j| report.twisted_mean(rho, j as f64 / d))
        .collect();

    let log_rho = rho.ln();
    let mut out = Vec::with_capacity(bins);
    for m in 0..bins {
        // the coefficient is real for real signed data; keep only Re
        let mut re = CompensatedSum::new();
        for (j, s) in samples.iter().enumerate() {
            let phase = -TAU * (j as f64) * (m as f64) / d;
            let (sin, cos) = phase.sin_cos();
            re.add(s.re * cos - s.im * sin);
        }
        let coeff = re.value() / d;
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        let scale_log = -(m as f64) * log_rho;
        let value = if scale_log.abs() < 300.0 {
            sign * coeff * scale_log.exp()
        } else {
            // ϱ^m beyond float range: rescale in log space
            sign * coeff.signum() * (coeff.abs().ln() + scale_log).exp()
        };
        out.push(value);
    }
    Ok(out)
}
