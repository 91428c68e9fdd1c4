//! The mean-value bound pipeline made executable: the cosine kernel h_ϑ and
//! its period mean s_ϑ, the τ-minimized prime distance sum, the cut-point
//! constructions, the distance lower bounds with tracked slack, and the
//! condition audit for the effective mean-value machinery.
//!
//! Every inequality that carries an O(1) in the analysis becomes
//! "LHS ≥ RHS − C_slack" here, with C_slack measured and regression-tested —
//! never assumed.

use num_complex::Complex64;
use std::f64::consts::{PI, TAU};
use std::fmt;

use crate::additive::{prime_sums, AdditiveSpec};
use crate::error::{Error, Result};
use crate::numeric::{log2x, log3x, CompensatedSum};
use crate::oracle::naive_mu;
use crate::predictions::concentration_constant;
use crate::sieve::enumerate_primes;

/// h_ϑ(t) = 1 + min{cos t, cos(2πϑ − t)} ∈ [0, 2].
pub fn h_theta(theta: f64, t: f64) -> f64 {
    1.0 + t.cos().min((TAU * theta - t).cos())
}

/// s_ϑ = mean of h_ϑ over a period = 1 − (2/π)|sin(πϑ)|.
///
/// |sin(πϑ)| has period 1, so values outside [−1/2, 1/2] reduce mod 1
/// automatically.
pub fn s_theta(theta: f64) -> f64 {
    1.0 - (2.0 / PI) * (PI * theta).sin().abs()
}

/// β₀(𝔟, A) = 1 − sin(2π𝔟/A)/(2π𝔟/A), continuously extended by 0 at 𝔟 = 0.
pub fn beta_zero(b_frak: f64, a_bound: f64) -> f64 {
    debug_assert!(a_bound > 0.0);
    let u = TAU * b_frak / a_bound;
    if u.abs() < 1e-4 {
        // 1 − sinc(u) = u²/6 − u⁴/120 + …
        u * u / 6.0 * (1.0 - u * u / 20.0)
    } else {
        1.0 - u.sin() / u
    }
}

/// Read-only per-(x, spec) prime cache: 1/p, log p, the f(p) class, and
/// prefix sums of E, F and the f(p) = 1 count. Shared by every ϑ-audit.
pub struct PrimeCache {
    pub x: u64,
    pub spec: AdditiveSpec,
    pub spec_id: String,
    primes: Vec<u64>,
    recip: Vec<f64>,
    logp: Vec<f64>,
    one: Vec<bool>,
    prefix_e: Vec<f64>,
    prefix_f: Vec<f64>,
    prefix_ones: Vec<u64>,
    pub e_sum: f64,
    pub f_sum: f64,
}

impl PrimeCache {
    pub fn build(x: u64, spec: &AdditiveSpec) -> Self {
        let mut primes = Vec::new();
        let mut recip = Vec::new();
        let mut logp = Vec::new();
        let mut one = Vec::new();
        let mut prefix_e = Vec::new();
        let mut prefix_f = Vec::new();
        let mut prefix_ones = Vec::new();
        let mut e = CompensatedSum::new();
        let mut f = CompensatedSum::new();
        let mut ones = 0u64;
        for p in enumerate_primes(x) {
            let r = 1.0 / p as f64;
            let is_one = spec.classify(p) == 1;
            if is_one {
                e.add(r);
                ones += 1;
            } else {
                f.add(r);
            }
            primes.push(p);
            recip.push(r);
            logp.push((p as f64).ln());
            one.push(is_one);
            prefix_e.push(e.value());
            prefix_f.push(f.value());
            prefix_ones.push(ones);
        }
        PrimeCache {
            x,
            spec: spec.clone(),
            spec_id: spec.id(),
            primes,
            recip,
            logp,
            one,
            prefix_e,
            prefix_f,
            prefix_ones,
            e_sum: e.value(),
            f_sum: f.value(),
        }
    }

    pub fn prime_count(&self) -> usize {
        self.primes.len()
    }

    /// Index of the last prime ≤ bound, as a prefix length.
    fn prefix_len(&self, bound: f64) -> usize {
        self.primes.partition_point(|&p| (p as f64) <= bound)
    }

    /// E(b) − E(a) over primes in (a, b].
    pub fn e_between(&self, a: f64, b: f64) -> f64 {
        let (i, j) = (self.prefix_len(a), self.prefix_len(b));
        let hi = if j == 0 { 0.0 } else { self.prefix_e[j - 1] };
        let lo = if i == 0 { 0.0 } else { self.prefix_e[i - 1] };
        hi - lo
    }

    /// F(b) − F(a) over primes in (a, b].
    pub fn f_between(&self, a: f64, b: f64) -> f64 {
        let (i, j) = (self.prefix_len(a), self.prefix_len(b));
        let hi = if j == 0 { 0.0 } else { self.prefix_f[j - 1] };
        let lo = if i == 0 { 0.0 } else { self.prefix_f[i - 1] };
        hi - lo
    }

    fn ones_between(&self, a: f64, b: f64) -> (u64, u64) {
        let (i, j) = (self.prefix_len(a), self.prefix_len(b));
        let hi_ones = if j == 0 { 0 } else { self.prefix_ones[j - 1] };
        let lo_ones = if i == 0 { 0 } else { self.prefix_ones[i - 1] };
        let total = (j - i) as u64;
        (hi_ones - lo_ones, total)
    }

    /// Σ_{p ≤ x} (1 + cos(2πϑf(p) − τ log p))/p, exactly.
    pub fn distance_sum(&self, theta: f64, tau: f64) -> f64 {
        let (sin2t, cos2t) = (TAU * theta).sin_cos();
        let mut acc = CompensatedSum::new();
        for i in 0..self.primes.len() {
            let (sw, cw) = (tau * self.logp[i]).sin_cos();
            let c = if self.one[i] {
                cos2t * cw + sin2t * sw
            } else {
                cw
            };
            acc.add((1.0 + c) * self.recip[i]);
        }
        acc.value()
    }
}

/// τ-grid policy: coarse step `step_factor / log x` on [−T, T], then
/// golden-section refinement to `refine_width` around the best
/// `refine_top` grid points. The summand oscillates through cos(τ log p),
/// so resolution scales with log x.
#[derive(Clone, Copy, Debug)]
pub struct GridPolicy {
    pub step_factor: f64,
    pub refine_width: f64,
    pub refine_top: usize,
}

impl Default for GridPolicy {
    fn default() -> Self {
        GridPolicy {
            step_factor: 0.5,
            refine_width: 1e-6,
            refine_top: 3,
        }
    }
}

impl GridPolicy {
    fn validate(&self) -> Result<()> {
        if self.step_factor <= 0.0 || self.refine_width <= 0.0 || self.refine_top == 0 {
            return Err(Error::Parameter(format!("invalid grid policy {self:?}")));
        }
        Ok(())
    }
}

/// Precomputed coarse-grid prime sums, reusable across every ϑ:
/// the distance sum at (ϑ, τ_j) is E + F + cos(2πϑ)·c1[j] + sin(2πϑ)·s1[j] + c0[j].
pub struct TauTable {
    step: f64,
    taus: Vec<f64>,
    c1: Vec<f64>,
    s1: Vec<f64>,
    c0: Vec<f64>,
}

impl TauTable {
    pub fn build(cache: &PrimeCache, tau_max: f64, policy: &GridPolicy) -> Result<TauTable> {
        policy.validate()?;
        if tau_max < 1.0 {
            return Err(Error::Parameter(format!(
                "tau range must reach at least 1, got {tau_max}"
            )));
        }
        let step = policy.step_factor / (cache.x.max(3) as f64).ln();
        let half = (tau_max / step).floor() as i64;
        let taus: Vec<f64> = (-half..=half).map(|j| j as f64 * step).collect();
        let mut c1 = vec![0.0; taus.len()];
        let mut s1 = vec![0.0; taus.len()];
        let mut c0 = vec![0.0; taus.len()];
        for (j, &tau) in taus.iter().enumerate() {
            let mut a1 = CompensatedSum::new();
            let mut b1 = CompensatedSum::new();
            let mut a0 = CompensatedSum::new();
            for i in 0..cache.primes.len() {
                let (sw, cw) = (tau * cache.logp[i]).sin_cos();
                if cache.one[i] {
                    a1.add(cw * cache.recip[i]);
                    b1.add(sw * cache.recip[i]);
                } else {
                    a0.add(cw * cache.recip[i]);
                }
            }
            c1[j] = a1.value();
            s1[j] = b1.value();
            c0[j] = a0.value();
        }
        Ok(TauTable { step, taus, c1, s1, c0 })
    }

    /// The τ grid this table was built on.
    pub fn taus(&self) -> &[f64] {
        &self.taus
    }
}

/// Which τ-regime produced the minimizer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TauCase {
    LargeTau,
    MidTau,
    SmallTau,
}

impl fmt::Display for TauCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TauCase::LargeTau => "large_tau",
            TauCase::MidTau => "mid_tau",
            TauCase::SmallTau => "small_tau",
        })
    }
}

/// One row of the inequality ledger for the τ-minimized distance sum.
#[derive(Clone, Debug)]
pub struct BoundAudit {
    pub x: u64,
    pub spec_id: String,
    pub theta: f64,
    pub tau_max: f64,
    /// the minimized prime distance sum m(x;ϑ,T)
    pub distance: f64,
    pub argmin_tau: f64,
    /// sharp lower bound (2s_ϑcos²(πϑ)E + 2s_ϑF)/(2 + s_ϑ)
    pub sharp_bound: f64,
    /// relaxed lower bound c·cos²(πϑ)E + c·F
    pub relaxed_bound: f64,
    /// distance − sharp_bound (negative slack is absorbed by the measured C_slack)
    pub slack: f64,
    pub case: TauCase,
}

/// Sharp and relaxed closed-form lower bounds for the minimized distance sum.
#[derive(Clone, Copy, Debug)]
pub struct DistanceBounds {
    pub sharp: f64,
    pub relaxed: f64,
}

/// Pure closed forms in (E, F, ϑ); the relaxed constant c is calibrated so
/// that relaxed ≤ sharp on all of [−1/2, 1/2] (equality at ϑ = ±1/2).
pub fn distance_lower_bound_from(e_sum: f64, f_sum: f64, theta: f64) -> DistanceBounds {
    let s = s_theta(theta);
    let cos2 = (PI * theta).cos().powi(2);
    let c = concentration_constant();
    DistanceBounds {
        sharp: (2.0 * s * cos2 / (2.0 + s)) * e_sum + (2.0 * s / (2.0 + s)) * f_sum,
        relaxed: c * cos2 * e_sum + c * f_sum,
    }
}

/// Streaming convenience wrapper.
pub fn distance_lower_bound(x: u64, spec: &AdditiveSpec, theta: f64) -> DistanceBounds {
    let sums = prime_sums(x, spec);
    distance_lower_bound_from(sums.e_sum, sums.f_sum, theta)
}

/// The mid-regime cut point: log v = (log x)·exp{−(2cos²(πϑ)E + 2F)/(2 + s_ϑ)}.
#[derive(Clone, Copy, Debug)]
pub struct VCut {
    pub v: f64,
    pub log_v: f64,
    /// 2 ≤ v ≤ x; violations are flagged, never clamped
    pub in_bounds: bool,
}

pub fn v_cut_from(x: u64, e_sum: f64, f_sum: f64, theta: f64) -> VCut {
    let s = s_theta(theta);
    let cos2 = (PI * theta).cos().powi(2);
    let log_v = (x as f64).ln() * (-(2.0 * cos2 * e_sum + 2.0 * f_sum) / (2.0 + s)).exp();
    let v = log_v.exp();
    VCut {
        v,
        log_v,
        in_bounds: (2.0..=x as f64).contains(&v),
    }
}

pub fn v_cut(x: u64, spec: &AdditiveSpec, theta: f64) -> VCut {
    let sums = prime_sums(x, spec);
    v_cut_from(x, sums.e_sum, sums.f_sum, theta)
}

fn golden_section(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64, width: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > width {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    if f1 < f2 {
        (f1, x1)
    } else {
        (f2, x2)
    }
}

/// Minimize the prime distance sum over the τ grid and refine, then attach
/// the closed-form lower bounds and the regime tag.
pub fn little_m_with_table(
    cache: &PrimeCache,
    table: &TauTable,
    theta: f64,
    policy: &GridPolicy,
) -> BoundAudit {
    let (sin2t, cos2t) = (TAU * theta).sin_cos();
    let base = cache.e_sum + cache.f_sum;
    let mut order: Vec<usize> = (0..table.taus.len()).collect();
    let value = |j: usize| base + cos2t * table.c1[j] + sin2t * table.s1[j] + table.c0[j];
    order.sort_by(|&a, &b| value(a).total_cmp(&value(b)));

    let mut best_v = value(order[0]);
    let mut best_t = table.taus[order[0]];
    let exact = |tau: f64| cache.distance_sum(theta, tau);
    for &j in order.iter().take(policy.refine_top.min(order.len())) {
        let center = table.taus[j];
        let (v, t) = golden_section(
            &exact,
            center - table.step,
            center + table.step,
            policy.refine_width,
        );
        if v < best_v {
            best_v = v;
            best_t = t;
        }
    }

    let bounds = distance_lower_bound_from(cache.e_sum, cache.f_sum, theta);
    let cut = v_cut_from(cache.x, cache.e_sum, cache.f_sum, theta);
    let case = if best_t.abs() >= 1.0 {
        TauCase::LargeTau
    } else if best_t.abs() > 1.0 / cut.log_v {
        TauCase::MidTau
    } else {
        TauCase::SmallTau
    };
    BoundAudit {
        x: cache.x,
        spec_id: cache.spec_id.clone(),
        theta,
        tau_max: *table.taus.last().unwrap_or(&0.0),
        distance: best_v.max(0.0),
        argmin_tau: best_t,
        sharp_bound: bounds.sharp,
        relaxed_bound: bounds.relaxed,
        slack: best_v.max(0.0) - bounds.sharp,
        case,
    }
}

/// Single-ϑ entry point (builds its own grid table).
pub fn little_m(
    cache: &PrimeCache,
    theta: f64,
    tau_max: f64,
    policy: &GridPolicy,
) -> Result<BoundAudit> {
    let table = TauTable::build(cache, tau_max, policy)?;
    Ok(little_m_with_table(cache, &table, theta, policy))
}

/// Exact kernel tail sum with its closed-form reference value.
#[derive(Clone, Copy, Debug)]
pub struct TailSum {
    /// Σ_{w < p ≤ x} h_ϑ(τ log p)/p
    pub exact: f64,
    /// s_ϑ·log(log x / log w)
    pub reference: f64,
}

impl TailSum {
    /// How far the exact sum fell short of the reference (≤ 0 when the
    /// exact sum dominates); recorded, never assumed.
    pub fn deficit(&self) -> f64 {
        self.reference - self.exact
    }
}

/// Σ_{w < p ≤ x} h_ϑ(τ log p)/p by direct summation (the kernel weighs every
/// prime identically, so no f-classification enters). The closed-form field
/// carries only the leading reference term; the remainder is reported as
/// data (see `TailSum::deficit`).
pub fn tail_sum_h(w: f64, x: u64, theta: f64, tau: f64) -> Result<TailSum> {
    if !(2.0 <= w && w <= x as f64) {
        return Err(Error::Parameter(format!(
            "tail sum needs 2 ≤ w ≤ x, got w = {w}, x = {x}"
        )));
    }
    let mut acc = CompensatedSum::new();
    for p in enumerate_primes(x) {
        let pf = p as f64;
        if pf <= w {
            continue;
        }
        acc.add(h_theta(theta, tau * pf.ln()) / pf);
    }
    let reference = s_theta(theta) * ((x as f64).ln() / w.ln()).ln();
    Ok(TailSum {
        exact: acc.value(),
        reference,
    })
}

/// The envelope x(1 + m)e^{−m} + x/T for the Möbius exponential sum, fed with
/// the minimized (or lower-bounded) distance value m.
pub fn halasz_envelope(x: u64, tau_max: f64, m_value: f64) -> f64 {
    debug_assert!(tau_max >= 1.0 && m_value >= 0.0);
    x as f64 * (1.0 + m_value) * (-m_value).exp() + x as f64 / tau_max
}

/// ∫ over ϑ ∈ [−1/2, 1/2] of the envelope at m = relaxed distance bound,
/// on a uniform grid (trapezoid rule), with T = log x. The ratio of this
/// integral to the signed concentration bound is a fitted ledger constant.
pub fn envelope_integral(x: u64, e_sum: f64, f_sum: f64, points: usize) -> f64 {
    assert!(points >= 3);
    let tau_max = (x as f64).ln();
    let h = 1.0 / (points - 1) as f64;
    let mut acc = CompensatedSum::new();
    for i in 0..points {
        let theta = -0.5 + h * i as f64;
        let m = distance_lower_bound_from(e_sum, f_sum, theta).relaxed;
        let weight = if i == 0 || i == points - 1 { 0.5 } else { 1.0 };
        acc.add(weight * halasz_envelope(x, tau_max, m.max(0.0)));
    }
    acc.value() * h
}

/// Derived parameter pack for the effective mean-value conditions.
#[derive(Clone, Copy, Debug)]
pub struct HalaszParams {
    pub kappa: f64,
    pub c0: f64,
    pub d_exponent: f64,
    pub k_constant: f64,
    /// class bound A (default 2/κ) and prime-power budget B (default 1)
    pub a_bound: f64,
    pub b_bound: f64,
    /// 𝔟 = κ/4 ∈ (0, 1/4]
    pub b_frak: f64,
    /// 𝔥 = 4/κ − 1
    pub h_frak: f64,
    /// β = β₀(𝔟, A)
    pub beta: f64,
    pub delta: f64,
    /// whether δ sits inside (0, β𝔟/3]
    pub delta_in_window: bool,
    /// b = ½·min{1, c₀κ/(4 − κ)}
    pub b_exponent: f64,
}

impl HalaszParams {
    pub fn derive(
        kappa: f64,
        c0: f64,
        d_exponent: f64,
        k_constant: f64,
        delta: Option<f64>,
    ) -> Result<Self> {
        if !(0.0 < kappa && kappa < 1.0) {
            return Err(Error::Parameter(format!("kappa must be in (0,1), got {kappa}")));
        }
        if c0 <= 0.0 || d_exponent <= 0.0 || k_constant <= 0.0 {
            return Err(Error::Parameter(
                "c0, D and K must all be positive".into(),
            ));
        }
        let a_bound = 2.0 / kappa;
        let b_frak = kappa / 4.0;
        let beta = beta_zero(b_frak, a_bound);
        let delta_default = (beta * b_frak / 3.0).min(0.1);
        let delta = delta.unwrap_or(delta_default);
        if delta <= 0.0 {
            return Err(Error::Parameter(format!("delta must be positive, got {delta}")));
        }
        Ok(HalaszParams {
            kappa,
            c0,
            d_exponent,
            k_constant,
            a_bound,
            b_bound: 1.0,
            b_frak,
            h_frak: 4.0 / kappa - 1.0,
            beta,
            delta,
            delta_in_window: delta <= beta * b_frak / 3.0,
            b_exponent: 0.5 * (c0 * kappa / (4.0 - kappa)).min(1.0),
        })
    }

    /// Smallest admissible K: 1/√(4κc).
    pub fn k_floor(&self) -> f64 {
        1.0 / (4.0 * self.kappa * concentration_constant()).sqrt()
    }

    pub fn k_valid(&self) -> bool {
        self.k_constant > self.k_floor()
    }

    /// The small-ϑ window edge K√(log₃x/log₂x). At desk scale this exceeds
    /// 1/2, so the reporting range is clamped and flagged: the small-ϑ
    /// regime then covers all of [−1/2, 1/2].
    pub fn theta_zero(&self, x: u64) -> ThetaZero {
        let xf = x as f64;
        let raw = self.k_constant * (log3x(xf) / log2x(xf)).sqrt();
        ThetaZero {
            raw,
            clamped: raw.min(0.5),
            covers_everything: raw > 0.5,
        }
    }

    /// ε = |ϑ|^{2/δ} + (log₂x)^{−c₀/(𝔥δ)}.
    pub fn epsilon(&self, theta: f64, x: u64) -> f64 {
        theta.abs().powf(2.0 / self.delta)
            + log2x(x as f64).powf(-self.c0 / (self.h_frak * self.delta))
    }

    /// The admissible ε-window (1/√log x, 1/2]; out-of-window values are
    /// flagged, never clamped.
    pub fn epsilon_valid(&self, epsilon: f64, x: u64) -> bool {
        epsilon > 1.0 / (x as f64).ln().sqrt() && epsilon <= 0.5
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ThetaZero {
    pub raw: f64,
    pub clamped: f64,
    pub covers_everything: bool,
}

/// The condition audit for one (x, spec, ϱ, ϑ): each side of every
/// admissibility condition, reported with margins and validity flags.
#[derive(Clone, Debug)]
pub struct ConditionReport {
    pub x: u64,
    pub spec_id: String,
    pub rho: f64,
    pub theta: f64,
    pub epsilon: f64,
    pub epsilon_valid: bool,
    pub delta: f64,
    pub delta_in_window: bool,
    /// Σ_{p ≤ x} (r(p) − ℜe g(p))/p by direct prime summation
    pub distance_lhs: f64,
    /// closed form ϱ(1 − cos 2πϑ)E(x) + 2F(x), the identity the direct sum
    /// is asserted against
    pub distance_closed: f64,
    /// the ϱ-weighted zero-class variant ϱ(1 − cos 2πϑ)E(x) + 2ϱF(x),
    /// reported alongside for comparison
    pub distance_closed_rho_weighted: f64,
    /// quadratic majorant 2ϱπ²ϑ²E(x) + 2F(x) (cosine inequality applied to
    /// the E-term of the closed form)
    pub distance_quadratic: f64,
    /// ½β𝔟·log(1/ε), with ε floored at the smallest positive double for the
    /// logarithm only
    pub distance_ceiling: f64,
    pub distance_ok: bool,
    /// restricted sums of (r(p) − ℜe g(p))/p over (x^ε, y] on a geometric
    /// y-grid — reported as data (the matching ceiling is not pinned)
    pub tail_sums: Vec<(f64, f64)>,
    /// min of r(p) over x^ε < p ≤ x, compared against 𝔟 (weakest reading of
    /// the minimum condition; it holds with large margin at 𝔟 = κ/4)
    pub min_r: f64,
    pub b_frak: f64,
    pub min_ok: bool,
    /// max_p |r(p)| against the class bound 2A
    pub class_prime_max: f64,
    pub class_bound: f64,
    pub class_ok: bool,
    /// Σ over prime powers p^ν ≤ min(x, 10⁶), ν ≥ 2, of |r(p^ν)|·log(p^ν)/p^ν,
    /// evaluated from the definition (μ² vanishes there, so this is 0)
    pub prime_power_sum: f64,
    /// both readings of the small constant 𝔠: 𝔟/A and κ𝔟
    pub c_frak_over_a: f64,
    pub c_frak_kappa: f64,
}

/// Audit the admissibility conditions at (ϱ, ϑ) against the cached prime
/// data. |ϑ| ≤ 1/2 required.
pub fn audit_mean_value_conditions(
    cache: &PrimeCache,
    rho: f64,
    theta: f64,
    params: &HalaszParams,
) -> Result<ConditionReport> {
    if theta.abs() > 0.5 {
        return Err(Error::Parameter(format!("|theta| must be ≤ 1/2, got {theta}")));
    }
    if rho <= 0.0 {
        return Err(Error::Parameter(format!("rho must be positive, got {rho}")));
    }
    let x = cache.x;
    let xf = x as f64;

    // direct route: evaluate r(p) and g(p) from their definitions
    let z = -rho * Complex64::from_polar(1.0, TAU * theta);
    let mut lhs = CompensatedSum::new();
    for i in 0..cache.primes.len() {
        let g = if cache.one[i] { -z } else { Complex64::new(-1.0, 0.0) };
        let r = if cache.one[i] { rho } else { 1.0 };
        lhs.add((r - g.re) * cache.recip[i]);
    }
    let distance_lhs = lhs.value();

    let one_minus_cos = 1.0 - (TAU * theta).cos();
    let distance_closed = rho * one_minus_cos * cache.e_sum + 2.0 * cache.f_sum;
    let distance_closed_rho_weighted =
        rho * one_minus_cos * cache.e_sum + 2.0 * rho * cache.f_sum;
    let distance_quadratic =
        2.0 * rho * PI * PI * theta * theta * cache.e_sum + 2.0 * cache.f_sum;

    let epsilon = params.epsilon(theta, x);
    let epsilon_valid = params.epsilon_valid(epsilon, x);
    let ceiling =
        0.5 * params.beta * params.b_frak * (1.0 / epsilon.max(f64::MIN_POSITIVE)).ln();

    // restricted sums over (x^ε, y] on a geometric y-grid
    let cut = xf.powf(epsilon.min(1.0)).max(2.0);
    let grid_len = 8;
    let mut tail_sums = Vec::with_capacity(grid_len);
    for k in 1..=grid_len {
        let y = cut * (xf / cut).powf(k as f64 / grid_len as f64);
        let sum = rho * one_minus_cos * cache.e_between(cut, y)
            + 2.0 * cache.f_between(cut, y);
        tail_sums.push((y, sum));
    }

    let (ones, total) = cache.ones_between(cut, xf);
    let zeros = total - ones;
    let min_r = if total == 0 {
        1.0f64.min(rho)
    } else {
        let mut m = f64::INFINITY;
        if ones > 0 {
            m = m.min(rho);
        }
        if zeros > 0 {
            m = m.min(1.0);
        }
        m
    };

    let class_prime_max = rho.max(1.0);
    let class_bound = 2.0 * params.a_bound;

    // prime powers carry μ(p^ν)² = 0; verified from the definition
    let cap = x.min(1_000_000);
    let mut pp = CompensatedSum::new();
    for p in enumerate_primes(cap.isqrt()) {
        let f_p = i32::from(cache.spec.classify(p));
        let mut pv = p * p;
        while pv <= cap {
            let weight = (naive_mu(pv) as f64).powi(2) * rho.powi(f_p);
            pp.add(weight * (pv as f64).ln() / pv as f64);
            match pv.checked_mul(p) {
                Some(next) => pv = next,
                None => break,
            }
        }
    }

    Ok(ConditionReport {
        x,
        spec_id: cache.spec_id.clone(),
        rho,
        theta,
        epsilon,
        epsilon_valid,
        delta: params.delta,
        delta_in_window: params.delta_in_window,
        distance_lhs,
        distance_closed,
        distance_closed_rho_weighted,
        distance_quadratic,
        distance_ceiling: ceiling,
        distance_ok: distance_lhs <= ceiling,
        tail_sums,
        min_r,
        b_frak: params.b_frak,
        min_ok: min_r >= params.b_frak,
        class_prime_max,
        class_bound,
        class_ok: class_prime_max <= class_bound,
        prime_power_sum: pp.value(),
        c_frak_over_a: params.b_frak / params.a_bound,
        c_frak_kappa: params.kappa * params.b_frak,
    })
}
