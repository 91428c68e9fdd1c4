//! Declarative families of strongly additive f with f(p) ∈ {0, 1}, and the
//! prime harmonic sums they induce:
//!
//!   E(x) = Σ_{p ≤ x, f(p)=1} 1/p,   F(x) = Σ_{p ≤ x, f(p)=0} 1/p,
//!
//! together with the Euler-product constant λ_f and growth-hypothesis checks.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::numeric::{log3x, CompensatedSum};
use crate::sieve::enumerate_primes;

/// A strongly additive function determined by its 0/1 values on primes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AdditiveSpec {
    /// f(p) = 1 for all p, i.e. f = ω (number of distinct prime factors).
    AllOnes,
    /// f(p) = 1 iff p > y.
    Threshold { y: u64 },
    /// f(p) = `value_inside` iff p ≡ a (mod q), else the complement.
    Residue { q: u64, a: u64, value_inside: u8 },
    /// f(p) = 0 exactly for the listed primes (sorted, deduplicated).
    ZeroList { primes: Vec<u64> },
}

impl AdditiveSpec {
    /// f(p) for prime p. Pure; only the primality of `p` is assumed.
    #[inline]
    pub fn classify(&self, p: u64) -> u8 {
        match self {
            AdditiveSpec::AllOnes => 1,
            AdditiveSpec::Threshold { y } => u8::from(p > *y),
            AdditiveSpec::Residue { q, a, value_inside } => {
                if p % q == *a {
                    *value_inside
                } else {
                    1 - *value_inside
                }
            }
            AdditiveSpec::ZeroList { primes } => u8::from(primes.binary_search(&p).is_err()),
        }
    }

    /// Canonical spec string (the CLI grammar).
    pub fn id(&self) -> String {
        match self {
            AdditiveSpec::AllOnes => "omega".into(),
            AdditiveSpec::Threshold { y } => format!("threshold:{y}"),
            AdditiveSpec::Residue { q, a, value_inside } => {
                format!("residue:{q}:{a}:{value_inside}")
            }
            AdditiveSpec::ZeroList { primes } => {
                let items: Vec<String> = primes.iter().map(|p| p.to_string()).collect();
                format!("list:{}", items.join(","))
            }
        }
    }

    /// Largest prime with f(p) = 0, when the zero class is finite:
    /// `Some(0)` means the zero class is empty, `None` means it is unbounded.
    pub fn zero_class_ceiling(&self) -> Option<u64> {
        match self {
            AdditiveSpec::AllOnes => Some(0),
            AdditiveSpec::Threshold { y } => Some(*y),
            AdditiveSpec::ZeroList { primes } => Some(primes.last().copied().unwrap_or(0)),
            AdditiveSpec::Residue { q, value_inside, .. } => {
                // q = 1 puts every prime in the residue class
                if *q == 1 {
                    if *value_inside == 0 {
                        None
                    } else {
                        Some(0)
                    }
                } else {
                    None
                }
            }
        }
    }

    /// Parse the CLI grammar:
    /// `omega | threshold:<y> | residue:<q>:<a>:<0|1> | list:<p1,p2,...>`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "omega" {
            return Ok(AdditiveSpec::AllOnes);
        }
        if let Some(rest) = s.strip_prefix("threshold:") {
            let y = rest
                .parse::<u64>()
                .map_err(|_| Error::parse(rest, "expected integer threshold"))?;
            return Ok(AdditiveSpec::Threshold { y });
        }
        if let Some(rest) = s.strip_prefix("residue:") {
            let parts: Vec<&str> = rest.split(':').collect();
            if parts.len() != 3 {
                return Err(Error::parse(rest, "expected residue:<q>:<a>:<0|1>"));
            }
            let q = parts[0]
                .parse::<u64>()
                .map_err(|_| Error::parse(parts[0], "expected integer modulus"))?;
            if q == 0 {
                return Err(Error::parse(parts[0], "modulus must be positive"));
            }
            let a = parts[1]
                .parse::<u64>()
                .map_err(|_| Error::parse(parts[1], "expected integer residue"))?;
            if a >= q {
                return Err(Error::parse(parts[1], "residue must be reduced mod q"));
            }
            let value_inside = match parts[2] {
                "0" => 0,
                "1" => 1,
                other => return Err(Error::parse(other, "inside value must be 0 or 1")),
            };
            return Ok(AdditiveSpec::Residue { q, a, value_inside });
        }
        if let Some(rest) = s.strip_prefix("list:") {
            if rest.is_empty() {
                return Err(Error::parse(rest, "empty prime list"));
            }
            let mut primes = Vec::new();
            for item in rest.split(',') {
                let p = item
                    .parse::<u64>()
                    .map_err(|_| Error::parse(item, "expected integer prime"))?;
                if p < 2 {
                    return Err(Error::parse(item, "list entries must be ≥ 2"));
                }
                primes.push(p);
            }
            primes.sort_unstable();
            primes.dedup();
            return Ok(AdditiveSpec::ZeroList { primes });
        }
        Err(Error::parse(
            s,
            "expected omega | threshold:<y> | residue:<q>:<a>:<0|1> | list:<p1,p2,...>",
        ))
    }
}

impl FromStr for AdditiveSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        AdditiveSpec::parse(s)
    }
}

impl fmt::Display for AdditiveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

/// Both prime harmonic sums in one streaming pass.
#[derive(Clone, Copy, Debug, Default)]
pub struct PrimeSums {
    pub e_sum: f64,
    pub f_sum: f64,
}

/// E(x) and F(x) by direct summation over primes in increasing order,
/// with compensated accumulation.
pub fn prime_sums(x: u64, spec: &AdditiveSpec) -> PrimeSums {
    let mut e = CompensatedSum::new();
    let mut f = CompensatedSum::new();
    for p in enumerate_primes(x) {
        let recip = 1.0 / p as f64;
        if spec.classify(p) == 1 {
            e.add(recip);
        } else {
            f.add(recip);
        }
    }
    PrimeSums {
        e_sum: e.value(),
        f_sum: f.value(),
    }
}

/// E(x) = Σ_{p ≤ x, f(p) ≠ 0} 1/p.
pub fn prime_sum_e(x: u64, spec: &AdditiveSpec) -> f64 {
    prime_sums(x, spec).e_sum
}

/// F(x) = Σ_{p ≤ x} (1 − f(p))/p.
pub fn prime_sum_f(x: u64, spec: &AdditiveSpec) -> f64 {
    prime_sums(x, spec).f_sum
}

/// One ledger row: exact E and F at a checkpoint x.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Checkpoint {
    pub x: u64,
    pub e_sum: f64,
    pub f_sum: f64,
}

/// Checkpointed running prime sums for one spec, on a geometric grid
/// (powers of two from 2¹⁰) plus any user-requested points.
#[derive(Clone, Debug, PartialEq)]
pub struct PrimeSumLedger {
    pub spec_id: String,
    pub checkpoints: Vec<Checkpoint>,
}

impl PrimeSumLedger {
    /// Build the ledger up to `limit` in a single deterministic fold.
    pub fn build(spec: &AdditiveSpec, limit: u64, extra_points: &[u64]) -> Self {
        Self::extend(
            PrimeSumLedger {
                spec_id: spec.id(),
                checkpoints: Vec::new(),
            },
            spec,
            limit,
            extra_points,
            0,
            0.0,
            0.0,
        )
    }

    /// Continue an existing ledger from its last checkpoint (checkpoint
    /// reuse: only primes above the stored x are re-enumerated).
    pub fn resume(self, spec: &AdditiveSpec, limit: u64, extra_points: &[u64]) -> Self {
        let (from_x, e0, f0) = match self.checkpoints.last() {
            Some(c) => (c.x, c.e_sum, c.f_sum),
            None => (0, 0.0, 0.0),
        };
        Self::extend(self, spec, limit, extra_points, from_x, e0, f0)
    }

    fn extend(
        mut ledger: PrimeSumLedger,
        spec: &AdditiveSpec,
        limit: u64,
        extra_points: &[u64],
        from_x: u64,
        e0: f64,
        f0: f64,
    ) -> Self {
        let mut points: Vec<u64> = Vec::new();
        let mut pow = 1024u64;
        while pow <= limit {
            points.push(pow);
            pow = pow.saturating_mul(2);
        }
        points.extend(extra_points.iter().copied().filter(|&x| x <= limit));
        points.push(limit);
        points.sort_unstable();
        points.dedup();
        points.retain(|&x| x > from_x);

        let mut e = CompensatedSum::new();
        let mut f = CompensatedSum::new();
        e.add(e0);
        f.add(f0);
        let mut next = points.iter().copied().peekable();
        for p in enumerate_primes(limit) {
            if p <= from_x {
                continue;
            }
            while let Some(&cp) = next.peek() {
                if p <= cp {
                    break;
                }
                ledger.checkpoints.push(Checkpoint {
                    x: cp,
                    e_sum: e.value(),
                    f_sum: f.value(),
                });
                next.next();
            }
            let recip = 1.0 / p as f64;
            if spec.classify(p) == 1 {
                e.add(recip);
            } else {
                f.add(recip);
            }
        }
        for cp in next {
            ledger.checkpoints.push(Checkpoint {
                x: cp,
                e_sum: e.value(),
                f_sum: f.value(),
            });
        }
        ledger
    }

    /// Exact checkpoint lookup.
    pub fn at(&self, x: u64) -> Option<&Checkpoint> {
        self.checkpoints
            .binary_search_by_key(&x, |c| c.x)
            .ok()
            .map(|i| &self.checkpoints[i])
    }
}

/// Partial Euler product for λ_f with a rigorous tail bound.
#[derive(Clone, Copy, Debug)]
pub struct LambdaF {
    /// Π_{f(p)=0, p ≤ cutoff} ((1 − 1/p)/(1 + 1/p))·e^{2/p}
    pub value: f64,
    /// Bound on |log(tail)|: each omitted factor is exp(O(1/p²)) and
    /// Σ_{p > cutoff} 1/p² < 1/cutoff.
    pub tail_bound: f64,
    /// Defensive flag; Σ 1/p² converges for every valid spec, so this is
    /// always false in practice.
    pub divergent: bool,
}

/// λ_f = Π_{f(p)=0} ((1 − 1/p)/(1 + 1/p))·e^{2/p}, truncated at `cutoff`.
pub fn lambda_f(spec: &AdditiveSpec, cutoff: u64) -> Result<LambdaF> {
    if cutoff < 2 {
        return Err(Error::Parameter(format!(
            "lambda_f cutoff must be ≥ 2, got {cutoff}"
        )));
    }
    let mut log_sum = CompensatedSum::new();
    for p in enumerate_primes(cutoff) {
        if spec.classify(p) == 0 {
            let u = 1.0 / p as f64;
            log_sum.add((1.0 - u).ln() - (1.0 + u).ln() + 2.0 * u);
        }
    }
    let tail_bound = match spec.zero_class_ceiling() {
        Some(ceiling) if cutoff >= ceiling => 0.0,
        _ => 1.0 / cutoff as f64,
    };
    Ok(LambdaF {
        value: log_sum.value().exp(),
        tail_bound,
        divergent: false,
    })
}

/// λ_f·e^{−2F(x)} — the main-term constant of the signed-spectrum prediction
/// evaluated with both factors in log space so the e^{2/p} terms cancel.
pub fn lambda_e2f(spec: &AdditiveSpec, x: u64) -> Result<f64> {
    let lam = lambda_f(spec, x)?;
    let f = prime_sum_f(x, spec);
    Ok((lam.value.ln() - 2.0 * f).exp())
}

/// Caller-supplied ceilings for the growth-hypothesis report. Any field left
/// `None` is reported as data without a pass/fail verdict.
#[derive(Clone, Copy, Debug, Default)]
pub struct HypothesisCeilings {
    /// ceiling for F(x)/log₃x
    pub growth_ratio: Option<f64>,
    /// ceiling for the restricted (log p)/p sum above the iterated-log cut
    pub restricted_sum: Option<f64>,
    /// ceiling for Σ_{p≤x}(1−f(p))log p divided by x/(log₂x)^{max(1,c₀)}
    pub sufficient_ratio: Option<f64>,
}

/// Everything the slow-growth hypotheses ask about, reported as data.
#[derive(Clone, Debug)]
pub struct HypothesisReport {
    pub x: u64,
    pub spec_id: String,
    /// F(x)/log₃x
    pub growth_ratio: f64,
    /// exp{(log x)/(log₂x)^D}
    pub cut: f64,
    /// Σ over cut < p ≤ x of (1 − f(p))·(log p)/p
    pub restricted_sum: f64,
    /// Σ_{p ≤ x} (1 − f(p))·log p
    pub weighted_zero_sum: f64,
    /// x/(log₂x)^{max(1, c₀)}
    pub sufficient_rhs: f64,
    /// weighted_zero_sum / sufficient_rhs
    pub sufficient_ratio: f64,
    pub pass_growth: Option<bool>,
    pub pass_restricted: Option<bool>,
    pub pass_sufficient: Option<bool>,
}

/// Evaluate the slow-growth hypotheses at x: the F/log₃x ratio, the
/// restricted (log p)/p sum above the cut exp{(log x)/(log₂x)^D}, and the
/// sufficient-condition ratio at y = x. Verdicts only where the caller
/// supplied a ceiling.
pub fn check_hypotheses(
    spec: &AdditiveSpec,
    x: u64,
    d_exponent: f64,
    c0: f64,
    ceilings: &HypothesisCeilings,
) -> Result<HypothesisReport> {
    if x < 16 {
        return Err(Error::Domain(format!(
            "iterated logs need x ≥ 16, got {x}"
        )));
    }
    if d_exponent <= 0.0 || c0 <= 0.0 {
        return Err(Error::Parameter(
            "hypothesis constants D and c0 must be positive".into(),
        ));
    }
    let xf = x as f64;
    let log_x = xf.ln();
    let log2 = log_x.ln();
    let cut = (log_x / log2.powf(d_exponent)).exp();

    let mut f_sum = CompensatedSum::new();
    let mut restricted = CompensatedSum::new();
    let mut weighted = CompensatedSum::new();
    for p in enumerate_primes(x) {
        if spec.classify(p) != 0 {
            continue;
        }
        let pf = p as f64;
        f_sum.add(1.0 / pf);
        weighted.add(pf.ln());
        if pf > cut {
            restricted.add(pf.ln() / pf);
        }
    }
    let growth_ratio = f_sum.value() / log3x(xf);
    let sufficient_rhs = xf / log2.powf(c0.max(1.0));
    let sufficient_ratio = weighted.value() / sufficient_rhs;

    Ok(HypothesisReport {
        x,
        spec_id: spec.id(),
        growth_ratio,
        cut,
        restricted_sum: restricted.value(),
        weighted_zero_sum: weighted.value(),
        sufficient_rhs,
        sufficient_ratio,
        pass_growth: ceilings.growth_ratio.map(|c| growth_ratio <= c),
        pass_restricted: ceilings.restricted_sum.map(|c| restricted.value() <= c),
        pass_sufficient: ceilings.sufficient_ratio.map(|c| sufficient_ratio <= c),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn classify_families() {
        assert_eq!(AdditiveSpec::AllOnes.classify(97), 1);
        let t = AdditiveSpec::Threshold { y: 3 };
        assert_eq!(t.classify(2), 0);
        assert_eq!(t.classify(3), 0);
        assert_eq!(t.classify(5), 1);
        let r = AdditiveSpec::Residue { q: 4, a: 1, value_inside: 0 };
        assert_eq!(r.classify(5), 0);
        assert_eq!(r.classify(7), 1);
        let l = AdditiveSpec::ZeroList { primes: vec![2, 7] };
        assert_eq!(l.classify(2), 0);
        assert_eq!(l.classify(3), 1);
        assert_eq!(l.classify(7), 0);
    }

    #[test]
    fn grammar_round_trip() {
        for s in ["omega", "threshold:3", "residue:4:1:0", "list:2,3,7"] {
            let spec = AdditiveSpec::parse(s).unwrap();
            assert_eq!(spec.id(), s);
        }
    }

    #[test]
    fn parse_errors_name_token() {
        let err = AdditiveSpec::parse("threshold:x").unwrap_err();
        assert!(err.to_string().contains('x'), "{err}");
        assert!(AdditiveSpec::parse("residue:4:7:0").is_err());
        assert!(AdditiveSpec::parse("residue:4:1:2").is_err());
        assert!(AdditiveSpec::parse("list:").is_err());
        assert!(AdditiveSpec::parse("gamma").is_err());
    }

    #[test]
    fn prime_sum_examples() {
        assert_abs_diff_eq!(
            prime_sum_e(10, &AdditiveSpec::AllOnes),
            1.176190,
            epsilon = 1e-6
        );
        assert_abs_diff_eq!(
            prime_sum_e(30, &AdditiveSpec::AllOnes),
            1.533439,
            epsilon = 1e-6
        );
        let t3 = AdditiveSpec::Threshold { y: 3 };
        assert_abs_diff_eq!(prime_sum_e(30, &t3), 0.700106, epsilon = 1e-6);
        assert_abs_diff_eq!(prime_sum_f(30, &t3), 0.833333, epsilon = 1e-6);
        assert_eq!(prime_sum_f(100, &AdditiveSpec::AllOnes), 0.0);
    }

    #[test]
    fn f_stabilizes_beyond_threshold() {
        let t = AdditiveSpec::Threshold { y: 1000 };
        let f1 = prime_sum_f(1000, &t);
        let f2 = prime_sum_f(1_000_000, &t);
        assert_eq!(f1, f2);
    }

    #[test]
    fn lambda_examples() {
        let omega = lambda_f(&AdditiveSpec::AllOnes, 100).unwrap();
        assert_eq!(omega.value, 1.0);
        assert_eq!(omega.tail_bound, 0.0);
        assert!(!omega.divergent);

        let t3 = AdditiveSpec::Threshold { y: 3 };
        let lam = lambda_f(&t3, 100).unwrap();
        // two factors: (1/3)e · (1/2)e^{2/3} = (1/6)e^{5/3}
        assert_relative_eq!(lam.value, (5.0f64 / 3.0).exp() / 6.0, max_relative = 1e-12);
        assert_abs_diff_eq!(lam.value, 0.882415, epsilon = 1e-6);
        assert_eq!(lam.tail_bound, 0.0);
    }

    #[test]
    fn lambda_e2f_exact_cancellation() {
        let t3 = AdditiveSpec::Threshold { y: 3 };
        for x in [3u64, 100, 10_000] {
            let v = lambda_e2f(&t3, x).unwrap();
            assert_relative_eq!(v, 1.0 / 6.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn lambda_tail_bound_for_unbounded_zero_class() {
        let r = AdditiveSpec::Residue { q: 4, a: 1, value_inside: 0 };
        let near = lambda_f(&r, 1000).unwrap();
        let far = lambda_f(&r, 1_000_000).unwrap();
        assert_eq!(near.tail_bound, 1e-3);
        assert!(
            (near.value.ln() - far.value.ln()).abs() < near.tail_bound,
            "partial products differ by more than the reported tail bound"
        );
    }

    #[test]
    fn ledger_identity_and_monotonicity() {
        let t3 = AdditiveSpec::Threshold { y: 3 };
        let ledger = PrimeSumLedger::build(&t3, 100_000, &[12_345]);
        let mut prev = (0.0, 0.0);
        for c in &ledger.checkpoints {
            assert!(c.e_sum >= prev.0 && c.f_sum >= prev.1, "monotonicity");
            prev = (c.e_sum, c.f_sum);
            let total: f64 = enumerate_primes(c.x).map(|p| 1.0 / p as f64).sum();
            assert_abs_diff_eq!(c.e_sum + c.f_sum, total, epsilon = 1e-12);
        }
        assert!(ledger.at(12_345).is_some());
        assert!(ledger.at(1024).is_some());
    }

    #[test]
    fn resume_matches_cold_run() {
        let spec = AdditiveSpec::Residue { q: 3, a: 2, value_inside: 0 };
        let cold = PrimeSumLedger::build(&spec, 200_000, &[]);
        // the warm ledger keeps its own intermediate stop at 50 000; every
        // cold checkpoint must reappear with matching sums
        let warm = PrimeSumLedger::build(&spec, 50_000, &[]).resume(&spec, 200_000, &[]);
        for a in &cold.checkpoints {
            let b = warm.at(a.x).expect("missing checkpoint after resume");
            assert_abs_diff_eq!(a.e_sum, b.e_sum, epsilon = 1e-12);
            assert_abs_diff_eq!(a.f_sum, b.f_sum, epsilon = 1e-12);
        }
    }

    #[test]
    fn hypotheses_omega_all_zero() {
        let r = check_hypotheses(
            &AdditiveSpec::AllOnes,
            1_000_000,
            2.0,
            1.0,
            &HypothesisCeilings::default(),
        )
        .unwrap();
        assert_eq!(r.growth_ratio, 0.0);
        assert_eq!(r.restricted_sum, 0.0);
        assert_eq!(r.sufficient_ratio, 0.0);
        assert_eq!(r.pass_growth, None);
    }

    #[test]
    fn hypotheses_threshold_cut() {
        // cut = exp{log(10^6)/(log₂10^6)²} ≈ 7.4 exceeds both zero primes
        let r = check_hypotheses(
            &AdditiveSpec::Threshold { y: 3 },
            1_000_000,
            2.0,
            1.0,
            &HypothesisCeilings::default(),
        )
        .unwrap();
        assert!(r.cut > 3.0 && r.cut < 30.0, "cut = {}", r.cut);
        assert_eq!(r.restricted_sum, 0.0);
        assert_abs_diff_eq!(
            r.weighted_zero_sum,
            2f64.ln() + 3f64.ln(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn hypotheses_residue_growth() {
        let spec = AdditiveSpec::Residue { q: 4, a: 1, value_inside: 0 };
        let small = check_hypotheses(&spec, 10_000, 2.0, 1.0, &HypothesisCeilings::default())
            .unwrap();
        let large = check_hypotheses(&spec, 100_000, 2.0, 1.0, &HypothesisCeilings::default())
            .unwrap();
        // F grows like ½·log₂x, so the ratio to log₃x keeps growing
        assert!(large.growth_ratio > small.growth_ratio);
        let flagged = check_hypotheses(
            &spec,
            100_000,
            2.0,
            1.0,
            &HypothesisCeilings { growth_ratio: Some(1.0), ..Default::default() },
        )
        .unwrap();
        assert_eq!(flagged.pass_growth, Some(false));
    }

    #[test]
    fn hypotheses_domain_error() {
        assert!(matches!(
            check_hypotheses(
                &AdditiveSpec::AllOnes,
                15,
                2.0,
                1.0,
                &HypothesisCeilings::default()
            ),
            Err(Error::Domain(_))
        ));
    }
}
