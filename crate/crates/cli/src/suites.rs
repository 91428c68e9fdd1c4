//! The acceptance suites behind `mospec verify`. Each suite evaluates one
//! numbered criterion at its pinned scale and tolerance and emits one
//! pass/fail line per check; exploratory suites report without failing.

use std::fs;
use std::time::Instant;

use mospec_core::{
    concentration_constant, fourier_extract, numeric::linspace, oracle, poisson_term,
    prime_sums, s_theta, AdditiveSpec, GridPolicy, PrimeCache, PrimeSumLedger,
};

use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::parallel::{parallel_audits, parallel_spectrum};
use crate::runner::run_sweep;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Info,
}

#[derive(Clone, Debug)]
pub struct CriterionLine {
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: String,
    pub lines: Vec<CriterionLine>,
    pub elapsed_seconds: f64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.status != Status::Fail)
    }
}

fn line(lines: &mut Vec<CriterionLine>, ok: bool, detail: String) {
    lines.push(CriterionLine {
        status: if ok { Status::Pass } else { Status::Fail },
        detail,
    });
}

fn info(lines: &mut Vec<CriterionLine>, detail: String) {
    lines.push(CriterionLine {
        status: Status::Info,
        detail,
    });
}

/// Registered suites with one-line descriptions (shown on unknown-suite errors).
pub const SUITES: &[(&str, &str)] = &[
    ("exact-identities", "signed spectrum equals alternating counts for f = omega (exact integers)"),
    ("dft-oracle", "inverse-transform extraction matches the sieved signed spectrum"),
    ("mertens-oracle", "blocked-sieve Mertens values against a naive factorization oracle"),
    ("s-theta-quadrature", "closed-form kernel mean against adaptive quadrature"),
    ("slack-ledger", "distance lower-bound slack calibrated at 1e4 stays uniform at 1e5 and 1e6"),
    ("poisson-band", "counts against the Poisson main term across the uniform m-window at 1e7"),
    ("bound-stability", "signed concentration bound ratio stays flat in x for threshold specs"),
    ("ratio-trajectory", "exploratory: signed/plain count ratio trajectory against its limit constant"),
    ("c-constant", "the computed bound constant sits in its pinned interval"),
    ("determinism", "byte-identical sweep CSVs for 1 and 8 workers"),
    ("all", "every suite above, in order"),
];

pub fn run_suite(name: &str, config: &RunConfig) -> Result<SuiteReport> {
    let started = Instant::now();
    let mut lines = Vec::new();
    match name {
        "exact-identities" => exact_identities(config, &mut lines)?,
        "dft-oracle" => dft_oracle(config, &mut lines)?,
        "mertens-oracle" => mertens_oracle(config, &mut lines)?,
        "s-theta-quadrature" => s_theta_quadrature(&mut lines),
        "slack-ledger" => slack_ledger(config, &mut lines)?,
        "poisson-band" => poisson_band(config, &mut lines)?,
        "bound-stability" => bound_stability(config, &mut lines)?,
        "ratio-trajectory" => ratio_trajectory(config, &mut lines)?,
        "c-constant" => c_constant(&mut lines),
        "determinism" => determinism(config, &mut lines)?,
        "all" => {
            let mut all = Vec::new();
            for (suite, _) in SUITES.iter().filter(|(n, _)| *n != "all") {
                let rep = run_suite(suite, config)?;
                all.push(CriterionLine {
                    status: Status::Info,
                    detail: format!("--- suite {suite} ({:.1}s) ---", rep.elapsed_seconds),
                });
                all.extend(rep.lines);
            }
            lines = all;
        }
        other => {
            let known: Vec<&str> = SUITES.iter().map(|(n, _)| *n).collect();
            return Err(CliError::Usage(format!(
                "unknown suite `{other}`; available: {}",
                known.join(", ")
            )));
        }
    }
    Ok(SuiteReport {
        name: name.to_string(),
        lines,
        elapsed_seconds: started.elapsed().as_secs_f64(),
    })
}

pub fn print_report(report: &SuiteReport) -> bool {
    for l in &report.lines {
        let tag = match l.status {
            Status::Pass => "[PASS]",
            Status::Fail => "[FAIL]",
            Status::Info => "[info]",
        };
        println!("{tag} {}", l.detail);
    }
    println!(
        "suite {}: {} in {:.1}s",
        report.name,
        if report.passed() { "ok" } else { "FAILED" },
        report.elapsed_seconds
    );
    report.passed()
}

/// Criterion 1: exact sign identity N_m(x;f,μ) = (−1)^m·N_m(x;f) for f = ω.
fn exact_identities(config: &RunConfig, lines: &mut Vec<CriterionLine>) -> Result<()> {
    let x = config.x_list.last().copied().unwrap_or(1_000_000);
    let started = Instant::now();
    let report = parallel_spectrum(x, &AdditiveSpec::AllOnes, config.segment_size, config.workers)?;
    let mut bad = 0u64;
    for (m, &c) in report.counts.iter().enumerate() {
        let expected = if m % 2 == 0 { c as i64 } else { -(c as i64) };
        if report.signed[m] != expected {
            bad += 1;
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    line(
        lines,
        bad == 0,
        format!(
            "criterion 1: sign identity at x={x}: {} of {} bins exact",
            report.bins() as u64 - bad,
            report.bins()
        ),
    );
    line(
        lines,
        elapsed < 30.0,
        format!("criterion 1: runtime {elapsed:.2}s < 30s"),
    );
    Ok(())
}

/// Criterion 2: the inverse-transform extraction reproduces the sieved
/// signed spectrum for every pinned (x, spec, ϱ).
fn dft_oracle(config: &RunConfig, lines: &mut Vec<CriterionLine>) -> Result<()> {
    let xs: Vec<u64> = if config.x_list.is_empty() {
        vec![1_000, 10_000, 100_000]
    } else {
        config.x_list.clone()
    };
    let specs = [
        AdditiveSpec::AllOnes,
        AdditiveSpec::Threshold { y: 3 },
        AdditiveSpec::Residue { q: 4, a: 1, value_inside: 0 },
    ];
    let mut worst: f64 = 0.0;
    let mut ok = true;
    for &x in &xs {
        for spec in &specs {
            let report = parallel_spectrum(x, spec, config.segment_size, config.workers)?;
            let scale = (report.q_mobius() as f64).max(1.0);
            for rho in [0.5, 1.0, 2.0] {
                let out = fourier_extract(&report, rho)?;
                for (m, &expected) in report.signed.iter().enumerate() {
                    let rel = (out[m] - expected as f64).abs() / scale;
                    worst = worst.max(rel);
                    ok &= rel < 1e-4;
                }
            }
        }
    }
    line(
        lines,
        ok,
        format!(
            "criterion 2: max |extracted − sieved| = {worst:.3e}·max|signed| < 1e-4 over x={xs:?}, 3 specs, rho in {{1/2,1,2}}"
        ),
    );
    Ok(())
}

/// Criterion 3: Mertens values against the naive factorization oracle
/// (oracle built first, values derived at runtime, not asserted from memory).
fn mertens_oracle(config: &RunConfig, lines: &mut Vec<CriterionLine>) -> Result<()> {
    let started = Instant::now();
    let mut ok = true;
    let mut details = Vec::new();
    for &x in &[10u64, 100, 1_000, 10_000] {
        let expect = oracle::naive_mertens(x);
        let got = parallel_spectrum(x, &AdditiveSpec::AllOnes, config.segment_size, 1)?
            .signed_total();
        ok &= got == expect;
        details.push(format!("M({x})={got}"));
        if x == 10 {
            ok &= got == -1;
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    line(
        lines,
        ok,
        format!("criterion 3: sieve matches factorization oracle: {}", details.join(" ")),
    );
    line(
        lines,
        elapsed < 5.0,
        format!("criterion 3: runtime {elapsed:.2}s < 5s"),
    );
    Ok(())
}

/// Criterion 4: |quadrature mean of h_ϑ − closed form| < 1e-9 on 101 points.
fn s_theta_quadrature(lines: &mut Vec<CriterionLine>) {
    let mut worst: f64 = 0.0;
    for theta in linspace(-0.5, 0.5, 101) {
        let numeric = oracle::kernel_mean_quadrature(theta);
        worst = worst.max((numeric - s_theta(theta)).abs());
    }
    line(
        lines,
        worst < 1e-9,
        format!("criterion 4: max |quadrature − closed form| = {worst:.3e} < 1e-9 on 101 thetas"),
    );
}

/// Criterion 5: slack calibrated at 1e4 over the ϑ×spec grid stays within
/// +2 at 1e5 and 1e6.
fn slack_ledger(config: &RunConfig, lines: &mut Vec<CriterionLine>) -> Result<()> {
    let started = Instant::now();
    let specs = [
        AdditiveSpec::AllOnes,
        AdditiveSpec::Threshold { y: 3 },
        AdditiveSpec::Threshold { y: 100 },
    ];
    let thetas = linspace(-0.5, 0.5, 101);
    let policy = GridPolicy::default();
    let mut slack_at = Vec::new();
    for &x in &[10_000u64, 100_000, 1_000_000] {
        let mut worst = f64::NEG_INFINITY;
        for spec in &specs {
            let cache = PrimeCache::build(x, spec);
            let audits =
                parallel_audits(&cache, &thetas, (x as f64).ln(), &policy, config.workers)?;
            for a in &audits {
                worst = worst.max(a.sharp_bound - a.distance);
            }
        }
        slack_at.push((x, worst));
        info(lines, format!("criterion 5: C_slack({x}) = {worst:.4}"));
    }
    let calibrated = slack_at[0].1;
    for &(x, c) in &slack_at[1..] {
        line(
            lines,
            c <= calibrated + 2.0,
            format!(
                "criterion 5: C_slack({x}) = {c:.4} ≤ C_slack(10000) + 2 = {:.4}",
                calibrated + 2.0
            ),
        );
    }
    let elapsed = started.elapsed().as_secs_f64();
    line(
        lines,
        elapsed < 600.0,
        format!("criterion 5: runtime {elapsed:.1}s < 600s"),
    );
    Ok(())
}

/// Criterion 6: counts[m]/poisson_term ∈ [0.2, 5] for every integer m in
/// [κE, E/κ] at x = 10⁷, κ = 1/2.
fn poisson_band(config: &RunConfig, lines: &mut Vec<CriterionLine>) -> Result<()> {
    let x = 10_000_000u64;
    let kappa = 0.5;
    let spec = AdditiveSpec::AllOnes;
    let report = parallel_spectrum(x, &spec, config.segment_size, config.workers)?;
    let e_sum = prime_sums(x, &spec).e_sum;
    let lo = (kappa * e_sum).ceil() as u64;
    let hi = (e_sum / kappa).floor() as u64;
    let mut all_ok = true;
    for m in lo..=hi {
        let count = report.counts.get(m as usize).copied().unwrap_or(0);
        let poisson = poisson_term(x, e_sum, m);
        let ratio = count as f64 / poisson;
        let ok = (0.2..=5.0).contains(&ratio);
        all_ok &= ok;
        info(
            lines,
            format!("criterion 6: m={m}: N_m={count} poisson={poisson:.1} ratio={ratio:.4}"),
        );
    }
    line(
        lines,
        all_ok,
        format!(
            "criterion 6: counts/poisson in [0.2, 5] for every m in [{lo},{hi}] (E={e_sum:.6}) at x={x}"
        ),
    );
    Ok(())
}

/// Criterion 7: q_mobius·√(1+E)·e^{cF}/(x(1+F)) stays within 1.5× its value
/// at x = 10⁵ for threshold specs.
fn bound_stability(config: &RunConfig, lines: &mut Vec<CriterionLine>) -> Result<()> {
    let c = concentration_constant();
    let xs = [100_000u64, 1_000_000, 10_000_000];
    for y in [3u64, 10, 100] {
        let spec = AdditiveSpec::Threshold { y };
        let ledger = PrimeSumLedger::build(&spec, xs[2], &xs);
        let mut ratios = Vec::new();
        for &x in &xs {
            let report = parallel_spectrum(x, &spec, config.segment_size, config.workers)?;
            let cp = ledger.at(x).expect("checkpointed");
            let ratio = report.q_mobius() as f64 * (1.0 + cp.e_sum).sqrt()
                * (c * cp.f_sum).exp()
                / (x as f64 * (1.0 + cp.f_sum));
            ratios.push((x, ratio));
        }
        let base = ratios[0].1;
        let ok = ratios.iter().all(|&(_, r)| r <= 1.5 * base);
        line(
            lines,
            ok,
            format!(
                "criterion 7: threshold:{y}: ratios {} all ≤ 1.5× ratio(1e5) = {:.5}",
                ratios
                    .iter()
                    .map(|(x, r)| format!("{x}:{r:.5}"))
                    .collect::<Vec<_>>()
                    .join(" "),
                1.5 * base
            ),
        );
    }
    Ok(())
}

/// Criterion 8 (exploratory, reported not failing): the signed/plain ratio
/// at m = round(E(x)) against its limit constant λ_f·e^{−2F} = 1/6.
fn ratio_trajectory(config: &RunConfig, lines: &mut Vec<CriterionLine>) -> Result<()> {
    let spec = AdditiveSpec::Threshold { y: 3 };
    let xs = [100_000u64, 1_000_000, 10_000_000, 100_000_000];
    let target = 1.0 / 6.0;
    let ledger = PrimeSumLedger::build(&spec, xs[3], &xs);
    let mut gaps = Vec::new();
    for &x in &xs {
        let report = parallel_spectrum(x, &spec, config.segment_size, config.workers)?;
        let cp = ledger.at(x).expect("checkpointed");
        let m = cp.e_sum.round() as usize;
        let count = report.counts.get(m).copied().unwrap_or(0);
        let signed = report.signed.get(m).copied().unwrap_or(0);
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        let ratio = signed as f64 / (sign * count as f64);
        let gap = (ratio - target).abs();
        gaps.push(gap);
        let err_scale = (x as f64).ln().ln().powf(-1.0 / 14.0);
        info(
            lines,
            format!(
                "criterion 8: x={x}: m={m} ratio={ratio:.6} target={target:.6} gap={gap:.6} err_scale={err_scale:.3}"
            ),
        );
    }
    let shrinking = gaps.windows(2).all(|w| w[1] <= w[0]);
    info(
        lines,
        format!(
            "criterion 8: gap trajectory {} (error scale ≈ 0.93 even at 1e8; convergence not asserted)",
            if shrinking { "shrinks monotonically" } else { "does not shrink monotonically" }
        ),
    );
    Ok(())
}

/// Criterion 9: the computed constant sits in [0.307508, 0.307510].
fn c_constant(lines: &mut Vec<CriterionLine>) {
    let c = concentration_constant();
    line(
        lines,
        (0.307508..=0.307510).contains(&c),
        format!("criterion 9: c = {c:.9} in [0.307508, 0.307510]"),
    );
}

/// Criterion 10: identical sweep output for 1 and 8 workers, byte for byte.
fn determinism(config: &RunConfig, lines: &mut Vec<CriterionLine>) -> Result<()> {
    let mut base = RunConfig {
        x_list: vec![1_000_000],
        specs: vec![AdditiveSpec::AllOnes, AdditiveSpec::Threshold { y: 3 }],
        theta_steps: 21,
        ..config.clone()
    };
    base.checkpoint_dir = None;

    let mut outputs = Vec::new();
    for workers in [1usize, 8] {
        let mut cfg = base.clone();
        cfg.workers = workers;
        cfg.out_dir = config.out_dir.join(format!("determinism_w{workers}"));
        run_sweep(&cfg)?;
        let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(&cfg.out_dir)
            .map_err(CliError::io(&cfg.out_dir))?
            .filter_map(|e| e.ok())
            .filter(|e| e.path().extension().is_some_and(|x| x == "csv"))
            .map(|e| {
                let bytes = fs::read(e.path()).unwrap_or_default();
                (e.file_name().to_string_lossy().into_owned(), bytes)
            })
            .collect();
        files.sort();
        outputs.push(files);
    }
    let same_names = outputs[0].len() == outputs[1].len()
        && outputs[0]
            .iter()
            .zip(&outputs[1])
            .all(|(a, b)| a.0 == b.0);
    let identical = same_names
        && outputs[0]
            .iter()
            .zip(&outputs[1])
            .all(|(a, b)| a.1 == b.1);
    line(
        lines,
        identical,
        format!(
            "criterion 10: {} CSV files byte-identical between 1 and 8 workers",
            outputs[0].len()
        ),
    );
    Ok(())
}
