//! Orchestration of a full sweep: one sieve pass per (x, spec), then the
//! spectrum, prediction, audit and condition reports, a JSON summary with
//! the fitted ledger constants, and optional prime-sum checkpoint reuse.

use std::fs;
use std::path::Path;
use std::time::Instant;

use mospec_core::{
    envelope_integral, lambda_f, mobius_concentration_bound, numeric::linspace, prediction_rows,
    prime_sums, AdditiveSpec, HalaszParams, PrimeCache, PrimeSumLedger,
};

use crate::checkpoint::{ledger_file_name, read_ledger, write_ledger};
use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::parallel::{parallel_audits, parallel_conditions, parallel_spectrum};
use crate::report::{
    build_version, write_audits_csv, write_conditions_csv, write_predictions_csv,
    write_spectrum_csv, write_summary_json, CaseSummary, InvariantChecks, RunSummary,
};

/// E(x), F(x) for one case: from the ledger when the point is checkpointed,
/// streaming otherwise.
fn sums_at(ledger: &PrimeSumLedger, x: u64, spec: &AdditiveSpec) -> (f64, f64) {
    match ledger.at(x) {
        Some(c) => (c.e_sum, c.f_sum),
        None => {
            let s = prime_sums(x, spec);
            (s.e_sum, s.f_sum)
        }
    }
}

fn ledger_for(spec: &AdditiveSpec, config: &RunConfig) -> Result<PrimeSumLedger> {
    let max_x = *config.x_list.last().expect("validated non-empty");
    match &config.checkpoint_dir {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(CliError::io(dir))?;
            let path = dir.join(ledger_file_name(spec));
            let ledger = if path.exists() {
                read_ledger(&path, spec)?.resume(spec, max_x, &config.x_list)
            } else {
                PrimeSumLedger::build(spec, max_x, &config.x_list)
            };
            write_ledger(&path, &ledger)?;
            Ok(ledger)
        }
        None => Ok(PrimeSumLedger::build(spec, max_x, &config.x_list)),
    }
}

/// One (x, spec) case: sieve once, emit every report, return the summary.
fn run_case(
    x: u64,
    spec: &AdditiveSpec,
    ledger: &PrimeSumLedger,
    config: &RunConfig,
    out_dir: &Path,
) -> Result<CaseSummary> {
    let report = parallel_spectrum(x, spec, config.segment_size, config.workers)?;
    let (e_sum, f_sum) = sums_at(ledger, x, spec);

    write_spectrum_csv(out_dir, &report)?;
    if e_sum > 0.0 {
        let rows = prediction_rows(&report, spec, config.kappa, config.c0)?;
        write_predictions_csv(out_dir, &rows)?;
    }

    let cache = PrimeCache::build(x, spec);
    let thetas = linspace(-0.5, 0.5, config.theta_steps);
    let tau_max = (x as f64).ln();
    let audits = parallel_audits(&cache, &thetas, tau_max, &config.tau_policy, config.workers)?;
    write_audits_csv(out_dir, &audits)?;

    let params = HalaszParams::derive(
        config.kappa,
        config.c0,
        config.d_exponent,
        config.k_constant,
        config.delta,
    )
    .map_err(CliError::from)?;
    let conditions = parallel_conditions(&cache, &thetas, 1.0, &params, config.workers)?;
    write_conditions_csv(out_dir, &conditions)?;

    let lam = lambda_f(spec, x)?;
    let lambda_e2f = (lam.value.ln() - 2.0 * f_sum).exp();
    let c_slack = audits
        .iter()
        .map(|a| a.sharp_bound - a.distance)
        .fold(f64::NEG_INFINITY, f64::max);
    let envelope_ratio =
        envelope_integral(x, e_sum, f_sum, 2001) / mobius_concentration_bound(x, e_sum, f_sum);

    let mertens = report.signed_total();
    Ok(CaseSummary {
        x,
        spec: spec.id(),
        mertens,
        squarefree: report.squarefree_total(),
        bins: report.bins(),
        q_plain: report.q_plain(),
        q_mobius: report.q_mobius(),
        e_sum,
        f_sum,
        lambda_f: lam.value,
        lambda_tail_bound: lam.tail_bound,
        lambda_e2f,
        c_slack,
        envelope_ratio,
        invariants: InvariantChecks {
            signed_total_equals_mertens: report.signed_total() == mertens,
            q_mobius_le_q_plain: report.q_mobius() <= report.q_plain(),
            relaxed_le_sharp: audits
                .iter()
                .all(|a| a.relaxed_bound <= a.sharp_bound + 1e-9),
            epsilon_window_valid_anywhere: conditions.iter().any(|c| c.epsilon_valid),
        },
    })
}

/// Full sweep over config.x_list × config.specs.
pub fn run_sweep(config: &RunConfig) -> Result<RunSummary> {
    config.validate_for_sweep()?;
    fs::create_dir_all(&config.out_dir).map_err(CliError::io(&config.out_dir))?;
    let started = Instant::now();

    let mut results = Vec::new();
    for spec in &config.specs {
        let ledger = ledger_for(spec, config)?;
        for &x in &config.x_list {
            let case = run_case(x, spec, &ledger, config, &config.out_dir)?;
            println!(
                "x={} spec={} mertens={} squarefree={} q_plain={} q_mobius={} c_slack={:.4}",
                case.x,
                case.spec,
                case.mertens,
                case.squarefree,
                case.q_plain,
                case.q_mobius,
                case.c_slack
            );
            results.push(case);
        }
    }

    let summary = RunSummary {
        version: build_version(),
        config: config.echo(),
        results,
        elapsed_seconds: started.elapsed().as_secs_f64(),
    };
    write_summary_json(&config.out_dir, &summary)?;
    Ok(summary)
}

/// `sieve` subcommand: ground-truth pass, console summary, optional
/// checkpoint refresh.
pub fn run_sieve(config: &RunConfig) -> Result<()> {
    config.validate_for_sweep()?;
    for spec in &config.specs {
        if config.checkpoint_dir.is_some() {
            ledger_for(spec, config)?;
        }
        for &x in &config.x_list {
            let started = Instant::now();
            let report = parallel_spectrum(x, spec, config.segment_size, config.workers)?;
            println!(
                "x={} spec={} mertens={} squarefree={} max_f={} elapsed={:.3}s",
                x,
                spec.id(),
                report.signed_total(),
                report.squarefree_total(),
                report.bins().saturating_sub(1),
                started.elapsed().as_secs_f64()
            );
        }
    }
    Ok(())
}

/// `spectrum` subcommand: emit the spectrum CSVs.
pub fn run_spectrum(config: &RunConfig) -> Result<()> {
    config.validate_for_sweep()?;
    fs::create_dir_all(&config.out_dir).map_err(CliError::io(&config.out_dir))?;
    for spec in &config.specs {
        for &x in &config.x_list {
            let report = parallel_spectrum(x, spec, config.segment_size, config.workers)?;
            let path = write_spectrum_csv(&config.out_dir, &report)?;
            println!(
                "x={} spec={} bins={} q_plain={} q_mobius={} -> {}",
                x,
                spec.id(),
                report.bins(),
                report.q_plain(),
                report.q_mobius(),
                path.display()
            );
        }
    }
    Ok(())
}

/// `predict` subcommand: emit the prediction CSVs.
pub fn run_predict(config: &RunConfig) -> Result<()> {
    config.validate_for_sweep()?;
    fs::create_dir_all(&config.out_dir).map_err(CliError::io(&config.out_dir))?;
    for spec in &config.specs {
        for &x in &config.x_list {
            let report = parallel_spectrum(x, spec, config.segment_size, config.workers)?;
            let rows = prediction_rows(&report, spec, config.kappa, config.c0)?;
            let path = write_predictions_csv(&config.out_dir, &rows)?;
            println!("x={} spec={} rows={} -> {}", x, spec.id(), rows.len(), path.display());
        }
    }
    Ok(())
}

/// `audit` subcommand: ϑ-grid bound audits.
pub fn run_audit(config: &RunConfig) -> Result<()> {
    config.validate_for_sweep()?;
    fs::create_dir_all(&config.out_dir).map_err(CliError::io(&config.out_dir))?;
    for spec in &config.specs {
        for &x in &config.x_list {
            let cache = PrimeCache::build(x, spec);
            let thetas = linspace(-0.5, 0.5, config.theta_steps);
            let audits = parallel_audits(
                &cache,
                &thetas,
                (x as f64).ln(),
                &config.tau_policy,
                config.workers,
            )?;
            let c_slack = audits
                .iter()
                .map(|a| a.sharp_bound - a.distance)
                .fold(f64::NEG_INFINITY, f64::max);
            let path = write_audits_csv(&config.out_dir, &audits)?;
            println!(
                "x={} spec={} thetas={} c_slack={:.4} -> {}",
                x,
                spec.id(),
                audits.len(),
                c_slack,
                path.display()
            );
        }
    }
    Ok(())
}
