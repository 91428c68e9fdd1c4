//! CSV and JSON emission. All numeric fields are checked finite before they
//! reach a file; floats use the shortest round-trip representation so
//! identical values produce identical bytes.

use std::fs;
use std::path::{Path, PathBuf};

use mospec_core::{BoundAudit, ConditionReport, PredictionRow, SpectrumReport};
use serde::Serialize;

use crate::config::ConfigEcho;
use crate::error::{CliError, Result};

/// Spec ids become file-name fragments: `threshold:3` → `threshold-3`.
pub fn sanitize(spec_id: &str) -> String {
    spec_id
        .chars()
        .map(|c| match c {
            ':' => '-',
            ',' => '_',
            c => c,
        })
        .collect()
}

fn fmt_f64(v: f64) -> Result<String> {
    if !v.is_finite() {
        return Err(CliError::Failure(format!(
            "refusing to write non-finite value {v} to a report"
        )));
    }
    Ok(format!("{v}"))
}

fn fmt_opt(v: Option<f64>) -> Result<String> {
    match v {
        Some(v) => fmt_f64(v),
        None => Ok(String::new()),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(CliError::io(path))
}

pub fn spectrum_path(dir: &Path, report: &SpectrumReport) -> PathBuf {
    dir.join(format!(
        "spectrum_x{}_{}.csv",
        report.x,
        sanitize(&report.spec_id)
    ))
}

/// Columns: x, m, count, signed. One file per (x, spec).
pub fn write_spectrum_csv(dir: &Path, report: &SpectrumReport) -> Result<PathBuf> {
    let mut out = String::from("x,m,count,signed\n");
    for m in 0..report.bins() {
        out.push_str(&format!(
            "{},{},{},{}\n",
            report.x, m, report.counts[m], report.signed[m]
        ));
    }
    let path = spectrum_path(dir, report);
    write_file(&path, &out)?;
    Ok(path)
}

/// Columns pinned by the external interface: x, spec, m, count, signed,
/// poisson, thm12_main, thm12_err_scale, nm_main, ratio_poisson, ratio_thm12.
pub fn write_predictions_csv(dir: &Path, rows: &[PredictionRow]) -> Result<PathBuf> {
    let (x, spec_id) = match rows.first() {
        Some(r) => (r.x, r.spec_id.clone()),
        None => return Err(CliError::Failure("no prediction rows to write".into())),
    };
    let mut out =
        String::from("x,spec,m,count,signed,poisson,thm12_main,thm12_err_scale,nm_main,ratio_poisson,ratio_thm12\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            r.x,
            r.spec_id,
            r.m,
            r.count,
            r.signed,
            fmt_f64(r.poisson)?,
            fmt_f64(r.signed_main)?,
            fmt_f64(r.signed_error_scale)?,
            fmt_opt(r.count_main)?,
            fmt_opt(r.ratio_poisson)?,
            fmt_opt(r.ratio_signed)?,
        ));
    }
    let path = dir.join(format!("predictions_x{}_{}.csv", x, sanitize(&spec_id)));
    write_file(&path, &out)?;
    Ok(path)
}

/// BoundAudit rows over the ϑ grid.
pub fn write_audits_csv(dir: &Path, audits: &[BoundAudit]) -> Result<PathBuf> {
    let (x, spec_id) = match audits.first() {
        Some(a) => (a.x, a.spec_id.clone()),
        None => return Err(CliError::Failure("no audit rows to write".into())),
    };
    let mut out = String::from(
        "x,spec,theta,tau_max,distance,argmin_tau,sharp_bound,relaxed_bound,slack,case\n",
    );
    for a in audits {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            a.x,
            a.spec_id,
            fmt_f64(a.theta)?,
            fmt_f64(a.tau_max)?,
            fmt_f64(a.distance)?,
            fmt_f64(a.argmin_tau)?,
            fmt_f64(a.sharp_bound)?,
            fmt_f64(a.relaxed_bound)?,
            fmt_f64(a.slack)?,
            a.case,
        ));
    }
    let path = dir.join(format!("audits_x{}_{}.csv", x, sanitize(&spec_id)));
    write_file(&path, &out)?;
    Ok(path)
}

/// Condition-audit rows (one per ϑ), plus a companion file with the
/// restricted tail sums on the y-grid.
pub fn write_conditions_csv(dir: &Path, reports: &[ConditionReport]) -> Result<Vec<PathBuf>> {
    let (x, spec_id) = match reports.first() {
        Some(r) => (r.x, r.spec_id.clone()),
        None => return Err(CliError::Failure("no condition rows to write".into())),
    };
    let mut out = String::from(
        "x,spec,rho,theta,epsilon,epsilon_valid,delta,delta_in_window,lhs_direct,lhs_closed,lhs_rho_weighted,quad_bound,ceiling,distance_ok,min_r,b_frak,min_ok,class_max,class_bound,class_ok,prime_power_sum,c_over_a,c_kappa\n",
    );
    let mut tails = String::from("x,spec,rho,theta,y,tail_sum\n");
    for r in reports {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.x,
            r.spec_id,
            fmt_f64(r.rho)?,
            fmt_f64(r.theta)?,
            fmt_f64(r.epsilon)?,
            r.epsilon_valid,
            fmt_f64(r.delta)?,
            r.delta_in_window,
            fmt_f64(r.distance_lhs)?,
            fmt_f64(r.distance_closed)?,
            fmt_f64(r.distance_closed_rho_weighted)?,
            fmt_f64(r.distance_quadratic)?,
            fmt_f64(r.distance_ceiling)?,
            r.distance_ok,
            fmt_f64(r.min_r)?,
            fmt_f64(r.b_frak)?,
            r.min_ok,
            fmt_f64(r.class_prime_max)?,
            fmt_f64(r.class_bound)?,
            r.class_ok,
            fmt_f64(r.prime_power_sum)?,
            fmt_f64(r.c_frak_over_a)?,
            fmt_f64(r.c_frak_kappa)?,
        ));
        for &(y, sum) in &r.tail_sums {
            tails.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.x,
                r.spec_id,
                fmt_f64(r.rho)?,
                fmt_f64(r.theta)?,
                fmt_f64(y)?,
                fmt_f64(sum)?,
            ));
        }
    }
    let base = sanitize(&spec_id);
    let main_path = dir.join(format!("conditions_x{x}_{base}.csv"));
    let tails_path = dir.join(format!("condition_tails_x{x}_{base}.csv"));
    write_file(&main_path, &out)?;
    write_file(&tails_path, &tails)?;
    Ok(vec![main_path, tails_path])
}

/// Per-(x, spec) summary block for the run JSON.
#[derive(Clone, Debug, Serialize)]
pub struct CaseSummary {
    pub x: u64,
    pub spec: String,
    pub mertens: i64,
    pub squarefree: u64,
    pub bins: usize,
    pub q_plain: u64,
    pub q_mobius: u64,
    pub e_sum: f64,
    pub f_sum: f64,
    pub lambda_f: f64,
    pub lambda_tail_bound: f64,
    pub lambda_e2f: f64,
    /// fitted ledger constants
    pub c_slack: f64,
    pub envelope_ratio: f64,
    pub invariants: InvariantChecks,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvariantChecks {
    pub signed_total_equals_mertens: bool,
    pub q_mobius_le_q_plain: bool,
    pub relaxed_le_sharp: bool,
    pub epsilon_window_valid_anywhere: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunSummary {
    pub version: String,
    pub config: ConfigEcho,
    pub results: Vec<CaseSummary>,
    pub elapsed_seconds: f64,
}

pub fn build_version() -> String {
    env!("MOSPEC_BUILD_VERSION").to_string()
}

pub fn write_summary_json(dir: &Path, summary: &RunSummary) -> Result<PathBuf> {
    for case in &summary.results {
        for v in [
            case.e_sum,
            case.f_sum,
            case.lambda_f,
            case.lambda_tail_bound,
            case.lambda_e2f,
            case.c_slack,
            case.envelope_ratio,
        ] {
            if !v.is_finite() {
                return Err(CliError::Failure(format!(
                    "non-finite summary value for x={} spec={}",
                    case.x, case.spec
                )));
            }
        }
    }
    let path = dir.join("summary.json");
    let text = serde_json::to_string_pretty(summary)
        .map_err(|e| CliError::Failure(format!("summary serialization failed: {e}")))?;
    write_file(&path, &text)?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sanitizer() {
        assert_eq!(sanitize("omega"), "omega");
        assert_eq!(sanitize("threshold:3"), "threshold-3");
        assert_eq!(sanitize("residue:4:1:0"), "residue-4-1-0");
        assert_eq!(sanitize("list:2,3"), "list-2_3");
    }

    #[test]
    fn non_finite_values_are_refused() {
        assert!(fmt_f64(f64::NAN).is_err());
        assert!(fmt_f64(f64::INFINITY).is_err());
        assert_eq!(fmt_f64(0.5).unwrap(), "0.5");
    }
}
