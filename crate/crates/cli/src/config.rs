//! Run configuration shared by every subcommand.

use std::path::PathBuf;

use mospec_core::{AdditiveSpec, GridPolicy};
use serde::Serialize;

use crate::error::{CliError, Result};

#[derive(Clone, Debug)]
pub struct RunConfig {
    /// evaluation points, ascending
    pub x_list: Vec<u64>,
    pub specs: Vec<AdditiveSpec>,
    pub kappa: f64,
    pub c0: f64,
    pub d_exponent: f64,
    pub k_constant: f64,
    pub delta: Option<f64>,
    /// number of ϑ grid points on [−1/2, 1/2]
    pub theta_steps: usize,
    pub tau_policy: GridPolicy,
    pub workers: usize,
    pub segment_size: u64,
    pub out_dir: PathBuf,
    pub checkpoint_dir: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            x_list: Vec::new(),
            specs: vec![AdditiveSpec::AllOnes],
            kappa: 0.5,
            c0: 1.0,
            d_exponent: 2.0,
            k_constant: 2.0,
            delta: None,
            theta_steps: 101,
            tau_policy: GridPolicy::default(),
            workers: default_workers(),
            segment_size: mospec_core::DEFAULT_SEGMENT,
            out_dir: PathBuf::from("out"),
            checkpoint_dir: None,
        }
    }
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

impl RunConfig {
    /// Sweep-level validation: a sweep needs points, specs and sane windows.
    pub fn validate_for_sweep(&self) -> Result<()> {
        if self.x_list.is_empty() {
            return Err(CliError::Usage("empty x list (pass --x)".into()));
        }
        self.validate_common()
    }

    pub fn validate_common(&self) -> Result<()> {
        if self.specs.is_empty() {
            return Err(CliError::Usage("no specs given (pass --spec)".into()));
        }
        if !(0.0 < self.kappa && self.kappa < 1.0) {
            return Err(CliError::Usage(format!(
                "kappa must be in (0,1), got {}",
                self.kappa
            )));
        }
        if self.workers < 1 {
            return Err(CliError::Usage("workers must be ≥ 1".into()));
        }
        if self.segment_size < 1 {
            return Err(CliError::Usage("segment size must be ≥ 1".into()));
        }
        if self.theta_steps < 3 {
            return Err(CliError::Usage("theta-steps must be ≥ 3".into()));
        }
        if !self.x_list.windows(2).all(|w| w[0] < w[1]) {
            return Err(CliError::Usage("x list must be strictly ascending".into()));
        }
        Ok(())
    }

    /// Echo of the numeric configuration for the JSON summary.
    pub fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            x_list: self.x_list.clone(),
            specs: self.specs.iter().map(|s| s.id()).collect(),
            kappa: self.kappa,
            c0: self.c0,
            d_exponent: self.d_exponent,
            k_constant: self.k_constant,
            delta: self.delta,
            theta_steps: self.theta_steps,
            tau_step_factor: self.tau_policy.step_factor,
            tau_refine_width: self.tau_policy.refine_width,
            tau_refine_top: self.tau_policy.refine_top,
            workers: self.workers,
            segment_size: self.segment_size,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConfigEcho {
    pub x_list: Vec<u64>,
    pub specs: Vec<String>,
    pub kappa: f64,
    pub c0: f64,
    pub d_exponent: f64,
    pub k_constant: f64,
    pub delta: Option<f64>,
    pub theta_steps: usize,
    pub tau_step_factor: f64,
    pub tau_refine_width: f64,
    pub tau_refine_top: usize,
    pub workers: usize,
    pub segment_size: u64,
}

/// Parse one x value: plain integer (underscores allowed) or scientific
/// shorthand like `1e6` / `2.5e8`, as long as it lands on an integer.
pub fn parse_x(token: &str) -> Result<u64> {
    let cleaned: String = token.chars().filter(|&c| c != '_').collect();
    if let Ok(v) = cleaned.parse::<u64>() {
        return Ok(v);
    }
    if let Ok(f) = cleaned.parse::<f64>() {
        if f.fract() == 0.0 && f >= 1.0 && f <= mospec_core::MAX_LIMIT as f64 {
            return Ok(f as u64);
        }
    }
    Err(CliError::Usage(format!(
        "cannot parse x value `{token}` (expected integer or k·10^n shorthand like 1e6)"
    )))
}

/// Parse a comma-separated or repeated list of x values, sorted ascending.
pub fn parse_x_list(tokens: &[String]) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for token in tokens {
        for part in token.split(',').filter(|p| !p.is_empty()) {
            out.push(parse_x(part)?);
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Parse spec strings through the core grammar.
pub fn parse_specs(tokens: &[String]) -> Result<Vec<AdditiveSpec>> {
    let mut out = Vec::new();
    for token in tokens {
        for part in token.split(',').filter(|p| !p.is_empty()) {
            out.push(AdditiveSpec::parse(part)?);
        }
    }
    Ok(out)
}

/// Parse `--tau-policy <step_factor>:<refine_width>` (either part optional,
/// e.g. `0.5:1e-6`, `0.25`, `:1e-8`).
pub fn parse_tau_policy(token: &str) -> Result<GridPolicy> {
    let mut policy = GridPolicy::default();
    let mut parts = token.splitn(2, ':');
    let step = parts.next().unwrap_or("");
    if !step.is_empty() {
        policy.step_factor = step
            .parse::<f64>()
            .map_err(|_| CliError::Usage(format!("bad tau step factor `{step}`")))?;
    }
    if let Some(width) = parts.next() {
        if !width.is_empty() {
            policy.refine_width = width
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("bad tau refine width `{width}`")))?;
        }
    }
    if policy.step_factor <= 0.0 || policy.refine_width <= 0.0 {
        return Err(CliError::Usage(format!("invalid tau policy `{token}`")));
    }
    Ok(policy)
}
