use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mospec_cli::config::{
    default_workers, parse_specs, parse_tau_policy, parse_x_list, RunConfig,
};
use mospec_cli::error::CliError;
use mospec_cli::runner;
use mospec_cli::suites;

/// Exact Möbius/additive-function spectra and Halász-type bound audits.
#[derive(Parser)]
#[command(name = "mospec", version = env!("MOSPEC_BUILD_VERSION"), about, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// Evaluation points (repeat or comma-separate; 1e6 shorthand works)
    #[arg(long = "x", value_name = "X")]
    x: Vec<String>,

    /// Additive-function specs: omega | threshold:<y> | residue:<q>:<a>:<0|1> | list:<p1,p2,...>
    #[arg(long = "spec", value_name = "SPEC")]
    spec: Vec<String>,

    /// Uniform-range parameter κ ∈ (0,1)
    #[arg(long, default_value_t = 0.5)]
    kappa: f64,

    /// Growth-hypothesis constant c₀
    #[arg(long = "c0", default_value_t = 1.0)]
    c0: f64,

    /// Iterated-log cut exponent D
    #[arg(long = "D", default_value_t = 2.0)]
    d_exponent: f64,

    /// Small-ϑ window constant K
    #[arg(long = "K", default_value_t = 2.0)]
    k_constant: f64,

    /// Mean-value condition parameter δ (default: min(β𝔟/3, 0.1))
    #[arg(long)]
    delta: Option<f64>,

    /// Number of ϑ grid points on [−1/2, 1/2]
    #[arg(long = "theta-steps", default_value_t = 101)]
    theta_steps: usize,

    /// τ grid policy `<step_factor>:<refine_width>` (default 0.5:1e-6)
    #[arg(long = "tau-policy", value_name = "POLICY")]
    tau_policy: Option<String>,

    /// Worker threads for the sieve pool
    #[arg(long)]
    workers: Option<usize>,

    /// Sieve block length in integers
    #[arg(long = "segment-size")]
    segment_size: Option<u64>,

    /// Output directory for CSV/JSON reports
    #[arg(long, default_value = "out")]
    out: PathBuf,

    /// Directory holding prime-sum checkpoint ledgers (read and refreshed)
    #[arg(long)]
    checkpoint: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Ground-truth sieve pass: Möbius partial sums and squarefree counts
    Sieve(CommonOpts),
    /// Emit exact spectrum CSVs, one per (x, spec)
    Spectrum(CommonOpts),
    /// Emit prediction CSVs (Poisson and signed main terms next to counts)
    Predict(CommonOpts),
    /// Emit ϑ-grid bound-audit CSVs
    Audit(CommonOpts),
    /// Full sweep: spectra, predictions, audits, conditions and a JSON summary
    Sweep(CommonOpts),
    /// Run an acceptance suite
    Verify {
        /// Suite name (see `verify help` for the list)
        suite: String,
        #[command(flatten)]
        common: CommonOpts,
    },
}

fn build_config(opts: &CommonOpts) -> Result<RunConfig, CliError> {
    let mut config = RunConfig {
        x_list: parse_x_list(&opts.x)?,
        kappa: opts.kappa,
        c0: opts.c0,
        d_exponent: opts.d_exponent,
        k_constant: opts.k_constant,
        delta: opts.delta,
        theta_steps: opts.theta_steps,
        out_dir: opts.out.clone(),
        checkpoint_dir: opts.checkpoint.clone(),
        workers: opts.workers.unwrap_or_else(default_workers),
        ..RunConfig::default()
    };
    if !opts.spec.is_empty() {
        config.specs = parse_specs(&opts.spec)?;
    }
    if let Some(policy) = &opts.tau_policy {
        config.tau_policy = parse_tau_policy(policy)?;
    }
    if let Some(seg) = opts.segment_size {
        config.segment_size = seg;
    }
    Ok(config)
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Sieve(opts) => runner::run_sieve(&build_config(&opts)?),
        Command::Spectrum(opts) => runner::run_spectrum(&build_config(&opts)?),
        Command::Predict(opts) => runner::run_predict(&build_config(&opts)?),
        Command::Audit(opts) => runner::run_audit(&build_config(&opts)?),
        Command::Sweep(opts) => {
            run_sweep_command(&build_config(&opts)?)
        }
        Command::Verify { suite, common } => {
            let config = build_config(&common)?;
            config.validate_common()?;
            if suite == "help" {
                for (name, desc) in suites::SUITES {
                    println!("{name:<20} {desc}");
                }
                return Ok(());
            }
            let report = suites::run_suite(&suite, &config)?;
            if suites::print_report(&report) {
                Ok(())
            } else {
                Err(CliError::Failure(format!("suite {suite} failed")))
            }
        }
    }
}

fn run_sweep_command(config: &RunConfig) -> Result<(), CliError> {
    let summary = mospec_cli::run_sweep(config)?;
    println!(
        "sweep complete: {} cases in {:.1}s -> {}",
        summary.results.len(),
        summary.elapsed_seconds,
        config.out_dir.join("summary.json").display()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
