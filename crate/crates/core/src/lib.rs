//! Sieve-backed workbench for Möbius–additive-function correlation at desk
//! scale: exact spectra N_m(x;f) and N_m(x;f,μ), prime harmonic sum ledgers,
//! closed-form main terms and concentration bounds, and an executable audit
//! of the Halász-type bound pipeline with measured slack constants.

pub mod additive;
pub mod error;
pub mod halasz;
pub mod numeric;
pub mod oracle;
pub mod predictions;
pub mod sieve;
pub mod spectrum;

pub use additive::{
    check_hypotheses, lambda_e2f, lambda_f, prime_sum_e, prime_sum_f, prime_sums, AdditiveSpec,
    Checkpoint, HypothesisCeilings, HypothesisReport, LambdaF, PrimeSumLedger, PrimeSums,
};
pub use error::{Error, Result};
pub use halasz::{
    audit_mean_value_conditions, beta_zero, distance_lower_bound, distance_lower_bound_from,
    envelope_integral, h_theta, halasz_envelope, little_m, little_m_with_table, s_theta,
    tail_sum_h, v_cut, v_cut_from, BoundAudit, ConditionReport, DistanceBounds, GridPolicy,
    HalaszParams, PrimeCache, TailSum, TauCase, TauTable, ThetaZero, VCut,
};
pub use predictions::{
    concentration_constant, count_main_term, halasz_concentration_bound,
    mobius_concentration_bound, poisson_term, prediction_rows, signed_error_exponent,
    signed_spectrum_prediction, weighted_count_order_ratio, CountPrediction, PredictionRow,
    SignedPrediction,
};
pub use sieve::{
    enumerate_primes, mertens, partition, scan, sieve_block, BlockStats, PrimeStream, Sieve,
    SievedBlock, DEFAULT_SEGMENT, MAX_LIMIT,
};
pub use spectrum::{
    fourier_extract, mean_value_g, mean_value_r, spectrum, z_sum, FourierSample, SpectrumReport,
    ZSumKind,
};
