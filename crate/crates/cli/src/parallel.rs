//! The worker pool over sieve blocks and ϑ-grid audits. All merges fold
//! ordered per-block/per-ϑ results, so output is identical for any worker
//! count — the determinism suite diffs the bytes to prove it.

use mospec_core::{
    audit_mean_value_conditions, little_m_with_table, partition, AdditiveSpec, BlockStats,
    BoundAudit, ConditionReport, GridPolicy, HalaszParams, PrimeCache, Sieve, SpectrumReport,
    TauTable,
};
use rayon::prelude::*;

use crate::error::{CliError, Result};

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Failure(format!("cannot build worker pool: {e}")))
}

/// Sieve `[1, x]` on `workers` threads and fold the per-block statistics in
/// block order.
pub fn parallel_stats(
    x: u64,
    spec: &AdditiveSpec,
    segment: u64,
    workers: usize,
) -> Result<BlockStats> {
    let sieve = Sieve::new(x)?;
    let ranges = partition(x, segment);
    let blocks: std::result::Result<Vec<BlockStats>, mospec_core::Error> =
        pool(workers)?.install(|| {
            ranges
                .par_iter()
                .map(|&(lo, hi)| {
                    sieve
                        .block(lo, hi, spec)
                        .map(|b| BlockStats::from_block(&b))
                })
                .collect()
        });
    let mut total = BlockStats::default();
    for b in blocks? {
        total.absorb(&b);
    }
    Ok(total)
}

/// Parallel spectrum for one (x, spec).
pub fn parallel_spectrum(
    x: u64,
    spec: &AdditiveSpec,
    segment: u64,
    workers: usize,
) -> Result<SpectrumReport> {
    let stats = parallel_stats(x, spec, segment, workers)?;
    Ok(SpectrumReport::from_stats(x, spec.id(), &stats))
}

/// Run the τ-minimization audit for every ϑ on the grid, sharing one coarse
/// τ-table. Per-ϑ work is independent; results come back in grid order.
pub fn parallel_audits(
    cache: &PrimeCache,
    thetas: &[f64],
    tau_max: f64,
    policy: &GridPolicy,
    workers: usize,
) -> Result<Vec<BoundAudit>> {
    let table = TauTable::build(cache, tau_max, policy)?;
    Ok(pool(workers)?.install(|| {
        thetas
            .par_iter()
            .map(|&theta| little_m_with_table(cache, &table, theta, policy))
            .collect()
    }))
}

/// Condition audit across the ϑ grid at fixed ϱ.
pub fn parallel_conditions(
    cache: &PrimeCache,
    thetas: &[f64],
    rho: f64,
    params: &HalaszParams,
    workers: usize,
) -> Result<Vec<ConditionReport>> {
    let reports: std::result::Result<Vec<ConditionReport>, mospec_core::Error> =
        pool(workers)?.install(|| {
            thetas
                .par_iter()
                .map(|&theta| audit_mean_value_conditions(cache, rho, theta, params))
                .collect()
        });
    Ok(reports?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use mospec_core::scan;

    #[test]
    fn parallel_matches_sequential() {
        let spec = AdditiveSpec::Threshold { y: 5 };
        let seq = scan(200_000, &spec, 1 << 14).unwrap();
        for workers in [1, 2, 8] {
            let par = parallel_stats(200_000, &spec, 1 << 14, workers).unwrap();
            assert_eq!(par, seq, "workers = {workers}");
        }
    }

    #[test]
    fn audit_grid_order_is_stable() {
        let cache = PrimeCache::build(2000, &AdditiveSpec::AllOnes);
        let thetas: Vec<f64> = mospec_core::numeric::linspace(-0.5, 0.5, 11);
        let policy = GridPolicy::default();
        let a = parallel_audits(&cache, &thetas, 2000f64.ln(), &policy, 1).unwrap();
        let b = parallel_audits(&cache, &thetas, 2000f64.ln(), &policy, 4).unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.theta, y.theta);
            assert_eq!(x.distance.to_bits(), y.distance.to_bits());
            assert_eq!(x.argmin_tau.to_bits(), y.argmin_tau.to_bits());
        }
    }
}
