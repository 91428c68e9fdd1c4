//! Property tests for the sieve and the kernel: partition independence,
//! multiplicative identities, additivity, and kernel symmetries.

use mospec_core::{
    enumerate_primes, h_theta, oracle, partition, s_theta, scan, sieve_block, AdditiveSpec,
    BlockStats, Sieve,
};
use proptest::prelude::*;

fn spec_strategy() -> impl Strategy<Value = AdditiveSpec> {
    prop_oneof![
        Just(AdditiveSpec::AllOnes),
        (2u64..200).prop_map(|y| AdditiveSpec::Threshold { y }),
        (2u64..12, any::<u8>()).prop_map(|(q, v)| {
            AdditiveSpec::Residue { q, a: v as u64 % q, value_inside: u8::from(v % 2 == 0) }
        }),
        proptest::collection::btree_set(2u64..100, 1..6).prop_map(|s| AdditiveSpec::ZeroList {
            primes: s.into_iter().collect(),
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partition_independence(
        spec in spec_strategy(),
        limit in 2u64..3000,
        segment in 1u64..512,
    ) {
        let whole = sieve_block(1, limit + 1, &spec).unwrap();
        let sieve = Sieve::new(limit).unwrap();
        let mut mu = Vec::new();
        let mut fval = Vec::new();
        for (lo, hi) in partition(limit, segment) {
            let b = sieve.block(lo, hi, &spec).unwrap();
            mu.extend_from_slice(&b.mu);
            fval.extend_from_slice(&b.fval);
        }
        prop_assert_eq!(mu, whole.mu);
        prop_assert_eq!(fval, whole.fval);
    }

    #[test]
    fn sieve_matches_naive_oracle(spec in spec_strategy(), n in 1u64..5000) {
        let b = sieve_block(n, n + 1, &spec).unwrap();
        prop_assert_eq!(b.mu_at(n), oracle::naive_mu(n));
        prop_assert_eq!(b.f_at(n), oracle::naive_f(n, &spec));
    }

    #[test]
    fn additivity_on_coprime_pairs(
        spec in spec_strategy(),
        a in 2u64..1000,
        b in 2u64..1000,
    ) {
        prop_assume!(gcd(a, b) == 1);
        let block = |n: u64| sieve_block(n, n + 1, &spec).unwrap().f_at(n);
        prop_assert_eq!(block(a * b), block(a) + block(b));
    }

    #[test]
    fn kernel_range_period_symmetry(theta in -0.5f64..0.5, t in -10.0f64..10.0) {
        let h = h_theta(theta, t);
        prop_assert!((0.0..=2.0).contains(&h));
        let tau = std::f64::consts::TAU;
        prop_assert!((h - h_theta(theta, t + tau)).abs() < 1e-9);
        prop_assert!((h - h_theta(theta, tau * theta - t)).abs() < 1e-9);
        prop_assert!((0.0..=1.0).contains(&s_theta(theta)));
    }

    #[test]
    fn spectrum_sums_match_block_stats(spec in spec_strategy(), x in 10u64..4000) {
        let stats = scan(x, &spec, 128).unwrap();
        let signed_total: i64 = stats.signed.iter().sum();
        prop_assert_eq!(signed_total, stats.mertens);
        let count_total: u64 = stats.counts.iter().sum();
        prop_assert_eq!(count_total, stats.squarefree);
        for (m, &c) in stats.counts.iter().enumerate() {
            prop_assert!(stats.signed[m].unsigned_abs() <= c);
        }
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[test]
fn mobius_convolution_exhaustive() {
    // Σ_{d|n} μ(d) = [n = 1] for all n ≤ 10⁴
    let n = 10_000u64;
    let block = sieve_block(1, n + 1, &AdditiveSpec::AllOnes).unwrap();
    let mut acc = vec![0i64; (n + 1) as usize];
    for d in 1..=n {
        let mu = block.mu_at(d) as i64;
        if mu == 0 {
            continue;
        }
        let mut m = d;
        while m <= n {
            acc[m as usize] += mu;
            m += d;
        }
    }
    assert_eq!(acc[1], 1);
    for v in &acc[2..] {
        assert_eq!(*v, 0);
    }
}

#[test]
fn squarefree_density_band() {
    // 6/π² ≈ 0.6079 sanity band
    for x in [10_000u64, 1_000_000] {
        let stats = scan(x, &AdditiveSpec::AllOnes, 1 << 16).unwrap();
        let density = stats.squarefree as f64 / x as f64;
        assert!(
            (0.58..=0.65).contains(&density),
            "x = {x}: density = {density}"
        );
    }
}

#[test]
fn mertens_theorem_band() {
    // Σ_{p≤x} 1/p − log log x stays inside the [0.20, 0.32] constant band
    for x in [10_000u64, 100_000, 1_000_000, 10_000_000] {
        let total: f64 = enumerate_primes(x).map(|p| 1.0 / p as f64).sum();
        let gap = total - (x as f64).ln().ln();
        assert!((0.20..=0.32).contains(&gap), "x = {x}: gap = {gap}");
    }
}

#[test]
fn block_stats_merge_is_order_insensitive() {
    let spec = AdditiveSpec::Threshold { y: 5 };
    let sieve = Sieve::new(4000).unwrap();
    let blocks: Vec<BlockStats> = partition(4000, 97)
        .into_iter()
        .map(|(lo, hi)| BlockStats::from_block(&sieve.block(lo, hi, &spec).unwrap()))
        .collect();
    let mut forward = BlockStats::default();
    for b in &blocks {
        forward.absorb(b);
    }
    let mut backward = BlockStats::default();
    for b in blocks.iter().rev() {
        backward.absorb(b);
    }
    assert_eq!(forward, backward);
}
