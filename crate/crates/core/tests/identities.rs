//! Cross-module identities: the sieve, the prime-sum ledger, the spectrum
//! and its Fourier side must all agree on the quantities they share.

use mospec_core::{
    fourier_extract, mertens, prime_sums, spectrum, z_sum, AdditiveSpec, PrimeSumLedger,
    ZSumKind,
};

fn specs() -> Vec<AdditiveSpec> {
    vec![
        AdditiveSpec::AllOnes,
        AdditiveSpec::Threshold { y: 3 },
        AdditiveSpec::Residue { q: 4, a: 1, value_inside: 0 },
    ]
}

#[test]
fn signed_totals_equal_mertens() {
    for spec in specs() {
        for x in [10u64, 100, 1024, 65_536] {
            let s = spectrum(x, &spec).unwrap();
            assert_eq!(
                s.signed_total(),
                mertens(x).unwrap(),
                "spec {} x {x}",
                spec.id()
            );
        }
    }
}

#[test]
fn mertens_alternating_spectrum_identity() {
    // Σ_m (−1)^m N_m(x;ω) = M(x) since μ(n) = (−1)^{ω(n)} on squarefree n
    let s = spectrum(30, &AdditiveSpec::AllOnes).unwrap();
    let alternating: i64 = s
        .counts
        .iter()
        .enumerate()
        .map(|(m, &c)| if m % 2 == 0 { c as i64 } else { -(c as i64) })
        .sum();
    assert_eq!(alternating, -3);
}

#[test]
fn dft_duality_across_specs_and_radii() {
    for spec in specs() {
        let s = spectrum(100_000, &spec).unwrap();
        let scale = s.q_mobius() as f64;
        for rho in [0.5, 1.0, 2.0] {
            let out = fourier_extract(&s, rho).unwrap();
            for (m, &expected) in s.signed.iter().enumerate() {
                let err = (out[m] - expected as f64).abs();
                assert!(
                    err < 1e-4 * scale.max(1.0),
                    "spec {} rho {rho} m {m}: err {err}",
                    spec.id()
                );
            }
        }
    }
}

#[test]
fn ledger_matches_streaming_sums() {
    for spec in specs() {
        let ledger = PrimeSumLedger::build(&spec, 100_000, &[30_000]);
        for cp in &ledger.checkpoints {
            let direct = prime_sums(cp.x, &spec);
            assert!(
                (cp.e_sum - direct.e_sum).abs() < 1e-12,
                "spec {} x {}: ledger E {} vs direct {}",
                spec.id(),
                cp.x,
                cp.e_sum,
                direct.e_sum
            );
            assert!((cp.f_sum - direct.f_sum).abs() < 1e-12);
        }
    }
}

#[test]
fn z_sum_closed_forms() {
    use std::f64::consts::TAU;
    for spec in specs() {
        let sums = prime_sums(50_000, &spec);
        for &(rho, theta) in &[(0.5, 0.0), (1.0, 0.25), (2.0, -0.37)] {
            // Z(x;r) = ϱE + F
            let zr = z_sum(50_000, &spec, rho, theta, ZSumKind::R);
            assert!((zr.re - (rho * sums.e_sum + sums.f_sum)).abs() < 1e-12);
            assert!(zr.im.abs() < 1e-15);
            // Z(x;g) = ϱe^{2πiϑ}E − F
            let zg = z_sum(50_000, &spec, rho, theta, ZSumKind::G);
            assert!((zg.re - (rho * (TAU * theta).cos() * sums.e_sum - sums.f_sum)).abs() < 1e-12);
            assert!((zg.im - rho * (TAU * theta).sin() * sums.e_sum).abs() < 1e-12);
        }
    }
}
