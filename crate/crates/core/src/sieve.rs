//! Segmented, embarrassingly parallel computation of μ(n) and f(n).
//!
//! The design is smallest-prime-factor-free: each block keeps a residual
//! cofactor per integer, divides out every base prime (flipping the Möbius
//! sign and accumulating f-increments in place), and a final pass accounts
//! for the at-most-one prime factor exceeding √hi. Blocks are independent,
//! so any partition of [1, x) reproduces the single-block result element
//! for element.

use crate::additive::AdditiveSpec;
use crate::error::{Error, Result};

/// Hard capacity of the engine: 64-bit counters and indices are safe for
/// every count up to this limit with wide headroom.
pub const MAX_LIMIT: u64 = 1_000_000_000_000;

/// Default block length (integers per block): cache-friendly working set,
/// flag-tunable from the CLI.
pub const DEFAULT_SEGMENT: u64 = 1 << 22;

/// Streaming enumeration of the primes `p ≤ limit`, in increasing order.
///
/// Memory stays `O(√limit + segment)`; the stream is restartable by
/// constructing it again (construction is cheap relative to iteration).
#[derive(Clone)]
pub struct PrimeStream {
    limit: u64,
    base: Vec<u64>,
    buf: Vec<u64>,
    buf_idx: usize,
    next_lo: u64,
}

const STREAM_SEGMENT: u64 = 1 << 18;

/// All primes `p ≤ limit`, increasing. `limit < 2` yields an empty stream.
pub fn enumerate_primes(limit: u64) -> PrimeStream {
    let base = if limit >= 4 {
        simple_sieve(limit.isqrt())
    } else {
        Vec::new()
    };
    PrimeStream {
        limit,
        base,
        buf: Vec::new(),
        buf_idx: 0,
        next_lo: 2,
    }
}

/// Dense sieve of Eratosthenes for the base primes (√limit is small).
fn simple_sieve(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for p in 2..=n {
        if composite[p] {
            continue;
        }
        primes.push(p as u64);
        let mut m = p * p;
        while m <= n {
            composite[m] = true;
            m += p;
        }
    }
    primes
}

impl PrimeStream {
    fn refill(&mut self) {
        self.buf.clear();
        self.buf_idx = 0;
        while self.buf.is_empty() && self.next_lo <= self.limit {
            let lo = self.next_lo;
            let hi = (lo + STREAM_SEGMENT - 1).min(self.limit);
            let len = (hi - lo + 1) as usize;
            let mut composite = vec![false; len];
            for &p in &self.base {
                if p * p > hi {
                    break;
                }
                let mut m = (p * p).max(lo.div_ceil(p) * p);
                while m <= hi {
                    composite[(m - lo) as usize] = true;
                    m += p;
                }
            }
            for (i, &c) in composite.iter().enumerate() {
                if !c {
                    self.buf.push(lo + i as u64);
                }
            }
            self.next_lo = hi + 1;
        }
    }
}

impl Iterator for PrimeStream {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.buf_idx >= self.buf.len() {
            self.refill();
            if self.buf.is_empty() {
                return None;
            }
        }
        let p = self.buf[self.buf_idx];
        self.buf_idx += 1;
        Some(p)
    }
}

/// Exact μ(n) and f(n) over a contiguous range `[lo, hi)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SievedBlock {
    pub lo: u64,
    pub hi: u64,
    /// μ(n) at index n − lo: −1, 0, +1.
    pub mu: Vec<i8>,
    /// f(n) = Σ_{p | n} f(p) at index n − lo (strong additivity, f(p) ∈ {0,1}).
    pub fval: Vec<u8>,
}

impl SievedBlock {
    #[inline]
    pub fn mu_at(&self, n: u64) -> i8 {
        self.mu[(n - self.lo) as usize]
    }

    #[inline]
    pub fn f_at(&self, n: u64) -> u8 {
        self.fval[(n - self.lo) as usize]
    }
}

/// Base-prime table for a fixed global limit; hands out independent blocks.
///
/// Shared read-only across workers — the only state a parallel sweep needs.
pub struct Sieve {
    limit: u64,
    base: Vec<u64>,
}

impl Sieve {
    pub fn new(limit: u64) -> Result<Self> {
        if limit > MAX_LIMIT {
            return Err(Error::Capacity {
                limit,
                capacity: MAX_LIMIT,
            });
        }
        Ok(Sieve {
            limit,
            base: if limit >= 4 {
                simple_sieve(limit.isqrt())
            } else {
                Vec::new()
            },
        })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Sieve one block `[lo, hi)`. The result is independent of how the
    /// global range was partitioned.
    pub fn block(&self, lo: u64, hi: u64, spec: &AdditiveSpec) -> Result<SievedBlock> {
        if lo < 1 || hi <= lo || hi > self.limit + 1 {
            return Err(Error::Range {
                lo,
                hi,
                limit: self.limit,
            });
        }
        let len = (hi - lo) as usize;
        let mut sign = vec![1i8; len];
        let mut squared = vec![false; len];
        let mut fval = vec![0u8; len];
        let mut rem: Vec<u64> = (lo..hi).collect();

        for &p in &self.base {
            if p * p >= hi {
                break;
            }
            let f_inc = spec.classify(p);
            let mut m = lo.div_ceil(p) * p;
            while m < hi {
                let i = (m - lo) as usize;
                rem[i] /= p;
                sign[i] = -sign[i];
                fval[i] += f_inc;
                m += p;
            }
            let p2 = p * p;
            let mut m = lo.div_ceil(p2) * p2;
            while m < hi {
                let i = (m - lo) as usize;
                squared[i] = true;
                while rem[i] % p == 0 {
                    rem[i] /= p;
                }
                m += p2;
            }
        }

        // Whatever survived is either 1 or a single prime > √(hi−1).
        let mut mu = vec![0i8; len];
        for i in 0..len {
            let r = rem[i];
            if r > 1 {
                sign[i] = -sign[i];
                fval[i] += spec.classify(r);
            }
            if !squared[i] {
                mu[i] = sign[i];
            }
        }

        Ok(SievedBlock {
            lo,
            hi,
            mu,
            fval,
        })
    }
}

/// Convenience single-block sieve (builds a throwaway base-prime table).
pub fn sieve_block(lo: u64, hi: u64, spec: &AdditiveSpec) -> Result<SievedBlock> {
    if hi == 0 {
        return Err(Error::Range { lo, hi, limit: 0 });
    }
    Sieve::new(hi - 1)?.block(lo, hi, spec)
}

/// Block partition of `[1, limit]` into ranges of at most `segment` integers.
pub fn partition(limit: u64, segment: u64) -> Vec<(u64, u64)> {
    assert!(segment >= 1, "segment size must be positive");
    let mut out = Vec::new();
    let mut lo = 1;
    while lo <= limit {
        let hi = (lo + segment).min(limit + 1);
        out.push((lo, hi));
        lo = hi;
    }
    out
}

/// Associative, commutative per-block reduction: the f(n)-histogram over
/// squarefree n, its μ-signed companion, the Möbius partial sum, and the
/// squarefree count. Merging in any order yields the same integers.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BlockStats {
    /// counts[m] = #{n in range : μ(n) ≠ 0, f(n) = m}
    pub counts: Vec<u64>,
    /// signed[m] = Σ_{n in range, f(n) = m} μ(n)
    pub signed: Vec<i64>,
    /// Σ μ(n) over the range
    pub mertens: i64,
    /// #{n in range : μ(n) ≠ 0}
    pub squarefree: u64,
}

impl BlockStats {
    pub fn from_block(block: &SievedBlock) -> Self {
        let mut stats = BlockStats::default();
        for i in 0..block.mu.len() {
            let mu = block.mu[i];
            if mu == 0 {
                continue;
            }
            let m = block.fval[i] as usize;
            if m >= stats.counts.len() {
                stats.counts.resize(m + 1, 0);
                stats.signed.resize(m + 1, 0);
            }
            stats.counts[m] += 1;
            stats.signed[m] += mu as i64;
            stats.mertens += mu as i64;
            stats.squarefree += 1;
        }
        stats
    }

    pub fn absorb(&mut self, other: &BlockStats) {
        if other.counts.len() > self.counts.len() {
            self.counts.resize(other.counts.len(), 0);
            self.signed.resize(other.signed.len(), 0);
        }
        for (m, &c) in other.counts.iter().enumerate() {
            self.counts[m] += c;
        }
        for (m, &s) in other.signed.iter().enumerate() {
            self.signed[m] += s;
        }
        self.mertens += other.mertens;
        self.squarefree += other.squarefree;
    }
}

/// Sequential block reduction over `[1, x]`.
pub fn scan(x: u64, spec: &AdditiveSpec, segment: u64) -> Result<BlockStats> {
    let sieve = Sieve::new(x)?;
    let mut total = BlockStats::default();
    for (lo, hi) in partition(x, segment) {
        let block = sieve.block(lo, hi, spec)?;
        total.absorb(&BlockStats::from_block(&block));
    }
    Ok(total)
}

/// Σ_{n ≤ x} μ(n), by block reduction. `mertens(0) = 0`.
pub fn mertens(x: u64) -> Result<i64> {
    if x == 0 {
        return Ok(0);
    }
    Ok(scan(x, &AdditiveSpec::AllOnes, DEFAULT_SEGMENT)?.mertens)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_primes() {
        let ps: Vec<u64> = enumerate_primes(10).collect();
        assert_eq!(ps, vec![2, 3, 5, 7]);
    }

    #[test]
    fn empty_stream() {
        assert_eq!(enumerate_primes(1).count(), 0);
        assert_eq!(enumerate_primes(0).count(), 0);
    }

    #[test]
    fn primes_to_thirty() {
        let ps: Vec<u64> = enumerate_primes(30).collect();
        assert_eq!(ps.len(), 10);
        assert_eq!(*ps.last().unwrap(), 29);
        // every yielded value has no divisor in (1, value)
        for &p in &ps {
            assert!((2..p).all(|d| p % d != 0), "{p} is not prime");
        }
    }

    #[test]
    fn stream_crosses_segments() {
        // π(10^6) = 78498; exercises several refills
        assert_eq!(enumerate_primes(1_000_000).count(), 78498);
    }

    #[test]
    fn unit_is_squarefree_with_empty_sum() {
        let b = sieve_block(1, 2, &AdditiveSpec::AllOnes).unwrap();
        assert_eq!(b.mu_at(1), 1);
        assert_eq!(b.f_at(1), 0);
    }

    #[test]
    fn twelve_has_square_factor() {
        let b = sieve_block(12, 13, &AdditiveSpec::AllOnes).unwrap();
        assert_eq!(b.mu_at(12), 0);
    }

    #[test]
    fn sixty_has_three_distinct_primes() {
        let b = sieve_block(60, 61, &AdditiveSpec::AllOnes).unwrap();
        assert_eq!(b.f_at(60), 3);
    }

    #[test]
    fn block_ten_to_twenty() {
        let b = sieve_block(10, 20, &AdditiveSpec::AllOnes).unwrap();
        assert_eq!(b.mu, vec![1, -1, 0, -1, 1, 1, 0, -1, 0, -1]);
    }

    #[test]
    fn mertens_small() {
        assert_eq!(mertens(1).unwrap(), 1);
        assert_eq!(mertens(10).unwrap(), -1);
        assert_eq!(mertens(30).unwrap(), -3);
    }

    #[test]
    fn rejects_bad_ranges() {
        assert!(matches!(
            Sieve::new(MAX_LIMIT + 1),
            Err(Error::Capacity { .. })
        ));
        let sieve = Sieve::new(100).unwrap();
        assert!(matches!(
            sieve.block(0, 10, &AdditiveSpec::AllOnes),
            Err(Error::Range { .. })
        ));
        assert!(matches!(
            sieve.block(10, 10, &AdditiveSpec::AllOnes),
            Err(Error::Range { .. })
        ));
        assert!(matches!(
            sieve.block(1, 102, &AdditiveSpec::AllOnes),
            Err(Error::Range { .. })
        ));
    }

    #[test]
    fn partition_covers_range() {
        let parts = partition(100, 7);
        assert_eq!(parts.first().unwrap().0, 1);
        assert_eq!(parts.last().unwrap().1, 101);
        for w in parts.windows(2) {
            assert_eq!(w[0].1, w[1].0);
        }
    }

    #[test]
    fn scan_segment_invariance() {
        let a = scan(5000, &AdditiveSpec::AllOnes, 64).unwrap();
        let b = scan(5000, &AdditiveSpec::AllOnes, 5000).unwrap();
        assert_eq!(a, b);
    }
}
