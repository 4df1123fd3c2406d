//! Odd-only bit sieve of Eratosthenes.
//!
//! The table up to `limit` is filled segment by segment once the limit passes
//! `2^24`, so the working set while sieving stays bounded by the segment size
//! plus the base primes below `sqrt(limit)`.

const SEGMENT_THRESHOLD: u64 = 1 << 24;
const SEGMENT_SPAN: u64 = 1 << 22;

#[derive(Clone, Debug)]
pub struct PrimeSieve {
    limit: u64,
    // bit i set <=> 2i + 1 is composite (1 counts as composite)
    composite: Vec<u64>,
}

impl PrimeSieve {
    pub fn new(limit: u64) -> Self {
        let limit = limit.max(2);
        let slots = (limit / 2 + 1) as usize;
        let mut sieve = PrimeSieve {
            limit,
            composite: vec![0u64; slots.div_ceil(64)],
        };
        sieve.mark(0);
        if limit <= SEGMENT_THRESHOLD {
            sieve.fill_range(&Self::base_primes(limit), 3, limit);
        } else {
            let base = Self::base_primes(limit);
            let mut start = 3;
            while start <= limit {
                let end = (start + SEGMENT_SPAN - 1).min(limit);
                sieve.fill_range(&base, start, end);
                start = end + 1;
            }
        }
        sieve
    }

    /// Odd primes up to `sqrt(limit)`, from a small plain sieve.
    fn base_primes(limit: u64) -> Vec<u64> {
        let root = (limit as f64).sqrt() as u64 + 2;
        let mut is_comp = vec![false; root as usize + 1];
        let mut out = Vec::new();
        for i in 2..=root {
            if !is_comp[i as usize] {
                if i > 2 {
                    out.push(i);
                }
                let mut j = i * i;
                while j <= root {
                    is_comp[j as usize] = true;
                    j += i;
                }
            }
        }
        out
    }

    /// Marks odd composites in `[lo, hi]`.
    fn fill_range(&mut self, base: &[u64], lo: u64, hi: u64) {
        for &p in base {
            if p * p > hi {
                break;
            }
            let first = (p * p).max(lo.div_ceil(p) * p);
            let mut m = if first % 2 == 0 { first + p } else { first };
            while m <= hi {
                self.mark((m / 2) as usize);
                m += 2 * p;
            }
        }
    }

    fn mark(&mut self, i: usize) {
        self.composite[i / 64] |= 1 << (i % 64);
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Primality of `n`; panics if `n` exceeds the sieve limit.
    pub fn is_prime(&self, n: u64) -> bool {
        assert!(n <= self.limit, "{n} beyond sieve limit {}", self.limit);
        if n < 2 {
            return false;
        }
        if n.is_multiple_of(2) {
            return n == 2;
        }
        let i = (n / 2) as usize;
        self.composite[i / 64] & (1 << (i % 64)) == 0
    }

    /// Smallest prime in `[lo, hi]`, if any (requires `hi <= limit`).
    pub fn first_prime_in(&self, lo: u64, hi: u64) -> Option<u64> {
        (lo..=hi).find(|&n| self.is_prime(n))
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        (2..=self.limit).filter(|&n| self.is_prime(n))
    }
}
