//! Sums of reciprocal powers over windows of consecutive integers.

mod eta;

pub use eta::{certify_bands, epsilon, solve_eta, telescope_check, EtaBands, EtaSolution};

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::modular::{add_mod, inv_mod, is_prime_u64, mul_mod, pow_mod};
use crate::kernel::ExactRational;

/// The window `{start, start+1, ..., start+extent}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Interval {
    start: u64,
    extent: u64,
}

impl Interval {
    pub fn new(start: u64, extent: u64) -> Result<Self> {
        if start == 0 {
            return Err(Error::NonPositive("a"));
        }
        Ok(Interval { start, extent })
    }

    pub fn start(&self) -> u64 {
        self.start
    }

    pub fn extent(&self) -> u64 {
        self.extent
    }

    /// Last element, `a + r`.
    pub fn end(&self) -> u64 {
        self.start + self.extent
    }

    pub fn len(&self) -> u64 {
        self.extent + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(a={}, r={})", self.start, self.extent)
    }
}

/// Two windows in canonical order: the first starts no later than the second.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IntervalPair {
    first: Interval,
    second: Interval,
}

impl IntervalPair {
    /// Orders the two windows by `(start, extent)`.
    pub fn new(x: Interval, y: Interval) -> Self {
        if x <= y {
            IntervalPair {
                first: x,
                second: y,
            }
        } else {
            IntervalPair {
                first: y,
                second: x,
            }
        }
    }

    pub fn from_parts(a1: u64, r: u64, a2: u64, s: u64) -> Result<Self> {
        Ok(Self::new(Interval::new(a1, r)?, Interval::new(a2, s)?))
    }

    pub fn first(&self) -> Interval {
        self.first
    }

    pub fn second(&self) -> Interval {
        self.second
    }

    /// `(a1, r, a2, s)`.
    pub fn parts(&self) -> (u64, u64, u64, u64) {
        (
            self.first.start,
            self.first.extent,
            self.second.start,
            self.second.extent,
        )
    }

    /// `a1 + r < a2`.
    pub fn is_disjoint(&self) -> bool {
        self.first.end() < self.second.start
    }

    pub fn is_degenerate(&self) -> bool {
        self.first == self.second
    }
}

impl fmt::Display for IntervalPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} vs {}", self.first, self.second)
    }
}

/// `sum_{i=0}^{r} 1/(a+i)^exponent`, exact.
pub fn power_sum_exact(interval: Interval, exponent: u32) -> ExactRational {
    // Accumulate over a common denominator and reduce once at the end.
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for k in interval.start..=interval.end() {
        let term = BigInt::from(k).pow(exponent);
        num = num * &term + &den;
        den *= term;
    }
    ExactRational::new(num, den)
}

/// `G(a, r) = sum_{i=0}^{r} 1/(a+i)^2`.
pub fn g_exact(interval: Interval) -> ExactRational {
    power_sum_exact(interval, 2)
}

/// `G(a, r)` reduced modulo the prime `p`, which must exceed `a + r`.
pub fn g_mod(interval: Interval, p: u64) -> Result<u64> {
    power_sum_mod(interval, 2, p)
}

pub fn power_sum_mod(interval: Interval, exponent: u32, p: u64) -> Result<u64> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    if p <= interval.end() {
        return Err(Error::ModulusTooSmall {
            modulus: p,
            bound: interval.end(),
        });
    }
    let mut acc = 0;
    for k in interval.start..=interval.end() {
        let inv = inv_mod(pow_mod(k, exponent as u64, p), p).expect("p > k is prime");
        acc = add_mod(acc, inv, p);
    }
    Ok(acc)
}

/// Reduces a rational with denominator prime to `p` modulo `p`.
pub fn rational_mod(x: &ExactRational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let to_residue = |v: &BigInt| -> u64 {
        let r = ((v % &pb) + &pb) % &pb;
        u64::try_from(r).expect("residue below p")
    };
    let d = to_residue(x.denom());
    let inv = inv_mod(d, p)?;
    Some(mul_mod(to_residue(x.numer()), inv, p))
}

/// Removes the shared part of two overlapping windows.
///
/// For `a1 < a2 <= a1 + r < a2 + s`, the difference `G(a1, r) - G(a2, s)`
/// equals `G(a1, a2-a1-1) - G(a1+r+1, a2+s-a1-r-1)`, and the two new windows
/// are disjoint.
pub fn reduce_overlap(pair: IntervalPair) -> Result<IntervalPair> {
    let (a1, r, a2, s) = pair.parts();
    if !(a1 < a2 && a2 <= a1 + r) {
        return Err(Error::NotOverlapping(format!(
            "need a1 < a2 <= a1 + r, got {pair}"
        )));
    }
    if a2 + s <= a1 + r {
        return Err(Error::NotOverlapping(format!(
            "second window ends inside the first: {pair}"
        )));
    }
    let left = Interval::new(a1, a2 - a1 - 1)?;
    let right = Interval::new(a1 + r + 1, a2 + s - a1 - r - 1)?;
    Ok(IntervalPair::new(left, right))
}

/// `count` disjoint pairs `a1 + r < a2`, `a2 + s <= max_end`, drawn from a
/// ChaCha stream seeded with `seed`.
pub fn sample_disjoint_pairs(count: usize, max_end: u64, seed: u64) -> Result<Vec<IntervalPair>> {
    if max_end < 2 {
        return Err(Error::Precondition(format!(
            "max_end must be at least 2, got {max_end}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut ends = [0u64; 4];
        for e in &mut ends {
            *e = rng.gen_range(1..=max_end);
        }
        ends.sort_unstable();
        let [x1, y1, x2, y2] = ends;
        if y1 < x2 {
            out.push(IntervalPair::new(
                Interval::new(x1, y1 - x1)?,
                Interval::new(x2, y2 - x2)?,
            ));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rat;
    use proptest::prelude::*;

    fn iv(a: u64, r: u64) -> Interval {
        Interval::new(a, r).unwrap()
    }

    #[test]
    fn sampled_pairs_are_disjoint_and_bounded() {
        let pairs = sample_disjoint_pairs(500, 60, 3).unwrap();
        assert_eq!(pairs, sample_disjoint_pairs(500, 60, 3).unwrap());
        for p in pairs {
            let (a1, r, a2, s) = p.parts();
            assert!(a1 + r < a2 && a2 + s <= 60, "{p}");
        }
    }

    #[test]
    fn g_examples() {
        assert_eq!(g_exact(iv(1, 0)), rat(1, 1));
        assert_eq!(g_exact(iv(1, 1)), rat(5, 4));
        assert_eq!(g_exact(iv(2, 1)), rat(13, 36));
    }

    #[test]
    fn interval_rejects_zero_start() {
        assert_eq!(Interval::new(0, 3), Err(Error::NonPositive("a")));
    }

    #[test]
    fn g_recurrence_on_grid() {
        for a in 1..=200u64 {
            let mut prev = g_exact(iv(a, 0));
            for r in 1..=200u64 {
                let next = g_exact(iv(a, r));
                assert_eq!(next, &prev + rat(1, (a + r) * (a + r)));
                prev = next;
            }
        }
    }

    #[test]
    fn g_mod_examples() {
        assert_eq!(g_mod(iv(1, 1), 101), Ok(77));
        assert_eq!(g_mod(iv(1, 0), 13), Ok(1));
        assert_eq!(
            g_mod(iv(3, 1), 3),
            Err(Error::ModulusTooSmall {
                modulus: 3,
                bound: 4
            })
        );
        assert_eq!(g_mod(iv(1, 1), 100), Err(Error::NotPrime(100)));
    }

    #[test]
    fn g_mod_agrees_with_exact_reduction() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let primes: Vec<u64> = (1000..200_000u64)
            .filter(|&n| is_prime_u64(n))
            .take(2000)
            .collect();
        for _ in 0..500 {
            let a = rng.gen_range(1..=300);
            let r = rng.gen_range(0..=200);
            let p = loop {
                let p = primes[rng.gen_range(0..primes.len())];
                if p > a + r {
                    break p;
                }
            };
            let exact = g_exact(iv(a, r));
            assert_eq!(Some(g_mod(iv(a, r), p).unwrap()), rational_mod(&exact, p));
        }
    }

    #[test]
    fn reduce_overlap_examples() {
        let pair = IntervalPair::from_parts(2, 3, 4, 5).unwrap();
        let reduced = reduce_overlap(pair).unwrap();
        assert_eq!(reduced, IntervalPair::from_parts(2, 1, 6, 3).unwrap());
        assert_eq!(
            g_exact(iv(2, 3)) - g_exact(iv(4, 5)),
            g_exact(iv(2, 1)) - g_exact(iv(6, 3))
        );
        assert!(reduced.is_disjoint());

        let reduced = reduce_overlap(IntervalPair::from_parts(1, 1, 2, 1).unwrap()).unwrap();
        assert_eq!(reduced, IntervalPair::from_parts(1, 0, 3, 0).unwrap());
        assert_eq!(rat(1, 1) + rat(1, 4) - rat(1, 4) - rat(1, 9), rat(8, 9));
    }

    #[test]
    fn reduce_overlap_rejects_disjoint_and_nested() {
        let disjoint = IntervalPair::from_parts(1, 1, 5, 2).unwrap();
        assert!(matches!(
            reduce_overlap(disjoint),
            Err(Error::NotOverlapping(_))
        ));
        let nested = IntervalPair::from_parts(1, 10, 3, 2).unwrap();
        assert!(matches!(
            reduce_overlap(nested),
            Err(Error::NotOverlapping(_))
        ));
        let same_start = IntervalPair::from_parts(4, 1, 4, 3).unwrap();
        assert!(reduce_overlap(same_start).is_err());
    }

    #[test]
    fn canonical_orientation() {
        let p = IntervalPair::new(iv(9, 0), iv(3, 4));
        assert_eq!(p.parts(), (3, 4, 9, 0));
        assert!(p.is_disjoint());
        assert!(!IntervalPair::new(iv(3, 6), iv(9, 0)).is_disjoint());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn reduction_preserves_difference(a1 in 1u64..60, r in 1u64..40, off in 1u64..40, grow in 1u64..40) {
            let off = 1 + (off - 1) % r; // a2 - a1 in 1..=r
            let a2 = a1 + off;
            let s = (a1 + r + grow) - a2; // second window ends past the first
            let pair = IntervalPair::from_parts(a1, r, a2, s).unwrap();
            let reduced = reduce_overlap(pair).unwrap();
            prop_assert!(reduced.is_disjoint());
            let before = g_exact(pair.first()) - g_exact(pair.second());
            let after = g_exact(reduced.first()) - g_exact(reduced.second());
            prop_assert_eq!(before, after);
        }

        #[test]
        fn power_sums_match_termwise_rationals(a in 1u64..500, r in 0u64..60, e in 1u32..4) {
            let direct = (a..=a + r).fold(ExactRational::zero(), |acc, k| {
                acc + ExactRational::new(BigInt::one(), BigInt::from(k).pow(e))
            });
            prop_assert_eq!(power_sum_exact(iv(a, r), e), direct);
        }
    }
}
