//! Prime-existence lemmas and the lcm lower bound.

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;

use super::{Claim, Witness, WitnessReport};
use crate::error::{Error, Result};
use crate::kernel::{
    factorial, factorial_valuation, lcm_progression, prime_factors, ExactRational, PrimeSieve,
};

/// Prime in `[n, 2n]`, or in `[n, 2n-1]` when `remark` is set (then `n > 1`).
pub fn check_bertrand(sieve: &PrimeSieve, n: u64, remark: bool) -> Result<WitnessReport> {
    if n == 0 {
        return Err(Error::NonPositive("n"));
    }
    if remark && n < 2 {
        return Err(Error::Precondition("remark form needs n > 1".into()));
    }
    let top = if remark { 2 * n - 1 } else { 2 * n };
    if top > sieve.limit() {
        return Err(Error::Precondition(format!(
            "window top {top} beyond sieve limit {}",
            sieve.limit()
        )));
    }
    let witness = sieve.first_prime_in(n, top);
    Ok(WitnessReport {
        claim: if remark {
            Claim::BertrandRemark
        } else {
            Claim::Bertrand
        },
        params: vec![("n", n)],
        holds: witness.is_some(),
        witness: witness.map(Witness::Prime),
    })
}

fn largest_prime_factor(n: u64) -> Option<u64> {
    prime_factors(n).last().copied()
}

/// First element of `window` whose largest prime factor is at least `bound`.
fn factor_witness(window: impl Iterator<Item = u64>, bound: u64) -> Option<Witness> {
    window
        .filter_map(|m| largest_prime_factor(m).map(|p| (m, p)))
        .find(|&(_, p)| p >= bound)
        .map(|(element, prime)| Witness::Factor { element, prime })
}

/// `{n, ..., n+k-1}` contains an element with a prime factor `>= k+1`, for `n > k >= 1`.
pub fn check_prime_window(n: u64, k: u64) -> Result<WitnessReport> {
    if k == 0 {
        return Err(Error::NonPositive("k"));
    }
    if n <= k {
        return Err(Error::Precondition(format!("need n > k, got n={n}, k={k}")));
    }
    let witness = factor_witness(n..n + k, k + 1);
    Ok(WitnessReport {
        claim: Claim::PrimeWindow,
        params: vec![("n", n), ("k", k)],
        holds: witness.is_some(),
        witness,
    })
}

/// `{n, ..., n+k}` contains an element with a prime factor `>= 2(k+1)`, for `n >= (k+1)^2`.
pub fn check_large_prime_window(n: u64, k: u64) -> Result<WitnessReport> {
    if k == 0 {
        return Err(Error::NonPositive("k"));
    }
    if n < (k + 1) * (k + 1) {
        return Err(Error::Precondition(format!(
            "need n >= (k+1)^2, got n={n}, k={k}"
        )));
    }
    let witness = factor_witness(n..=n + k, 2 * (k + 1));
    Ok(WitnessReport {
        claim: Claim::LargePrimeWindow,
        params: vec![("n", n), ("k", k)],
        holds: witness.is_some(),
        witness,
    })
}

/// Compares `lcm{a, a+b, ..., a+nb}` with
/// `prod_{p | b} p^{v_p(n!)} * (1/n!) * prod_{i=0}^{n} (a + ib)` for coprime `a, b`.
pub fn check_lcm_bound(a: u64, b: u64, n: u64) -> Result<WitnessReport> {
    if a == 0 {
        return Err(Error::NonPositive("a"));
    }
    if b == 0 {
        return Err(Error::NonPositive("b"));
    }
    let g = a.gcd(&b);
    if g != 1 {
        return Err(Error::NotCoprime { a, b, gcd: g });
    }
    let lhs = ExactRational::from_integer(BigInt::from(lcm_progression(a, b, n)?));
    let mut numerator = BigInt::from(1);
    for p in prime_factors(b) {
        numerator *= BigInt::from(p).pow(factorial_valuation(n, p)? as u32);
    }
    for i in 0..=n {
        numerator *= a + i * b;
    }
    let rhs = ExactRational::new(numerator, BigInt::from(factorial(n)));
    Ok(WitnessReport {
        claim: Claim::LcmBound,
        params: vec![("a", a), ("b", b), ("n", n)],
        holds: lhs >= rhs,
        witness: Some(Witness::Bound { lhs, rhs }),
    })
}

/// Count of instances checked and the reports that failed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BatchOutcome {
    pub checked: u64,
    pub failures: Vec<WitnessReport>,
}

impl BatchOutcome {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }

    fn from_reports(reports: Vec<WitnessReport>) -> Self {
        BatchOutcome {
            checked: reports.len() as u64,
            failures: reports.into_iter().filter(|r| !r.holds).collect(),
        }
    }
}

/// Bertrand windows for `1 <= n <= n_max` (remark form for `2 <= n <= n_max`).
pub fn verify_bertrand(n_max: u64, remark: bool) -> BatchOutcome {
    let sieve = PrimeSieve::new(2 * n_max.max(1));
    let lo = if remark { 2 } else { 1 };
    let reports: Vec<_> = (lo..=n_max)
        .into_par_iter()
        .map(|n| check_bertrand(&sieve, n, remark).expect("range respects preconditions"))
        .collect();
    BatchOutcome::from_reports(reports)
}

/// Prime-window lemma for `1 <= k <= k_max`, `k < n <= k + span`.
pub fn verify_prime_window(k_max: u64, span: u64) -> BatchOutcome {
    let cases: Vec<(u64, u64)> = (1..=k_max)
        .flat_map(|k| (k + 1..=k + span).map(move |n| (n, k)))
        .collect();
    let reports = cases
        .into_par_iter()
        .map(|(n, k)| check_prime_window(n, k).expect("n > k"))
        .collect();
    BatchOutcome::from_reports(reports)
}

/// Large-prime-window lemma for `1 <= k <= k_max`, `(k+1)^2 <= n <= (k+1)^2 + span`.
pub fn verify_large_prime_window(k_max: u64, span: u64) -> BatchOutcome {
    let cases: Vec<(u64, u64)> = (1..=k_max)
        .flat_map(|k| {
            let lo = (k + 1) * (k + 1);
            (lo..=lo + span).map(move |n| (n, k))
        })
        .collect();
    let reports = cases
        .into_par_iter()
        .map(|(n, k)| check_large_prime_window(n, k).expect("n >= (k+1)^2"))
        .collect();
    BatchOutcome::from_reports(reports)
}

/// Lcm bound for coprime `1 <= a <= a_max`, `1 <= b <= b_max`, `0 <= n <= n_max`.
pub fn verify_lcm_bound(a_max: u64, b_max: u64, n_max: u64) -> BatchOutcome {
    let cases: Vec<(u64, u64, u64)> = (1..=a_max)
        .flat_map(|a| (1..=b_max).map(move |b| (a, b)))
        .filter(|(a, b)| a.gcd(b) == 1)
        .flat_map(|(a, b)| (0..=n_max).map(move |n| (a, b, n)))
        .collect();
    let reports = cases
        .into_par_iter()
        .map(|(a, b, n)| check_lcm_bound(a, b, n).expect("coprime"))
        .collect();
    BatchOutcome::from_reports(reports)
}
