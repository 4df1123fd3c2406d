//! Valuations, factorial valuations and lcm of arithmetic progressions.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;

use super::modular::is_prime_u64;
use crate::error::{Error, Result};

fn require_prime(p: u64) -> Result<()> {
    if is_prime_u64(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// Largest `e` with `p^e | n`.
pub fn p_adic_valuation(n: u64, p: u64) -> Result<u32> {
    require_prime(p)?;
    if n == 0 {
        return Err(Error::NonPositive("n"));
    }
    let mut n = n;
    let mut e = 0;
    while n.is_multiple_of(p) {
        n /= p;
        e += 1;
    }
    Ok(e)
}

/// `v_p(n!)` by Legendre's formula, the sum of `floor(n / p^i)` over `i >= 1`.
pub fn factorial_valuation(n: u64, p: u64) -> Result<u64> {
    require_prime(p)?;
    let mut total = 0;
    let mut q = n / p;
    while q > 0 {
        total += q;
        q /= p;
    }
    Ok(total)
}

/// Exact `lcm{a, a+b, ..., a+nb}`.
pub fn lcm_progression(a: u64, b: u64, n: u64) -> Result<BigUint> {
    if a == 0 {
        return Err(Error::NonPositive("a"));
    }
    if b == 0 {
        return Err(Error::NonPositive("b"));
    }
    let mut acc = BigUint::one();
    for i in 0..=n {
        let term = BigUint::from(a) + BigUint::from(b) * BigUint::from(i);
        acc = acc.lcm(&term);
    }
    Ok(acc)
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// Prime factors of `n` in increasing order, by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}
