//! Exact arithmetic substrate: rationals, dyadic enclosures, primes and
//! valuations.

pub mod arith;
pub mod enclosure;
pub mod modular;
pub mod sieve;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use arith::{factorial, factorial_valuation, lcm_progression, p_adic_valuation, prime_factors};
pub use enclosure::{sqrt_enclosure, Dyadic, Enclosure};
pub use sieve::PrimeSieve;

/// Reduced fraction with a positive denominator; zero is `0/1`.
pub type ExactRational = BigRational;

pub fn rat(n: impl Into<BigInt>, d: impl Into<BigInt>) -> ExactRational {
    ExactRational::new(n.into(), d.into())
}

pub fn int(n: impl Into<BigInt>) -> ExactRational {
    ExactRational::from_integer(n.into())
}

/// `num/den` text form used in reports.
pub fn format_rational(x: &ExactRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn parse_rational(text: &str) -> Option<ExactRational> {
    let (n, d) = text.split_once('/')?;
    let d: BigInt = d.trim().parse().ok()?;
    if d == BigInt::from(0) {
        return None;
    }
    Some(ExactRational::new(n.trim().parse().ok()?, d))
}
