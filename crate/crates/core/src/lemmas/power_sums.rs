//! Closed forms for even power sums over half of a window.
//!
//! For even `r` the sums run over `1..=r/2`; for odd `r` over the odd numbers
//! `1, 3, ..., r`. Both are the building blocks of the centered moments
//! `sum_{i=0}^{r} (i - r/2)^e` that appear in the Taylor expansion of `G`.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::kernel::{int, rat, ExactRational};

fn check_exponent(exponent: u32) -> Result<()> {
    match exponent {
        2 | 4 | 6 => Ok(()),
        e => Err(Error::UnsupportedExponent(e)),
    }
}

/// Numerator polynomial in `m = r + 1` shared by both parities.
fn numerator(m: &BigInt, exponent: u32) -> BigInt {
    match exponent {
        2 => m.pow(3) - m,
        4 => 3 * m.pow(5) - 10 * m.pow(3) + 7 * m,
        6 => 3 * m.pow(7) - 21 * m.pow(5) + 49 * m.pow(3) - 31 * m,
        _ => unreachable!(),
    }
}

pub fn power_sum_closed_form(r: u64, exponent: u32) -> Result<ExactRational> {
    check_exponent(exponent)?;
    let m = BigInt::from(r + 1);
    let denominator: u64 = match (r.is_multiple_of(2), exponent) {
        (true, 2) => 24,
        (true, 4) => 480,
        (true, 6) => 2688,
        (false, 2) => 6,
        (false, 4) => 30,
        (false, 6) => 42,
        _ => unreachable!(),
    };
    Ok(ExactRational::new(
        numerator(&m, exponent),
        denominator.into(),
    ))
}

/// The same sum by direct summation.
pub fn power_sum_direct(r: u64, exponent: u32) -> Result<ExactRational> {
    check_exponent(exponent)?;
    let total: BigInt = if r.is_multiple_of(2) {
        (1..=r / 2).map(|i| BigInt::from(i).pow(exponent)).sum()
    } else {
        (1..=r.div_ceil(2))
            .map(|i| BigInt::from(2 * i - 1).pow(exponent))
            .sum()
    };
    Ok(int(total))
}

/// `sum_{i=0}^{r} (i - r/2)^exponent`, exact.
pub fn centered_moment(r: u64, exponent: u32) -> ExactRational {
    (0..=r).fold(ExactRational::zero(), |acc, i| {
        acc + rat(2 * i as i64 - r as i64, 2).pow(exponent as i32)
    })
}

/// Closed form of [`centered_moment`] for `exponent` in `{2, 4, 6}`.
///
/// Twice the half-window sum for even `r`; `2^(1-exponent)` times the odd sum
/// for odd `r`. Both collapse to the numerator polynomial over 12, 240 and 1344.
pub fn moment_closed_form(r: u64, exponent: u32) -> Result<ExactRational> {
    check_exponent(exponent)?;
    let m = BigInt::from(r + 1);
    let denominator: u64 = match exponent {
        2 => 12,
        4 => 240,
        _ => 1344,
    };
    Ok(ExactRational::new(
        numerator(&m, exponent),
        denominator.into(),
    ))
}

/// Closed form equals direct sum for all `0 <= r <= r_max` and exponents 2, 4, 6.
/// Returns the first mismatching `(r, exponent)`, if any.
pub fn verify_power_sums(r_max: u64) -> (u64, Option<(u64, u32)>) {
    let mut checked = 0;
    for exponent in [2, 4, 6] {
        // incremental direct sums, one per parity
        let mut even = BigInt::zero();
        let mut odd = BigInt::zero();
        for r in 0..=r_max {
            if r % 2 == 0 {
                if r > 0 {
                    even += BigInt::from(r / 2).pow(exponent);
                }
            } else {
                odd += BigInt::from(r).pow(exponent);
            }
            let direct = if r % 2 == 0 { &even } else { &odd };
            checked += 1;
            if power_sum_closed_form(r, exponent).unwrap() != int(direct.clone()) {
                return (checked, Some((r, exponent)));
            }
        }
    }
    (checked, None)
}
