//! Dyadic numbers and outward-rounded enclosures.
//!
//! An [`Enclosure`] is a pair of dyadic bounds `m * 2^e`. Sums and differences
//! of dyadics are exact; products and quotients are computed exactly as
//! rationals and then rounded to a fixed number of fractional bits, with the
//! lower bound rounded toward minus infinity and the upper bound toward plus
//! infinity. Every operation therefore returns an enclosure of the true result.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::ExactRational;
use crate::error::{Error, Result};

/// `mantissa * 2^exponent`, kept with an odd mantissa (or zero with exponent 0).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mantissa: BigInt,
    exponent: i64,
}

impl Dyadic {
    pub fn new(mantissa: BigInt, exponent: i64) -> Self {
        if mantissa.is_zero() {
            return Self::zero();
        }
        let tz = mantissa.trailing_zeros().unwrap_or(0);
        Dyadic {
            mantissa: mantissa >> tz,
            exponent: exponent + tz as i64,
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            mantissa: BigInt::zero(),
            exponent: 0,
        }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Self::new(n.into(), 0)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn to_rational(&self) -> ExactRational {
        if self.exponent >= 0 {
            ExactRational::from_integer(&self.mantissa << self.exponent as usize)
        } else {
            ExactRational::new(
                self.mantissa.clone(),
                BigInt::one() << (-self.exponent) as usize,
            )
        }
    }

    /// Largest multiple of `2^-bits` that is `<= x`.
    pub fn floor_of(x: &ExactRational, bits: u32) -> Self {
        let scaled = x.numer() << bits as usize;
        Self::new(scaled.div_floor(x.denom()), -(bits as i64))
    }

    /// Smallest multiple of `2^-bits` that is `>= x`.
    pub fn ceil_of(x: &ExactRational, bits: u32) -> Self {
        let scaled = x.numer() << bits as usize;
        Self::new(
            num_integer::Integer::div_ceil(&scaled, x.denom()),
            -(bits as i64),
        )
    }

    fn aligned(&self, other: &Dyadic) -> (BigInt, BigInt, i64) {
        let e = self.exponent.min(other.exponent);
        let a = &self.mantissa << (self.exponent - e) as usize;
        let b = &other.mantissa << (other.exponent - e) as usize;
        (a, b, e)
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        let (a, b, e) = self.aligned(other);
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        let (a, b, e) = self.aligned(other);
        Dyadic::new(a - b, e)
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic::new(-&self.mantissa, self.exponent)
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic::new(
            &self.mantissa * &other.mantissa,
            self.exponent + other.exponent,
        )
    }

    /// Exact multiplication by `2^k`.
    pub fn shift(&self, k: i64) -> Dyadic {
        Dyadic::new(self.mantissa.clone(), self.exponent + k)
    }

    pub fn cmp_rational(&self, x: &ExactRational) -> Ordering {
        self.to_rational().cmp(x)
    }

    /// Lossy conversion for display purposes only.
    pub fn to_f64(&self) -> f64 {
        let bits = self.mantissa.bits() as i64;
        let shift = (bits - 60).max(0);
        let m: i64 = (&self.mantissa >> shift as usize).try_into().unwrap_or(0);
        m as f64 * 2f64.powi((self.exponent + shift) as i32)
    }

    /// Parses the `m*2^e` text form.
    pub fn parse(text: &str) -> Option<Dyadic> {
        let (m, e) = text.split_once("*2^")?;
        Some(Dyadic::new(m.trim().parse().ok()?, e.trim().parse().ok()?))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mantissa, self.exponent)
    }
}

/// Certified closed interval `[lo, hi]` with dyadic endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enclosure {
    lo: Dyadic,
    hi: Dyadic,
}

impl Enclosure {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Self {
        assert!(lo <= hi, "enclosure bounds out of order: [{lo}, {hi}]");
        Enclosure { lo, hi }
    }

    pub fn point(d: Dyadic) -> Self {
        Enclosure {
            lo: d.clone(),
            hi: d,
        }
    }

    /// Tightest enclosure of `x` on the grid `2^-bits`.
    pub fn of_rational(x: &ExactRational, bits: u32) -> Self {
        Enclosure {
            lo: Dyadic::floor_of(x, bits),
            hi: Dyadic::ceil_of(x, bits),
        }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn width(&self) -> ExactRational {
        self.hi.sub(&self.lo).to_rational()
    }

    /// `width <= 2^-bits`.
    pub fn width_at_most(&self, bits: i64) -> bool {
        let w = self.hi.sub(&self.lo);
        if w.mantissa.is_zero() {
            return true;
        }
        // w = m * 2^e <= 2^-bits  <=>  m <= 2^(-bits - e)
        let k = -bits - w.exponent;
        if k < 0 {
            return false;
        }
        w.mantissa <= (BigInt::one() << k as usize)
    }

    pub fn contains(&self, x: &ExactRational) -> bool {
        self.lo.cmp_rational(x) != Ordering::Greater && self.hi.cmp_rational(x) != Ordering::Less
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.mantissa.is_positive() && !self.hi.mantissa.is_negative()
    }

    /// Every point of `self` is strictly below every point of `other`.
    pub fn strictly_below(&self, other: &Enclosure) -> bool {
        self.hi < other.lo
    }

    pub fn strictly_above_rational(&self, x: &ExactRational) -> bool {
        self.lo.cmp_rational(x) == Ordering::Greater
    }

    pub fn strictly_below_rational(&self, x: &ExactRational) -> bool {
        self.hi.cmp_rational(x) == Ordering::Less
    }

    pub fn is_subset_of(&self, other: &Enclosure) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// Intersection of two enclosures of the same quantity; never wider than either.
    pub fn refine(&self, other: &Enclosure) -> Option<Enclosure> {
        let lo = (&self.lo).max(&other.lo).clone();
        let hi = (&self.hi).min(&other.hi).clone();
        (lo <= hi).then_some(Enclosure { lo, hi })
    }

    pub fn add(&self, other: &Enclosure) -> Enclosure {
        Enclosure {
            lo: self.lo.add(&other.lo),
            hi: self.hi.add(&other.hi),
        }
    }

    pub fn sub(&self, other: &Enclosure) -> Enclosure {
        Enclosure {
            lo: self.lo.sub(&other.hi),
            hi: self.hi.sub(&other.lo),
        }
    }

    pub fn neg(&self) -> Enclosure {
        Enclosure {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
        }
    }

    /// Adds an exact rational, rounding the result outward to `bits`.
    pub fn add_rational(&self, x: &ExactRational, bits: u32) -> Enclosure {
        let lo = self.lo.to_rational() + x;
        let hi = self.hi.to_rational() + x;
        Enclosure {
            lo: Dyadic::floor_of(&lo, bits),
            hi: Dyadic::ceil_of(&hi, bits),
        }
    }

    /// Product, rounded outward to `bits` fractional bits.
    pub fn mul(&self, other: &Enclosure, bits: u32) -> Enclosure {
        let products = [
            self.lo.mul(&other.lo),
            self.lo.mul(&other.hi),
            self.hi.mul(&other.lo),
            self.hi.mul(&other.hi),
        ];
        let lo = products.iter().min().unwrap();
        let hi = products.iter().max().unwrap();
        Enclosure {
            lo: round_down(lo, bits),
            hi: round_up(hi, bits),
        }
    }

    pub fn scale(&self, k: &ExactRational, bits: u32) -> Enclosure {
        let a = self.lo.to_rational() * k;
        let b = self.hi.to_rational() * k;
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        Enclosure {
            lo: Dyadic::floor_of(&lo, bits),
            hi: Dyadic::ceil_of(&hi, bits),
        }
    }

    pub fn square(&self, bits: u32) -> Enclosure {
        if self.contains_zero() {
            let a = self.lo.mul(&self.lo);
            let b = self.hi.mul(&self.hi);
            Enclosure {
                lo: Dyadic::zero(),
                hi: round_up(&a.max(b), bits),
            }
        } else {
            self.mul(self, bits)
        }
    }

    /// `1 / self`, rounded outward; fails if the enclosure contains zero.
    pub fn recip(&self, bits: u32) -> Option<Enclosure> {
        if self.contains_zero() {
            return None;
        }
        let lo = self.hi.to_rational().recip();
        let hi = self.lo.to_rational().recip();
        Some(Enclosure {
            lo: Dyadic::floor_of(&lo, bits),
            hi: Dyadic::ceil_of(&hi, bits),
        })
    }
}

fn round_down(d: &Dyadic, bits: u32) -> Dyadic {
    if d.exponent >= -(bits as i64) {
        d.clone()
    } else {
        Dyadic::floor_of(&d.to_rational(), bits)
    }
}

fn round_up(d: &Dyadic, bits: u32) -> Dyadic {
    if d.exponent >= -(bits as i64) {
        d.clone()
    } else {
        Dyadic::ceil_of(&d.to_rational(), bits)
    }
}

/// Certified enclosure of `sqrt(x)` of width at most `2^-precision_bits`.
///
/// Computed as `floor(sqrt(floor(x * 4^k)))`, which equals `floor(sqrt(x) * 2^k)`.
/// When that grid point squares to `x` exactly the enclosure is degenerate.
pub fn sqrt_enclosure(x: &ExactRational, precision_bits: u32) -> Result<Enclosure> {
    if x.is_negative() {
        return Err(Error::NegativeSqrt);
    }
    let k = precision_bits as usize;
    let scaled = (x.numer() << (2 * k)).div_floor(x.denom());
    let root: BigUint = scaled
        .to_biguint()
        .expect("nonnegative after floor of a nonnegative rational")
        .sqrt();
    let lo = Dyadic::new(BigInt::from_biguint(Sign::Plus, root), -(k as i64));
    if &lo.mul(&lo).to_rational() == x {
        return Ok(Enclosure::point(lo));
    }
    let hi = lo.add(&Dyadic::new(BigInt::one(), -(k as i64)));
    Ok(Enclosure { lo, hi })
}
