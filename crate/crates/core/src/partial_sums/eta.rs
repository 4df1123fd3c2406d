//! Certified enclosures of `eps_n` and of the mean-value parameter `eta`.
//!
//! `eps_n = (2n + 1 - sqrt(4n^2 + 1)) / 2` is the unique number in `(0, 1/2)`
//! with `1/(n - eps_n) - 1/(n + 1 - eps_n) = 1/n^2`. For a window `(a, r)` with
//! sum `S`, `eta` is the root in `(eps_a, eps_{a+r})` of
//! `S*eta^2 - S*(2a+r+1)*eta + S*a*(a+r+1) - (r+1) = 0`, equivalently
//! `S = (r+1) / ((a+r+1-eta)(a-eta))`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::{g_exact, Interval};
use crate::certify::Certification;
use crate::error::{Error, Result};
use crate::kernel::{int, rat, sqrt_enclosure, Dyadic, Enclosure, ExactRational};

/// Enclosure of `eps_n` of width at most `2^-precision_bits`, strictly inside `(0, 1/2)`.
pub fn epsilon(n: u64, precision_bits: u32) -> Enclosure {
    assert!(n >= 1, "eps_n is defined for n >= 1");
    let radicand = int(BigInt::from(n) * n * 4u32 + 1u32);
    let top = Dyadic::from_int(2 * n + 1);
    let half = Dyadic::new(BigInt::one(), -1);
    let mut k = precision_bits + 2;
    loop {
        let root = sqrt_enclosure(&radicand, k - 1).expect("radicand is positive");
        let lo = top.sub(root.hi()).shift(-1);
        let hi = top.sub(root.lo()).shift(-1);
        if lo > Dyadic::zero() && hi < half {
            return Enclosure::new(lo, hi);
        }
        // sqrt(4n^2+1) - 2n ~ 1/(4n) needs about log2(n) extra bits to separate from 1/2
        k += 16;
    }
}

/// Checks `1/(n - eps_n) - 1/(n + 1 - eps_n) = 1/n^2` in enclosure arithmetic.
///
/// Certified when the enclosure of the difference contains zero and is no wider
/// than `2^(4 - precision_bits)`. Outward rounding means a true identity is
/// never refuted; a width failure is reported as inconclusive.
pub fn telescope_check(n: u64, precision_bits: u32) -> Certification {
    let work = precision_bits + 16;
    let eps = epsilon(n, work);
    let n_enc = Enclosure::point(Dyadic::from_int(n));
    let n1_enc = Enclosure::point(Dyadic::from_int(n + 1));
    let left = n_enc.sub(&eps).recip(work).expect("n - eps_n > 1/2");
    let right = n1_enc.sub(&eps).recip(work).expect("n + 1 - eps_n > 1");
    let diff = left
        .sub(&right)
        .add_rational(&-rat(1, BigInt::from(n) * n), work);
    if !diff.contains_zero() {
        Certification::Refuted
    } else if diff.width_at_most(precision_bits as i64 - 4) {
        Certification::Certified
    } else {
        Certification::Inconclusive
    }
}

/// Result of [`solve_eta`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaSolution {
    pub interval: Interval,
    pub eta: Enclosure,
    /// `[c2, c1, c0]` of `c2*eta^2 + c1*eta + c0 = 0`.
    pub quadratic: [ExactRational; 3],
    pub eps_start: Enclosure,
    pub eps_end: Enclosure,
    pub precision_bits: u32,
}

/// The quadratic scaled to integer coefficients: `S = num/den` times `den`.
struct IntQuadratic {
    c2: BigInt,
    c1: BigInt,
    c0: BigInt,
}

impl IntQuadratic {
    fn new(interval: Interval, sum: &ExactRational) -> Self {
        let a = BigInt::from(interval.start());
        let r = BigInt::from(interval.extent());
        let num = sum.numer();
        let den = sum.denom();
        let linear = &a * 2u32 + &r + 1u32;
        let constant = &a * (&a + &r + 1u32);
        IntQuadratic {
            c2: num.clone(),
            c1: -(num * linear),
            c0: num * constant - (r + 1u32) * den,
        }
    }

    /// Sign of the quadratic at `m / 2^k`.
    fn sign_at(&self, m: &BigInt, k: u64) -> Ordering {
        let value = &self.c2 * m * m + ((&self.c1 * m) << k) + (&self.c0 << (2 * k));
        value.sign_cmp()
    }
}

trait SignCmp {
    fn sign_cmp(&self) -> Ordering;
}

impl SignCmp for BigInt {
    fn sign_cmp(&self) -> Ordering {
        if self.is_positive() {
            Ordering::Greater
        } else if self.is_negative() {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
}

/// `(m, k)` with `d = m / 2^k` and `k >= bits`.
fn on_grid(d: &Dyadic, k: u64) -> BigInt {
    let shift = d.exponent() + k as i64;
    assert!(shift >= 0);
    d.mantissa() << shift as usize
}

/// Certified enclosure of `eta` for the window, by bisection with exact signs.
///
/// The bracket is `[lo(eps_a), hi(eps_{a+r})]`; the quadratic is decreasing
/// there, so it must be positive at the left end and negative at the right end.
pub fn solve_eta(interval: Interval, precision_bits: u32) -> Result<EtaSolution> {
    let sum = g_exact(interval);
    let a = interval.start();
    let r = interval.extent();
    let quad = IntQuadratic::new(interval, &sum);
    let eps_bits = precision_bits + 8;
    let eps_start = epsilon(a, eps_bits);
    let eps_end = epsilon(a + r, eps_bits);

    let mut k = (-eps_start.lo().exponent())
        .max(-eps_end.hi().exponent())
        .max(precision_bits as i64) as u64;
    let mut left = on_grid(eps_start.lo(), k);
    let mut right = on_grid(eps_end.hi(), k);

    let no_sign_change = || Error::NoSignChange {
        a,
        r,
        lo: eps_start.lo().to_string(),
        hi: eps_end.hi().to_string(),
    };
    let eta = match (quad.sign_at(&left, k), quad.sign_at(&right, k)) {
        (Ordering::Equal, _) => Enclosure::point(Dyadic::new(left, -(k as i64))),
        (_, Ordering::Equal) => Enclosure::point(Dyadic::new(right, -(k as i64))),
        (Ordering::Greater, Ordering::Less) => {
            let target = |k: u64| BigInt::one() << (k - precision_bits as u64) as usize;
            let mut found = None;
            while &right - &left > target(k) {
                left <<= 1;
                right <<= 1;
                k += 1;
                let mid: BigInt = (&left + &right) >> 1;
                match quad.sign_at(&mid, k) {
                    Ordering::Greater => left = mid,
                    Ordering::Less => right = mid,
                    Ordering::Equal => {
                        found = Some(mid);
                        break;
                    }
                }
            }
            match found {
                Some(m) => Enclosure::point(Dyadic::new(m, -(k as i64))),
                None => Enclosure::new(
                    Dyadic::new(left, -(k as i64)),
                    Dyadic::new(right, -(k as i64)),
                ),
            }
        }
        _ => return Err(no_sign_change()),
    };

    let c2 = sum.clone();
    let c1 = -(&sum * int(2 * a + r + 1));
    let c0 = &sum * int(a * (a + r + 1)) - int(r + 1);
    Ok(EtaSolution {
        interval,
        eta,
        quadratic: [c2, c1, c0],
        eps_start,
        eps_end,
        precision_bits,
    })
}

/// Verdicts for the three unconditional bands on `x = 1 - 2*eta`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EtaBands {
    /// `1/(4(a+r)+1) < x < 2/(4a+1)`.
    pub q_band: Certification,
    /// `(4a+2r)x - 1 + x^2 > -(2r+1)/(4(a+r))`.
    pub lower: Certification,
    /// `(4a+2r)x - 1 + x^2 < (2r+1)/(4(a+r))`.
    pub upper: Certification,
}

impl EtaBands {
    pub fn all(&self) -> Certification {
        self.q_band.and(self.lower).and(self.upper)
    }
}

fn strict_between(value: &Enclosure, lo: &ExactRational, hi: &ExactRational) -> Certification {
    if value.strictly_above_rational(lo) && value.strictly_below_rational(hi) {
        Certification::Certified
    } else if value.hi().cmp_rational(lo) != Ordering::Greater
        || value.lo().cmp_rational(hi) != Ordering::Less
    {
        Certification::Refuted
    } else {
        Certification::Inconclusive
    }
}

fn strict_above(value: &Enclosure, bound: &ExactRational) -> Certification {
    if value.strictly_above_rational(bound) {
        Certification::Certified
    } else if value.hi().cmp_rational(bound) != Ordering::Greater {
        Certification::Refuted
    } else {
        Certification::Inconclusive
    }
}

fn strict_below(value: &Enclosure, bound: &ExactRational) -> Certification {
    strict_above(&value.neg(), &-bound)
}

impl EtaSolution {
    /// `eps_a < eta < eps_{a+r}` with disjoint enclosures.
    pub fn strictly_inside(&self) -> bool {
        self.eps_start.strictly_below(&self.eta) && self.eta.strictly_below(&self.eps_end)
    }

    /// `eta` lies in its bracket: strictly inside for `r > 0`; for `r = 0`
    /// the quadratic is the defining equation of `eps_a`, so the two
    /// enclosures must meet.
    pub fn bracketed(&self) -> bool {
        if self.interval.extent() == 0 {
            self.eta.refine(&self.eps_start).is_some()
        } else {
            self.strictly_inside()
        }
    }

    /// Enclosure of `1 - 2*eta`.
    pub fn one_minus_two_eta(&self) -> Enclosure {
        let one = Enclosure::point(Dyadic::from_int(1));
        one.sub(&Enclosure::new(
            self.eta.lo().shift(1),
            self.eta.hi().shift(1),
        ))
    }

    /// Enclosure of `(4a + 2r)(1 - 2eta) - 1 + (1 - 2eta)^2`.
    pub fn bracket_defect(&self) -> Enclosure {
        let a = self.interval.start();
        let r = self.interval.extent();
        let x = self.one_minus_two_eta();
        let bits = self.precision_bits + 16;
        x.scale(&int(4 * a + 2 * r), bits)
            .add(&x.square(bits))
            .add_rational(&int(-1), bits)
    }

    /// Each band bound derived from `eps_a < eta < eps_{a+r}`.
    pub fn bands(&self) -> EtaBands {
        let a = self.interval.start();
        let r = self.interval.extent();
        let x = self.one_minus_two_eta();
        let defect = self.bracket_defect();
        let margin = rat(2 * r + 1, 4 * (a + r));
        EtaBands {
            q_band: strict_between(&x, &rat(1, 4 * (a + r) + 1), &rat(2, 4 * a + 1)),
            lower: strict_above(&defect, &-margin.clone()),
            upper: strict_below(&defect, &margin),
        }
    }

    /// Exact value of the quadratic at `x`.
    pub fn residual_at(&self, x: &ExactRational) -> ExactRational {
        let [c2, c1, c0] = &self.quadratic;
        c2 * x * x + c1 * x + c0
    }
}

/// Bands for `(a, r)`, raising precision along the ladder while any is inconclusive.
pub fn certify_bands(interval: Interval, start_bits: u32) -> Result<(EtaSolution, EtaBands)> {
    let mut bits = start_bits;
    loop {
        let sol = solve_eta(interval, bits)?;
        let bands = sol.bands();
        if bands.all() != Certification::Inconclusive || bits >= crate::certify::MAX_PRECISION {
            return Ok((sol, bands));
        }
        bits *= 2;
    }
}
