//! The integer identity every pair of equal sums must satisfy, its rational
//! rewritings, and a box search for its solutions.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;

use crate::kernel::{int, rat, ExactRational};
use crate::partial_sums::IntervalPair;

/// `(2a - 1)(2a + 2r + 1) + 1`, always even.
pub fn bracket(a: u64, r: u64) -> BigInt {
    let a = BigInt::from(a);
    (&a * 2u32 - 1u32) * (&a * 2u32 + BigInt::from(r) * 2u32 + 1u32) + 1u32
}

/// `a + r/2` as an exact half-integer.
pub fn center(a: u64, r: u64) -> ExactRational {
    rat(2 * a + r, 2)
}

/// `(r+1) * bracket(a2, s) == (s+1) * bracket(a1, r)`.
pub fn check_necessary_identity(pair: IntervalPair) -> bool {
    let (a1, r, a2, s) = pair.parts();
    bracket(a2, s) * (r + 1) == bracket(a1, r) * (s + 1)
}

/// `L = s(s+2)/(4(s+1)) - r(r+2)/(4(r+1))` with its two side checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LValue {
    pub value: ExactRational,
    /// Agrees with `(1/4)[s+1 - 1/(s+1) - (r+1) + 1/(r+1)]`.
    pub alternative_matches: bool,
    /// `L < (s+1)/4`.
    pub below_bound: bool,
}

pub fn compute_l(r: u64, s: u64) -> LValue {
    let value = rat(s * (s + 2), 4 * (s + 1)) - rat(r * (r + 2), 4 * (r + 1));
    let alternative = (int(s + 1) - rat(1, s + 1) - int(r + 1) + rat(1, r + 1)) / int(4);
    LValue {
        alternative_matches: alternative == value,
        below_bound: value < rat(s + 1, 4),
        value,
    }
}

/// `(a + r/2)^2 / (r+1) - (1/4)(r + 1 - 1/(r+1))`; both sides of the rational form agree iff the identity holds.
pub fn normalized_bracket(a: u64, r: u64) -> ExactRational {
    let c = center(a, r);
    &c * &c / int(r + 1) - (int(r + 1) - rat(1, r + 1)) / int(4)
}

/// Truth values of the three equivalent forms for one pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EquivalenceReport {
    /// Integer form.
    pub e11: bool,
    /// Normalized half-integer form.
    pub normalized: bool,
    /// `(s+1)/(a2+s/2)^2 = (r+1)/((a1+r/2)^2 + (r+1)L)`.
    pub center_ratio: bool,
}

impl EquivalenceReport {
    pub fn consistent(&self) -> bool {
        self.e11 == self.normalized && self.normalized == self.center_ratio
    }
}

pub fn check_identity_forms(pair: IntervalPair) -> EquivalenceReport {
    let (a1, r, a2, s) = pair.parts();
    let c1 = center(a1, r);
    let c2 = center(a2, s);
    let l = compute_l(r, s).value;
    let ratio_lhs = int(s + 1) / (&c2 * &c2);
    let ratio_rhs = int(r + 1) / (&c1 * &c1 + int(r + 1) * l);
    EquivalenceReport {
        e11: check_necessary_identity(pair),
        normalized: normalized_bracket(a1, r) == normalized_bracket(a2, s),
        center_ratio: ratio_lhs == ratio_rhs,
    }
}

/// All ordered `(a1, r, a2, s)` with `1 <= a1, a2 <= a_max`, `0 <= r, s <= r_max`
/// satisfying the integer identity, sorted. Includes `(a1, r) = (a2, s)`.
///
/// Windows are grouped by the reduced fraction `bracket(a, r) / (r + 1)`;
/// the identity holds exactly within a group.
pub fn e11_search(a_max: u64, r_max: u64) -> Vec<(u64, u64, u64, u64)> {
    let mut groups: HashMap<(u128, u128), Vec<(u64, u64)>> = HashMap::new();
    for a in 1..=a_max {
        for r in 0..=r_max {
            let b = (2 * a as u128 - 1) * (2 * a as u128 + 2 * r as u128 + 1) + 1;
            let d = r as u128 + 1;
            let g = b.gcd(&d);
            groups.entry((b / g, d / g)).or_default().push((a, r));
        }
    }
    let mut out: Vec<(u64, u64, u64, u64)> = groups
        .values()
        .flat_map(|members| {
            members
                .iter()
                .flat_map(move |&(a1, r)| members.iter().map(move |&(a2, s)| (a1, r, a2, s)))
        })
        .collect();
    out.sort_unstable();
    out
}

/// Solutions of [`e11_search`] with `a1 + r < a2`.
pub fn disjoint_solutions(a_max: u64, r_max: u64) -> Vec<IntervalPair> {
    e11_search(a_max, r_max)
        .into_iter()
        .filter(|&(a1, r, a2, _)| a1 + r < a2)
        .map(|(a1, r, a2, s)| IntervalPair::from_parts(a1, r, a2, s).expect("a >= 1"))
        .collect()
}
