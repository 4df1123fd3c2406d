//! Splitting `G(a1, r) - G(a2, s)` into closed-form Taylor terms.
//!
//! Expanding `1/(a+i)^2` around the window center `a + r/2` and summing, the
//! odd terms cancel and the even ones reduce to centered moments with closed
//! forms. The difference of the two expansions is written as `R1 + ... + R7`:
//! `R1..R6` are explicit rationals (the centers are half-integers) and `R7`
//! collects the rest, which this module defines as the exact residual.

use num_traits::{Signed, Zero};

use super::diophantine::{center, check_necessary_identity, compute_l};
use super::power_sums::{centered_moment, moment_closed_form};
use crate::certify::{with_ladder, Certification};
use crate::error::{Error, Result};
use crate::kernel::{int, rat, ExactRational};
use crate::partial_sums::{g_exact, solve_eta, IntervalPair};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionReport {
    pub pair: IntervalPair,
    pub l: ExactRational,
    /// `R1, ..., R7`; `R7` is the residual.
    pub r_terms: [ExactRational; 7],
    /// Closed-form eighth-order part of `R7`; the rest is the Taylor remainder.
    pub r7_explicit: ExactRational,
    /// `G(a1, r) - G(a2, s)`.
    pub difference: ExactRational,
    /// `sum R_i == difference`.
    pub identity_holds: bool,
    /// Centered moments of both windows equal their closed forms.
    pub moments_match: bool,
    pub e11: bool,
    /// Rewritten partial sums, checked only when the integer identity holds.
    pub rewrites: Option<RewriteChecks>,
}

impl DecompositionReport {
    pub fn partial_sum(&self, upto: usize) -> ExactRational {
        self.r_terms[..upto]
            .iter()
            .fold(ExactRational::zero(), |acc, t| acc + t)
    }
}

/// Which rewritten forms of `R1 + ... + Rk` agree exactly with the direct sums.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RewriteChecks {
    pub r1: bool,
    pub r1_r2: bool,
    pub r1_r3: bool,
    pub r1_r4: bool,
    pub r1_r5: bool,
    /// `L(L + r(r+2)/(2(r+1))) = (1/16)[(s+1)^2 - (r+1)^2 + 1/(s+1)^2 - 1/(r+1)^2]`.
    pub l_product: bool,
}

impl RewriteChecks {
    pub fn all(&self) -> bool {
        self.r1 && self.r1_r2 && self.r1_r3 && self.r1_r4 && self.r1_r5 && self.l_product
    }
}

/// Shared quantities of one pair.
struct Terms {
    p: ExactRational,
    q: ExactRational,
    c1: ExactRational,
    c2: ExactRational,
    l: ExactRational,
}

impl Terms {
    fn new(pair: IntervalPair) -> Self {
        let (a1, r, a2, s) = pair.parts();
        Terms {
            p: int(r + 1),
            q: int(s + 1),
            c1: center(a1, r),
            c2: center(a2, s),
            l: compute_l(r, s).value,
        }
    }
}

fn pw(x: &ExactRational, e: i32) -> ExactRational {
    x.pow(e)
}

/// `(s+1)^3 / c2^6`, the common factor of the higher rewrites.
fn rewrites(t: &Terms, r: u64, direct: &[ExactRational; 7]) -> RewriteChecks {
    let Terms { p, q, c1, c2, l } = t;
    let k = rat(r * (r + 2), 4 * (r + 1));
    let sum = |n: usize| direct[..n].iter().fold(ExactRational::zero(), |a, x| a + x);

    let r1 = p * l / pw(c1, 2) * q / pw(c2, 2);
    let l2_term = &k * pw(q, 2) * pw(p, 2) * pw(l, 2) / (pw(c2, 4) * pw(c1, 4));
    let r12 = l * (l + int(2) * &k) * pw(q, 2) * p / (pw(c2, 4) * pw(c1, 2)) + &l2_term;

    let base4 = (pw(q, -2) - pw(p, -2)) / int(16) * pw(q, 2) * p / (pw(c2, 4) * pw(c1, 2));
    let diff_sq = (pw(q, 2) - pw(p, 2)) / int(16) * pw(q, 3) * p * l / (pw(c2, 6) * pw(c1, 2));
    let f1 = pw(q, 3) * p * l / (pw(c2, 6) * pw(c1, 2));
    let f2 = pw(q, 3) * pw(p, 2) * pw(l, 2) / (pw(c2, 6) * pw(c1, 4));
    let f3 = pw(q, 3) * pw(p, 3) * pw(l, 3) / (pw(c2, 6) * pw(c1, 6));
    let three_p2 = int(3) * pw(p, 2) / int(16);
    let r123 =
        &base4 + &diff_sq + &l2_term + &three_p2 * &f1 + &three_p2 * &f2 + pw(p, 2) / int(16) * &f3;
    let r1234 = &base4
        + &diff_sq
        + &l2_term
        + (&three_p2 - rat(5, 8)) * &f1
        + (&three_p2 - rat(5, 8)) * &f2
        + (pw(p, 2) / int(16) - rat(5, 24)) * &f3;
    let coeff1 = pw(q, 2) + int(2) * pw(p, 2) - int(10) + int(6) / pw(p, 2) + pw(q, -2);
    let coeff2 = &three_p2 - rat(5, 8) + rat(7, 16) / pw(p, 2);
    let coeff3 = pw(p, 2) / int(16) - rat(5, 24) + rat(7, 48) / pw(p, 2);
    let r12345 = (pw(p, -2) - pw(q, -2)) / int(12) * pw(q, 3) / pw(c2, 6)
        + coeff1 / int(16) * &f1
        + &l2_term
        + coeff2 * &f2
        + coeff3 * &f3;

    let l_product =
        l * (l + int(2) * &k) == (pw(q, 2) - pw(p, 2) + pw(q, -2) - pw(p, -2)) / int(16);
    RewriteChecks {
        r1: r1 == direct[0],
        r1_r2: r12 == sum(2),
        r1_r3: r123 == sum(3),
        r1_r4: r1234 == sum(4),
        r1_r5: r12345 == sum(5),
        l_product,
    }
}

/// Exact `R1..R7` for a disjoint pair `a1 + r < a2`.
pub fn taylor_decompose(pair: IntervalPair) -> Result<DecompositionReport> {
    if !pair.is_disjoint() {
        return Err(Error::NotDisjoint(format!(
            "need a1 + r < a2, got {pair}; reduce the overlap first"
        )));
    }
    let (_, r, _, s) = pair.parts();
    let t = Terms::new(pair);
    let Terms { p, q, c1, c2, .. } = &t;

    let r1 = p / pw(c1, 2) - q / pw(c2, 2);
    let r2 = (pw(p, 3) - p) / (int(4) * pw(c1, 4)) - (pw(q, 3) - q) / (int(4) * pw(c2, 4));
    let r3 = pw(p, 5) / (int(16) * pw(c1, 6)) - pw(q, 5) / (int(16) * pw(c2, 6));
    let r4 = rat(5, 24) * (pw(q, 3) / pw(c2, 6) - pw(p, 3) / pw(c1, 6));
    let r5 = rat(7, 48) * (p / pw(c1, 6) - q / pw(c2, 6));
    let r6 = (pw(p, 7) / pw(c1, 8) - pw(q, 7) / pw(c2, 8)) / int(64);
    let eighth = |m: &ExactRational| int(21) * pw(m, 5) - int(49) * pw(m, 3) + int(31) * m;
    let r7_explicit = eighth(q) / (int(192) * pw(c2, 8)) - eighth(p) / (int(192) * pw(c1, 8));

    let difference = g_exact(pair.first()) - g_exact(pair.second());
    let explicit = &r1 + &r2 + &r3 + &r4 + &r5 + &r6;
    let r7 = &difference - &explicit;
    let r_terms = [r1, r2, r3, r4, r5, r6, r7];
    let identity_holds = r_terms.iter().fold(ExactRational::zero(), |a, x| a + x) == difference;

    let moments_match = [r, s].iter().all(|&m| {
        [2, 4, 6]
            .iter()
            .all(|&e| moment_closed_form(m, e).map(|c| c == centered_moment(m, e)) == Ok(true))
    });
    let e11 = check_necessary_identity(pair);
    let rewrites = e11.then(|| rewrites(&t, r, &r_terms));

    Ok(DecompositionReport {
        pair,
        l: t.l,
        r_terms,
        r7_explicit,
        difference,
        identity_holds,
        moments_match,
        e11,
        rewrites,
    })
}

/// Each intermediate bound of the positivity argument, evaluated exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChainBounds {
    /// `R1+..+R5 > (s-r) / (6 c2^6)`.
    pub r1_to_r5: bool,
    /// `R6 > (r-s) / (512 c2^6)`.
    pub r6: bool,
    /// `R1+..+R6 > (s-r) / (7 c2^6)`.
    pub r1_to_r6: bool,
    /// `(r+1)L / c1^2 < 1/63`.
    pub l_ratio: bool,
    /// `c2 / a2 < 1 + 1/64`.
    pub center_ratio: bool,
    /// `R7 > -7(r+1)^5/(64 c1^8) - (s+1)^9/(256 a2^10)`.
    pub r7_first: bool,
    /// `R7 > -7/(512(s+1) c2^6) - 1/(32768 (s+1)^3 c2^10)`.
    pub r7: bool,
    /// `(s-r)/(7 c2^6) - 7/(512(s+1) c2^6) - 1/(32768 (s+1)^3 c2^10) > 0`.
    pub combined: bool,
    /// `G(a1, r) - G(a2, s) > 0`.
    pub difference_positive: bool,
}

impl ChainBounds {
    pub fn all(&self) -> bool {
        self.r1_to_r5
            && self.r6
            && self.r1_to_r6
            && self.l_ratio
            && self.center_ratio
            && self.r7_first
            && self.r7
            && self.combined
            && self.difference_positive
    }
}

/// Evaluates every chain bound on `report` without checking the hypotheses.
///
/// Diagnostic only: the bounds are claimed under the full hypothesis set,
/// which [`check_positivity_chain`] enforces.
pub fn chain_bounds(report: &DecompositionReport) -> ChainBounds {
    let (_, r, a2, s) = report.pair.parts();
    let t = Terms::new(report.pair);
    let Terms { p, q, c1, c2, l } = &t;
    let gap = int(s as i64 - r as i64);
    let c2_6 = pw(c2, 6);
    let s5 = report.partial_sum(5);
    let s6 = report.partial_sum(6);
    let r7 = &report.r_terms[6];
    let r7_final_bound =
        -(int(7) / (int(512) * q * &c2_6)) - int(1) / (int(32768) * pw(q, 3) * pw(c2, 10));
    let r7_first_bound =
        -(int(7) * pw(p, 5) / (int(64) * pw(c1, 8))) - pw(q, 9) / (int(256) * pw(&int(a2), 10));
    ChainBounds {
        r1_to_r5: s5 > &gap / (int(6) * &c2_6),
        r6: report.r_terms[5] > -&gap / (int(512) * &c2_6),
        r1_to_r6: s6 > &gap / (int(7) * &c2_6),
        l_ratio: p * l / pw(c1, 2) < rat(1, 63),
        center_ratio: c2 / int(a2) < rat(65, 64),
        r7_first: *r7 > r7_first_bound,
        r7: *r7 > r7_final_bound,
        combined: &gap / (int(7) * &c2_6) + &r7_final_bound > ExactRational::zero(),
        difference_positive: report.difference.is_positive(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChainOutcome {
    /// Hypotheses hold; every bound evaluated exactly.
    Evaluated {
        report: Box<DecompositionReport>,
        bounds: ChainBounds,
    },
    /// Some hypothesis failed; the chain was not evaluated. `sums_distinct`
    /// is the exact fallback comparison `G(a1, r) != G(a2, s)`.
    Rejected {
        failed: Vec<&'static str>,
        sums_distinct: bool,
    },
}

pub const HYP_DISJOINT: &str = "a2 > a1 + r";
pub const HYP_LONGER: &str = "s > r";
pub const HYP_E11: &str = "e11";
pub const HYP_FAR: &str = "a2 >= 4(s+1)^3";

/// Certifies the positivity chain under its hypotheses: disjoint windows,
/// `s > r`, the integer identity, and `a2 >= 4(s+1)^3`.
pub fn check_positivity_chain(pair: IntervalPair) -> ChainOutcome {
    let (a1, r, a2, s) = pair.parts();
    let mut failed = Vec::new();
    if a2 <= a1 + r {
        failed.push(HYP_DISJOINT);
    }
    if s <= r {
        failed.push(HYP_LONGER);
    }
    if !check_necessary_identity(pair) {
        failed.push(HYP_E11);
    }
    if (a2 as u128) < 4 * (s as u128 + 1).pow(3) {
        failed.push(HYP_FAR);
    }
    if !failed.is_empty() {
        return ChainOutcome::Rejected {
            failed,
            sums_distinct: g_exact(pair.first()) != g_exact(pair.second()),
        };
    }
    let report = taylor_decompose(pair).expect("disjointness checked above");
    let bounds = chain_bounds(&report);
    ChainOutcome::Evaluated {
        report: Box::new(report),
        bounds,
    }
}

/// Unconditional bracket identity
/// `(s+1)A1 - (r+1)A2 = (r+1)B2 - (s+1)B1 + 4(r+1)(s+1)(1/G1 - 1/G2)`,
/// where `Aj = (4a+2r)(1-2eta) - 1 + (1-2eta)^2` is enclosed from `eta` and
/// `Bj = (2a-1)(2a+2r+1) + 1`.
///
/// Certified when the enclosure of the difference of both sides contains zero
/// and is no wider than `2^(-bits/2)`.
pub fn check_bracket_identity(pair: IntervalPair, precision_bits: u32) -> Result<Certification> {
    let (a1, r, a2, s) = pair.parts();
    let eta1 = solve_eta(pair.first(), precision_bits)?;
    let eta2 = solve_eta(pair.second(), precision_bits)?;
    let work = precision_bits + 16;
    let lhs = eta1
        .bracket_defect()
        .scale(&int(s + 1), work)
        .sub(&eta2.bracket_defect().scale(&int(r + 1), work));
    let b1 = int(super::diophantine::bracket(a1, r));
    let b2 = int(super::diophantine::bracket(a2, s));
    let g1 = g_exact(pair.first());
    let g2 = g_exact(pair.second());
    let rhs =
        int(r + 1) * b2 - int(s + 1) * b1 + int(4 * (r + 1) * (s + 1)) * (g1.recip() - g2.recip());
    let diff = lhs.add_rational(&-rhs, work);
    Ok(if !diff.contains_zero() {
        Certification::Refuted
    } else if diff.width_at_most(precision_bits as i64 / 2) {
        Certification::Certified
    } else {
        Certification::Inconclusive
    })
}

/// [`check_bracket_identity`] along the precision ladder.
pub fn certify_bracket_identity(
    pair: IntervalPair,
    start_bits: u32,
) -> Result<(Certification, u32)> {
    let mut err = None;
    let out = with_ladder(start_bits, |bits| {
        match check_bracket_identity(pair, bits) {
            Ok(v) => v,
            Err(e) => {
                err = Some(e);
                Certification::Refuted
            }
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Where the three coefficient positivity facts fail on `0 <= r, s <= max`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SignFacts {
    /// `(s+1)^2 + 2(r+1)^2 - 10 + 6/(r+1)^2 + 1/(s+1)^2 > 0` fails at these `(r, s)`.
    pub first_failures: Vec<(u64, u64)>,
    /// `3(r+1)^2/16 - 5/8 + 7/(16(r+1)^2) > 0` fails at these `r`.
    pub second_failures: Vec<u64>,
    /// `(r+1)^2/16 - 5/24 + 7/(48(r+1)^2) > 0` fails at these `r`.
    pub third_failures: Vec<u64>,
    pub checked_pairs: u64,
}

pub fn sign_facts(max: u64) -> SignFacts {
    let mut out = SignFacts::default();
    for r in 0..=max {
        let p2 = int((r + 1) * (r + 1));
        let second = int(3) * &p2 / int(16) - rat(5, 8) + rat(7, 16) / &p2;
        if !second.is_positive() {
            out.second_failures.push(r);
        }
        let third = &p2 / int(16) - rat(5, 24) + rat(7, 48) / &p2;
        if !third.is_positive() {
            out.third_failures.push(r);
        }
        let fixed = int(2) * &p2 - int(10) + int(6) / &p2;
        for s in 0..=max {
            let q2 = int((s + 1) * (s + 1));
            let first = &q2 + &fixed + q2.recip();
            if !first.is_positive() {
                out.first_failures.push((r, s));
            }
            out.checked_pairs += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lemmas::diophantine::disjoint_solutions;

    fn pair(a1: u64, r: u64, a2: u64, s: u64) -> IntervalPair {
        IntervalPair::from_parts(a1, r, a2, s).unwrap()
    }

    #[test]
    fn single_terms() {
        let rep = taylor_decompose(pair(1, 0, 2, 0)).unwrap();
        assert_eq!(rep.difference, rat(3, 4));
        assert_eq!(rep.r_terms[1], int(0));
        // direct evaluation of each display formula with c1 = 1, c2 = 2
        assert_eq!(rep.r_terms[0], int(1) - rat(1, 4));
        assert_eq!(rep.r_terms[2], rat(1, 16) - rat(1, 16 * 64));
        assert_eq!(rep.r_terms[3], rat(5, 24) * (rat(1, 64) - int(1)));
        assert_eq!(rep.r_terms[4], rat(7, 48) * (int(1) - rat(1, 64)));
        assert_eq!(rep.r_terms[5], (int(1) - rat(1, 256)) / int(64));
        assert_eq!(rep.r7_explicit, rat(3, 192 * 256) - rat(3, 192));
        assert!(rep.identity_holds && rep.moments_match);
        assert!(!rep.e11);
        assert_eq!(rep.rewrites, None);
    }

    #[test]
    fn r2_vanishes_for_single_terms() {
        for a1 in 1..20 {
            for a2 in a1 + 1..25 {
                let rep = taylor_decompose(pair(a1, 0, a2, 0)).unwrap();
                assert_eq!(rep.r_terms[1], int(0));
            }
        }
    }

    #[test]
    fn overlap_rejected() {
        assert!(matches!(
            taylor_decompose(pair(1, 3, 2, 5)),
            Err(Error::NotDisjoint(_))
        ));
    }

    #[test]
    fn rewrites_hold_on_box_solutions() {
        for p in disjoint_solutions(300, 30) {
            let rep = taylor_decompose(p).unwrap();
            assert!(rep.e11 && rep.identity_holds);
            assert!(rep.rewrites.unwrap().all(), "{p}");
        }
    }

    #[test]
    fn chain_bounds_on_box_solutions_without_far_hypothesis() {
        // Frozen from an exact-fraction Python evaluation. None of these meets
        // a2 >= 4(s+1)^3, so the chain is not claimed for them; the R6 bound
        // fails on all of them and the final R7 bound on nine.
        let r7_holds = [
            (21, 0, 79, 16),
            (60, 1, 206, 25),
            (65, 1, 224, 25),
            (93, 3, 202, 19),
            (147, 9, 232, 25),
        ];
        for p in disjoint_solutions(300, 30) {
            let rep = taylor_decompose(p).unwrap();
            let b = chain_bounds(&rep);
            assert!(b.r1_to_r5 && b.r1_to_r6 && b.difference_positive, "{p}");
            assert!(!b.r6, "{p}");
            assert_eq!(b.r7, r7_holds.contains(&p.parts()), "{p}");
            match check_positivity_chain(p) {
                ChainOutcome::Rejected {
                    failed,
                    sums_distinct,
                } => {
                    assert_eq!(failed, vec![HYP_FAR]);
                    assert!(sums_distinct);
                }
                other => panic!("expected rejection, got {other:?}"),
            }
        }
    }

    #[test]
    fn chain_rejects_equal_lengths() {
        match check_positivity_chain(pair(1, 2, 10, 2)) {
            ChainOutcome::Rejected {
                failed,
                sums_distinct,
            } => {
                assert!(failed.contains(&HYP_LONGER));
                assert!(sums_distinct);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bracket_identity_examples() {
        assert_eq!(
            check_bracket_identity(pair(1, 0, 2, 0), 64),
            Ok(Certification::Certified)
        );
        assert_eq!(
            check_bracket_identity(pair(5, 3, 5, 3), 64),
            Ok(Certification::Certified)
        );
        assert_eq!(
            certify_bracket_identity(pair(12, 3, 22, 19), 64).unwrap().0,
            Certification::Certified
        );
    }

    #[test]
    fn sign_fact_domains() {
        let facts = sign_facts(60);
        assert_eq!(facts.first_failures, vec![(0, 0)]);
        assert_eq!(facts.second_failures, vec![0]);
        assert_eq!(facts.third_failures, vec![0]);
        assert_eq!(facts.checked_pairs, 61 * 61);
    }
}
