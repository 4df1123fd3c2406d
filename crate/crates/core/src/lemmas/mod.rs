//! Executable checkers for the supporting lemmas and the identity and
//! inequality chain behind the main theorem.

pub mod decomposition;
pub mod diophantine;
pub mod power_sums;
pub mod primes;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::kernel::ExactRational;

pub use decomposition::{
    chain_bounds, check_bracket_identity, check_positivity_chain, sign_facts, taylor_decompose,
    ChainBounds, ChainOutcome, DecompositionReport, SignFacts,
};
pub use diophantine::{
    check_identity_forms, check_necessary_identity, compute_l, e11_search, EquivalenceReport,
    LValue,
};
pub use power_sums::{
    centered_moment, moment_closed_form, power_sum_closed_form, power_sum_direct,
};
pub use primes::{
    check_bertrand, check_large_prime_window, check_lcm_bound, check_prime_window, BatchOutcome,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Claim {
    /// A prime in `[n, 2n]`.
    Bertrand,
    /// A prime in `[n, 2n - 1]` for `n > 1`.
    BertrandRemark,
    /// Some element of `{n, ..., n+k-1}` has a prime factor `>= k+1`.
    PrimeWindow,
    /// Lower bound on the lcm of an arithmetic progression.
    LcmBound,
    /// Some element of `{n, ..., n+k}` has a prime factor `>= 2(k+1)`.
    LargePrimeWindow,
}

impl Claim {
    pub fn as_str(self) -> &'static str {
        match self {
            Claim::Bertrand => "bertrand",
            Claim::BertrandRemark => "bertrand-remark",
            Claim::PrimeWindow => "prime-window",
            Claim::LcmBound => "lcm-bound",
            Claim::LargePrimeWindow => "large-prime-window",
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Prime(u64),
    Factor {
        element: u64,
        prime: u64,
    },
    Bound {
        lhs: ExactRational,
        rhs: ExactRational,
    },
}

/// Outcome of one lemma instance.
///
/// For existential claims `holds` is true only together with a witness that
/// can be rechecked independently.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessReport {
    pub claim: Claim,
    pub params: Vec<(&'static str, u64)>,
    pub witness: Option<Witness>,
    pub holds: bool,
}

impl WitnessReport {
    pub fn param(&self, name: &str) -> Option<u64> {
        self.params
            .iter()
            .find(|(k, _)| *k == name)
            .map(|(_, v)| *v)
    }
}
