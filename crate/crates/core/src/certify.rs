//! Three-valued outcome of an enclosure-based check and the precision ladder.

use serde::{Deserialize, Serialize};

pub const DEFAULT_PRECISION: u32 = 64;
pub const MAX_PRECISION: u32 = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certification {
    /// The claim holds for every point of the enclosures involved.
    Certified,
    /// The claim fails for every point of the enclosures involved.
    Refuted,
    /// The enclosures are too wide to decide.
    Inconclusive,
}

impl Certification {
    pub fn is_certified(self) -> bool {
        self == Certification::Certified
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Certification::Certified => "certified",
            Certification::Refuted => "refuted",
            Certification::Inconclusive => "inconclusive",
        }
    }

    /// Combines independent claims: refuted dominates, then inconclusive.
    pub fn and(self, other: Certification) -> Certification {
        use Certification::*;
        match (self, other) {
            (Refuted, _) | (_, Refuted) => Refuted,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            _ => Certified,
        }
    }
}

/// Runs `check` at `start`, doubling the precision until it is decisive or
/// `MAX_PRECISION` is exceeded. Returns the verdict and the last precision tried.
pub fn with_ladder<F>(start: u32, mut check: F) -> (Certification, u32)
where
    F: FnMut(u32) -> Certification,
{
    let mut bits = start.max(1);
    loop {
        let verdict = check(bits);
        if verdict != Certification::Inconclusive || bits >= MAX_PRECISION {
            return (verdict, bits);
        }
        bits = (bits * 2).min(MAX_PRECISION);
    }
}
