//! Exhaustive screen for coinciding window sums.
//!
//! Every window `{a, ..., a+r}` with `a + r <= N` gets a fingerprint: its sum
//! reduced modulo a few large primes, read off prefix sums of modular inverse
//! powers. Equal sums have equal fingerprints, so any coincidence shows up as
//! a fingerprint group; each group is then confirmed or discarded by exact
//! rational comparison.

mod fingerprint;

pub use fingerprint::{prefix_residues, select_moduli, Fingerprint, FingerprintTable};

use std::collections::{BTreeSet, HashMap};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partial_sums::{power_sum_exact, Interval, IntervalPair};

const SHARDS: u64 = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Upper bound on `a + r`.
    pub max_n: u64,
    /// Power of the reciprocals; 2 is the squares, 1 the harmonic case.
    pub exponent: u32,
    pub modulus_count: usize,
    pub seed: u64,
}

impl SearchConfig {
    pub fn new(max_n: u64, exponent: u32, modulus_count: usize, seed: u64) -> Result<Self> {
        let config = SearchConfig {
            max_n,
            exponent,
            modulus_count,
            seed,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_n < 2 {
            return Err(Error::Precondition(format!(
                "max_n must be at least 2, got {}",
                self.max_n
            )));
        }
        if self.exponent == 0 {
            return Err(Error::NonPositive("exponent"));
        }
        if self.modulus_count == 0 {
            return Err(Error::NonPositive("modulus_count"));
        }
        Ok(())
    }

    pub fn interval_count(&self) -> u64 {
        self.max_n * (self.max_n + 1) / 2
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollisionReport {
    pub config: SearchConfig,
    pub moduli: Vec<u64>,
    pub interval_count: u64,
    /// Distinct windows with equal fingerprints.
    pub screen_collision_pairs: Vec<IntervalPair>,
    /// Screen pairs whose exact sums are equal.
    pub exact_collision_pairs: Vec<IntervalPair>,
    pub wall_time: Duration,
}

impl CollisionReport {
    pub fn holds(&self) -> bool {
        self.exact_collision_pairs.is_empty()
    }
}

/// Exact equality of the two window sums for `exponent`.
pub fn confirm_exact_with(pair: IntervalPair, exponent: u32) -> bool {
    pair.first() == pair.second()
        || power_sum_exact(pair.first(), exponent) == power_sum_exact(pair.second(), exponent)
}

/// `G(a1, r) == G(a2, s)`, exactly.
pub fn confirm_exact(pair: IntervalPair) -> bool {
    confirm_exact_with(pair, 2)
}

/// Groups entries by fingerprint, keeping only groups of two or more.
/// Groups are sorted internally and by their first member.
pub fn group_by_fingerprint(
    entries: impl IntoIterator<Item = (Fingerprint, Interval)>,
) -> Vec<Vec<Interval>> {
    let mut table: HashMap<Fingerprint, Vec<Interval>> = HashMap::new();
    for (fp, iv) in entries {
        table.entry(fp).or_default().push(iv);
    }
    let mut groups: Vec<Vec<Interval>> = table
        .into_values()
        .filter(|g| g.len() >= 2)
        .map(|mut g| {
            g.sort_unstable();
            g
        })
        .collect();
    groups.sort_unstable();
    groups
}

fn all_intervals(max_n: u64) -> impl Iterator<Item = Interval> {
    (1..=max_n)
        .flat_map(move |a| (0..=max_n - a).map(move |r| Interval::new(a, r).expect("a >= 1")))
}

/// Windows in one residue shard of the first modulus that share their first
/// residue with another window.
fn shard_candidates(table: &FingerprintTable, shard: u64) -> Vec<Interval> {
    let max_n = table.max_n();
    let mut first_seen: HashMap<u64, Interval> = HashMap::new();
    let mut candidates = Vec::new();
    for iv in all_intervals(max_n) {
        let res = table.component(0, iv);
        if res % SHARDS != shard {
            continue;
        }
        match first_seen.get(&res) {
            Some(&earlier) => {
                candidates.push(earlier);
                candidates.push(iv);
            }
            None => {
                first_seen.insert(res, iv);
            }
        }
    }
    candidates
}

/// Screens with the given moduli, each a prime exceeding `max_n`.
pub fn search_with_moduli(config: &SearchConfig, moduli: Vec<u64>) -> Result<CollisionReport> {
    config.validate()?;
    let started = Instant::now();
    let table = FingerprintTable::new(config.max_n, config.exponent, &moduli)?;

    let candidates: BTreeSet<Interval> = (0..SHARDS)
        .into_par_iter()
        .map(|shard| shard_candidates(&table, shard))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    let groups = group_by_fingerprint(candidates.into_iter().map(|iv| (table.fingerprint(iv), iv)));

    let mut screen = Vec::new();
    for group in &groups {
        for (i, &x) in group.iter().enumerate() {
            for &y in &group[i + 1..] {
                screen.push(IntervalPair::new(x, y));
            }
        }
    }
    screen.sort_unstable();
    let exact = screen
        .iter()
        .copied()
        .filter(|&p| confirm_exact_with(p, config.exponent))
        .collect();

    Ok(CollisionReport {
        config: config.clone(),
        moduli,
        interval_count: all_intervals(config.max_n).count() as u64,
        screen_collision_pairs: screen,
        exact_collision_pairs: exact,
        wall_time: started.elapsed(),
    })
}

/// Screens all windows up to `config.max_n` with seeded ~62-bit prime moduli.
pub fn search(config: &SearchConfig) -> Result<CollisionReport> {
    config.validate()?;
    let moduli = select_moduli(config.max_n, config.modulus_count, config.seed);
    search_with_moduli(config, moduli)
}
