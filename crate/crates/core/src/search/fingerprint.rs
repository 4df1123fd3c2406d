use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::modular::{add_mod, inverses_upto, is_prime_u64, pow_mod, sub_mod};
use crate::partial_sums::Interval;

/// Residues of one window sum, one per screening modulus.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fingerprint(pub Vec<u64>);

/// `prefix[n] = sum_{k=1}^{n} k^(-exponent) mod p`, with `prefix[0] = 0`.
pub fn prefix_residues(max_n: u64, p: u64, exponent: u32) -> Result<Vec<u64>> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    if p <= max_n {
        return Err(Error::ModulusTooSmall {
            modulus: p,
            bound: max_n,
        });
    }
    let inv = inverses_upto(max_n as usize, p);
    let mut prefix = Vec::with_capacity(max_n as usize + 1);
    prefix.push(0);
    let mut acc = 0;
    for &x in &inv[1..=max_n as usize] {
        acc = add_mod(acc, pow_mod(x, exponent as u64, p), p);
        prefix.push(acc);
    }
    Ok(prefix)
}

/// `count` distinct primes in `[2^61, 2^62)`, all above `max_n`, drawn from a
/// ChaCha stream seeded with `seed`.
pub fn select_moduli(max_n: u64, count: usize, seed: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let candidate = rng.gen_range(1u64 << 61..1u64 << 62) | 1;
        if candidate > max_n && is_prime_u64(candidate) && !out.contains(&candidate) {
            out.push(candidate);
        }
    }
    out
}

/// Prefix arrays for every modulus, read-only once built.
#[derive(Clone, Debug)]
pub struct FingerprintTable {
    max_n: u64,
    moduli: Vec<u64>,
    prefixes: Vec<Vec<u64>>,
}

impl FingerprintTable {
    pub fn new(max_n: u64, exponent: u32, moduli: &[u64]) -> Result<Self> {
        if moduli.is_empty() {
            return Err(Error::NonPositive("modulus_count"));
        }
        let prefixes = moduli
            .iter()
            .map(|&p| prefix_residues(max_n, p, exponent))
            .collect::<Result<_>>()?;
        Ok(FingerprintTable {
            max_n,
            moduli: moduli.to_vec(),
            prefixes,
        })
    }

    pub fn max_n(&self) -> u64 {
        self.max_n
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    #[inline]
    pub fn component(&self, j: usize, iv: Interval) -> u64 {
        let prefix = &self.prefixes[j];
        sub_mod(
            prefix[iv.end() as usize],
            prefix[iv.start() as usize - 1],
            self.moduli[j],
        )
    }

    pub fn fingerprint(&self, iv: Interval) -> Fingerprint {
        Fingerprint(
            (0..self.moduli.len())
                .map(|j| self.component(j, iv))
                .collect(),
        )
    }
}
