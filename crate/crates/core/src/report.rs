//! Machine-readable report schema.
//!
//! A report is `{manifest, results[]}`. Each result is a flat record of
//! named fields; a field is either text (integers, booleans, rationals as
//! `num/den`) or an enclosure `{"lo": "m*2^e", "hi": "m*2^e"}`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::kernel::{format_rational, Enclosure, ExactRational};
use crate::lemmas::{DecompositionReport, Witness, WitnessReport};
use crate::partial_sums::{EtaBands, EtaSolution, IntervalPair};
use crate::search::CollisionReport;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Field {
    Text(String),
    Enclosure { lo: String, hi: String },
}

impl Field {
    pub fn as_text(&self) -> Option<&str> {
        match self {
            Field::Text(t) => Some(t),
            Field::Enclosure { .. } => None,
        }
    }
}

impl From<&Enclosure> for Field {
    fn from(e: &Enclosure) -> Self {
        Field::Enclosure {
            lo: e.lo().to_string(),
            hi: e.hi().to_string(),
        }
    }
}

/// One result row.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Record(pub BTreeMap<String, Field>);

impl Record {
    pub fn new(kind: &str) -> Self {
        let mut r = Record::default();
        r.text("kind", kind);
        r
    }

    pub fn text(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.0
            .insert(key.to_string(), Field::Text(value.to_string()));
        self
    }

    pub fn rational(&mut self, key: &str, value: &ExactRational) -> &mut Self {
        self.text(key, format_rational(value))
    }

    pub fn enclosure(&mut self, key: &str, value: &Enclosure) -> &mut Self {
        self.0.insert(key.to_string(), value.into());
        self
    }

    pub fn pair(&mut self, pair: &IntervalPair) -> &mut Self {
        let (a1, r, a2, s) = pair.parts();
        self.text("a1", a1).text("r", r).text("a2", a2).text("s", s)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).and_then(Field::as_text)
    }

    pub fn build(&mut self) -> Record {
        std::mem::take(self)
    }
}

/// Provenance of a run. Timestamps and wall time vary between runs; the
/// `results` body does not.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub parameters: BTreeMap<String, String>,
    pub tool_version: String,
    pub seed: u64,
    pub started_at: String,
    pub finished_at: String,
    pub wall_time_ms: u64,
    pub outcome: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub manifest: RunManifest,
    pub results: Vec<Record>,
}

pub fn witness_record(w: &WitnessReport) -> Record {
    let mut rec = Record::new("witness");
    rec.text("claim", w.claim).text("holds", w.holds);
    for (k, v) in &w.params {
        rec.text(k, v);
    }
    match &w.witness {
        Some(Witness::Prime(p)) => {
            rec.text("witness_prime", p);
        }
        Some(Witness::Factor { element, prime }) => {
            rec.text("witness_element", element)
                .text("witness_prime", prime);
        }
        Some(Witness::Bound { lhs, rhs }) => {
            rec.rational("lhs", lhs).rational("rhs", rhs);
        }
        None => {}
    }
    rec.build()
}

/// Summary row of a batch check.
pub fn summary_record(check: &str, checked: u64, failures: u64) -> Record {
    Record::new("summary")
        .text("check", check)
        .text("checked", checked)
        .text("failures", failures)
        .text("holds", failures == 0)
        .build()
}

pub fn decomposition_record(d: &DecompositionReport) -> Record {
    let mut rec = Record::new("decomposition");
    rec.pair(&d.pair).rational("L", &d.l);
    for (i, t) in d.r_terms.iter().enumerate() {
        rec.rational(&format!("R{}", i + 1), t);
    }
    rec.rational("R7_explicit", &d.r7_explicit)
        .rational("difference", &d.difference)
        .text("identity_holds", d.identity_holds)
        .text("moments_match", d.moments_match)
        .text("e11", d.e11);
    if let Some(rw) = &d.rewrites {
        rec.text("rewrites_hold", rw.all());
    }
    rec.build()
}

pub fn eta_record(sol: &EtaSolution, bands: &EtaBands) -> Record {
    let [c2, c1, c0] = &sol.quadratic;
    Record::new("eta")
        .text("a", sol.interval.start())
        .text("r", sol.interval.extent())
        .text("precision_bits", sol.precision_bits)
        .enclosure("eta", &sol.eta)
        .enclosure("eps_a", &sol.eps_start)
        .enclosure("eps_a_plus_r", &sol.eps_end)
        .rational("c2", c2)
        .rational("c1", c1)
        .rational("c0", c0)
        .text("bracketed", sol.bracketed())
        .text("q_band", bands.q_band.as_str())
        .text("lower_band", bands.lower.as_str())
        .text("upper_band", bands.upper.as_str())
        .build()
}

pub fn collision_records(report: &CollisionReport) -> Vec<Record> {
    let c = &report.config;
    let moduli: Vec<String> = report.moduli.iter().map(u64::to_string).collect();
    let mut out = vec![Record::new("search")
        .text("max_n", c.max_n)
        .text("exponent", c.exponent)
        .text("modulus_count", c.modulus_count)
        .text("seed", c.seed)
        .text("moduli", moduli.join(" "))
        .text("interval_count", report.interval_count)
        .text("screen_collisions", report.screen_collision_pairs.len())
        .text("exact_collisions", report.exact_collision_pairs.len())
        .build()];
    for p in &report.screen_collision_pairs {
        let exact = report.exact_collision_pairs.contains(p);
        out.push(
            Record::new("screen_collision")
                .pair(p)
                .text("exact", exact)
                .build(),
        );
    }
    out
}
