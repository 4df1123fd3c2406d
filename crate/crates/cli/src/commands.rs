use hypharm::certify::Certification;
use hypharm::lemmas::diophantine::{disjoint_solutions, e11_search};
use hypharm::lemmas::power_sums::verify_power_sums;
use hypharm::lemmas::primes::{
    verify_bertrand, verify_large_prime_window, verify_lcm_bound, verify_prime_window,
};
use hypharm::lemmas::{
    chain_bounds, check_bracket_identity, check_positivity_chain, taylor_decompose, BatchOutcome,
    ChainBounds, ChainOutcome,
};
use hypharm::partial_sums::{
    certify_bands, g_exact, reduce_overlap, sample_disjoint_pairs, telescope_check, Interval,
    IntervalPair,
};
use hypharm::report::{
    collision_records, decomposition_record, eta_record, summary_record, witness_record, Record,
};
use hypharm::search::{search, SearchConfig};
use hypharm::Error;
use rayon::prelude::*;

use crate::args::{EtaArgs, LemmaId, PairArgs, SearchArgs, VerifyArgs};

/// What a subcommand produced.
#[derive(Debug)]
pub struct Outcome {
    pub parameters: Vec<(&'static str, String)>,
    pub results: Vec<Record>,
    pub holds: bool,
}

/// Bad input; maps to the usage exit code.
#[derive(Debug)]
pub struct UsageError(pub String);

impl From<Error> for UsageError {
    fn from(e: Error) -> Self {
        UsageError(e.to_string())
    }
}

type CmdResult = Result<Outcome, UsageError>;

pub fn search_cmd(args: &SearchArgs, seed: u64) -> CmdResult {
    let config = SearchConfig::new(args.max_n, args.exponent, args.moduli, seed)?;
    let report = search(&config)?;
    Ok(Outcome {
        parameters: vec![
            ("max_n", args.max_n.to_string()),
            ("exponent", args.exponent.to_string()),
            ("moduli", args.moduli.to_string()),
        ],
        holds: report.holds(),
        results: collision_records(&report),
    })
}

pub fn eta_cmd(args: &EtaArgs, bits: u32) -> CmdResult {
    let interval = Interval::new(args.a, args.r)?;
    let parameters = vec![("a", args.a.to_string()), ("r", args.r.to_string())];
    match certify_bands(interval, bits) {
        Ok((sol, bands)) => {
            let holds = sol.bracketed() && bands.all().is_certified();
            Ok(Outcome {
                parameters,
                results: vec![eta_record(&sol, &bands)],
                holds,
            })
        }
        Err(e @ Error::NoSignChange { .. }) => Ok(Outcome {
            parameters,
            results: vec![Record::new("eta-failure")
                .text("a", args.a)
                .text("r", args.r)
                .text("error", e)
                .build()],
            holds: false,
        }),
        Err(e) => Err(e.into()),
    }
}

fn ordered_disjoint(args: &PairArgs) -> Result<IntervalPair, UsageError> {
    let first =
        Interval::new(args.a1, args.r).map_err(|_| UsageError("a1 must be positive".into()))?;
    let second =
        Interval::new(args.a2, args.s).map_err(|_| UsageError("a2 must be positive".into()))?;
    if first.end() < args.a2 {
        return Ok(IntervalPair::new(first, second));
    }
    let hint = if second.end() < args.a1 {
        "windows are disjoint but misordered; swap (a1, r) and (a2, s)".to_string()
    } else {
        format!(
            "windows overlap; run `hypharm reduce --a1 {} --r {} --a2 {} --s {}` first",
            args.a1, args.r, args.a2, args.s
        )
    };
    Err(UsageError(format!("need a1 + r < a2: {hint}")))
}

fn pair_params(args: &PairArgs) -> Vec<(&'static str, String)> {
    vec![
        ("a1", args.a1.to_string()),
        ("r", args.r.to_string()),
        ("a2", args.a2.to_string()),
        ("s", args.s.to_string()),
    ]
}

fn decomposition_holds(d: &hypharm::lemmas::DecompositionReport) -> bool {
    d.identity_holds && d.moments_match && d.rewrites.is_none_or(|rw| rw.all())
}

pub fn decompose_cmd(args: &PairArgs) -> CmdResult {
    let pair = ordered_disjoint(args)?;
    let report = taylor_decompose(pair)?;
    Ok(Outcome {
        parameters: pair_params(args),
        holds: decomposition_holds(&report),
        results: vec![decomposition_record(&report)],
    })
}

pub fn reduce_cmd(args: &PairArgs) -> CmdResult {
    let first = Interval::new(args.a1, args.r)?;
    let second = Interval::new(args.a2, args.s)?;
    let pair = IntervalPair::new(first, second);
    let reduced = reduce_overlap(pair)?;
    let before = g_exact(pair.first()) - g_exact(pair.second());
    let after = g_exact(reduced.first()) - g_exact(reduced.second());
    let preserved = before == after;
    let mut rec = Record::new("reduction");
    rec.pair(&reduced)
        .rational("difference", &after)
        .text("difference_preserved", preserved)
        .text("disjoint", reduced.is_disjoint());
    Ok(Outcome {
        parameters: pair_params(args),
        holds: preserved && reduced.is_disjoint(),
        results: vec![rec.build()],
    })
}

fn batch(check: &str, outcome: &BatchOutcome, results: &mut Vec<Record>) -> bool {
    results.push(summary_record(
        check,
        outcome.checked,
        outcome.failures.len() as u64,
    ));
    results.extend(outcome.failures.iter().map(witness_record));
    outcome.holds()
}

fn bands_failure(v: Certification) -> bool {
    v != Certification::Certified
}

pub fn verify_cmd(args: &VerifyArgs, seed: u64, bits: u32) -> CmdResult {
    let pick = |v: Option<u64>, default: u64| v.unwrap_or(default);
    let mut parameters = vec![("lemma", args.lemma.as_str().to_string())];
    let mut results = Vec::new();
    let holds = match args.lemma {
        LemmaId::Bertrand => {
            let n_max = pick(args.n_max, 1_000_000);
            parameters.push(("n_max", n_max.to_string()));
            let plain = batch("bertrand", &verify_bertrand(n_max, false), &mut results);
            let remark = batch(
                "bertrand-remark",
                &verify_bertrand(n_max, true),
                &mut results,
            );
            plain && remark
        }
        LemmaId::PrimeWindow => {
            let (k_max, span) = (pick(args.k_max, 50), pick(args.span, 2000));
            parameters.extend([("k_max", k_max.to_string()), ("span", span.to_string())]);
            batch(
                "prime-window",
                &verify_prime_window(k_max, span),
                &mut results,
            )
        }
        LemmaId::LargePrimeWindow => {
            let (k_max, span) = (pick(args.k_max, 20), pick(args.span, 1000));
            parameters.extend([("k_max", k_max.to_string()), ("span", span.to_string())]);
            batch(
                "large-prime-window",
                &verify_large_prime_window(k_max, span),
                &mut results,
            )
        }
        LemmaId::LcmBound => {
            let (a_max, b_max, n_max) = (
                pick(args.a_max, 20),
                pick(args.b_max, 20),
                pick(args.n_max, 12),
            );
            parameters.extend([
                ("a_max", a_max.to_string()),
                ("b_max", b_max.to_string()),
                ("n_max", n_max.to_string()),
            ]);
            batch(
                "lcm-bound",
                &verify_lcm_bound(a_max, b_max, n_max),
                &mut results,
            )
        }
        LemmaId::PowerSums => {
            let r_max = pick(args.r_max, 2000);
            parameters.push(("r_max", r_max.to_string()));
            let (checked, failure) = verify_power_sums(r_max);
            results.push(summary_record(
                "power-sums",
                checked,
                failure.is_some() as u64,
            ));
            if let Some((r, e)) = failure {
                results.push(
                    Record::new("failure")
                        .text("r", r)
                        .text("exponent", e)
                        .build(),
                );
            }
            failure.is_none()
        }
        LemmaId::EtaBand => {
            let (a_max, r_max, n_max) = (
                pick(args.a_max, 100),
                pick(args.r_max, 50),
                pick(args.n_max, 10_000),
            );
            parameters.extend([
                ("a_max", a_max.to_string()),
                ("r_max", r_max.to_string()),
                ("n_max", n_max.to_string()),
            ]);
            verify_eta_grid(a_max, r_max, n_max, bits, &mut results)?
        }
        LemmaId::BracketIdentity | LemmaId::Decompose => {
            let (count, max_end) = (pick(args.pairs, 1000), pick(args.max_end, 500));
            parameters.extend([
                ("pairs", count.to_string()),
                ("max_end", max_end.to_string()),
            ]);
            let pairs = sample_disjoint_pairs(count as usize, max_end, seed)?;
            if args.lemma == LemmaId::Decompose {
                verify_decompositions(&pairs, &mut results)?
            } else {
                verify_bracket_identity(&pairs, bits, &mut results)?
            }
        }
        LemmaId::E11Search => {
            let (a_max, r_max) = (pick(args.a_max, 300), pick(args.r_max, 30));
            parameters.extend([("a_max", a_max.to_string()), ("r_max", r_max.to_string())]);
            verify_e11(a_max, r_max, &mut results)
        }
        LemmaId::PositivityChain => {
            let (a_max, r_max) = (pick(args.a_max, 300), pick(args.r_max, 30));
            parameters.extend([("a_max", a_max.to_string()), ("r_max", r_max.to_string())]);
            verify_chain(a_max, r_max, &mut results)
        }
    };
    Ok(Outcome {
        parameters,
        results,
        holds,
    })
}

fn verify_eta_grid(
    a_max: u64,
    r_max: u64,
    n_max: u64,
    bits: u32,
    results: &mut Vec<Record>,
) -> Result<bool, UsageError> {
    let grid: Vec<(u64, u64)> = (1..=a_max)
        .flat_map(|a| (0..=r_max).map(move |r| (a, r)))
        .collect();
    let solved: Vec<_> = grid
        .par_iter()
        .map(|&(a, r)| certify_bands(Interval::new(a, r)?, bits))
        .collect::<Result<_, Error>>()?;
    let checked = solved.len() as u64;
    let count = |f: &dyn Fn(
        &(
            hypharm::partial_sums::EtaSolution,
            hypharm::partial_sums::EtaBands,
        ),
    ) -> bool| { solved.iter().filter(|s| f(s)).count() as u64 };
    let width = count(&|(s, _)| !s.eta.width_at_most(bits as i64));
    let inside = count(&|(s, _)| !s.bracketed());
    let q = count(&|(_, b)| bands_failure(b.q_band));
    let lower = count(&|(_, b)| bands_failure(b.lower));
    let upper = count(&|(_, b)| bands_failure(b.upper));
    results.push(summary_record("eta-width", checked, width));
    results.push(summary_record("eta-bracketed", checked, inside));
    results.push(summary_record("q-band", checked, q));
    results.push(summary_record("lower-band", checked, lower));
    results.push(summary_record("upper-band", checked, upper));

    let telescope_failures: Vec<u64> = (1..=n_max)
        .into_par_iter()
        .filter(|&n| !telescope_check(n, bits).is_certified())
        .collect();
    results.push(summary_record(
        "telescope",
        n_max,
        telescope_failures.len() as u64,
    ));
    for n in &telescope_failures {
        results.push(Record::new("telescope-failure").text("n", n).build());
    }

    for (sol, b) in &solved {
        let ok = sol.eta.width_at_most(bits as i64) && sol.bracketed() && b.all().is_certified();
        if !ok {
            results.push(eta_record(sol, b));
        }
    }
    Ok(width + inside + q + lower + upper == 0 && telescope_failures.is_empty())
}

fn verify_decompositions(
    pairs: &[IntervalPair],
    results: &mut Vec<Record>,
) -> Result<bool, UsageError> {
    let reports: Vec<_> = pairs
        .par_iter()
        .map(|&p| taylor_decompose(p))
        .collect::<Result<_, Error>>()?;
    let failed: Vec<_> = reports.iter().filter(|d| !decomposition_holds(d)).collect();
    results.push(summary_record(
        "decompose",
        reports.len() as u64,
        failed.len() as u64,
    ));
    results.extend(failed.iter().map(|d| decomposition_record(d)));
    Ok(failed.is_empty())
}

fn verify_bracket_identity(
    pairs: &[IntervalPair],
    bits: u32,
    results: &mut Vec<Record>,
) -> Result<bool, UsageError> {
    let verdicts: Vec<_> = pairs
        .par_iter()
        .map(|&p| check_bracket_identity(p, bits))
        .collect::<Result<_, Error>>()?;
    let mut failures = 0;
    for (pair, v) in pairs.iter().zip(&verdicts) {
        if !v.is_certified() {
            failures += 1;
            results.push(
                Record::new("bracket-identity")
                    .pair(pair)
                    .text("verdict", v.as_str())
                    .build(),
            );
        }
    }
    results.insert(
        0,
        summary_record("bracket-identity", pairs.len() as u64, failures),
    );
    Ok(failures == 0)
}

fn verify_e11(a_max: u64, r_max: u64, results: &mut Vec<Record>) -> bool {
    let all = e11_search(a_max, r_max);
    let disjoint = disjoint_solutions(a_max, r_max);
    let distinct: Vec<bool> = disjoint
        .par_iter()
        .map(|p| g_exact(p.first()) != g_exact(p.second()))
        .collect();
    let equal = distinct.iter().filter(|d| !**d).count() as u64;
    results.push(
        Record::new("e11-search")
            .text("solutions", all.len())
            .text("disjoint_solutions", disjoint.len())
            .build(),
    );
    results.push(summary_record(
        "sums-distinct",
        disjoint.len() as u64,
        equal,
    ));
    for (pair, d) in disjoint.iter().zip(&distinct) {
        let diff = g_exact(pair.first()) - g_exact(pair.second());
        results.push(
            Record::new("e11-solution")
                .pair(pair)
                .rational("difference", &diff)
                .text("sums_distinct", d)
                .build(),
        );
    }
    equal == 0
}

fn bounds_fields(rec: &mut Record, b: &ChainBounds) {
    rec.text("r1_to_r5", b.r1_to_r5)
        .text("r6", b.r6)
        .text("r1_to_r6", b.r1_to_r6)
        .text("l_ratio", b.l_ratio)
        .text("center_ratio", b.center_ratio)
        .text("r7_first", b.r7_first)
        .text("r7", b.r7)
        .text("combined", b.combined)
        .text("difference_positive", b.difference_positive);
}

fn verify_chain(a_max: u64, r_max: u64, results: &mut Vec<Record>) -> bool {
    let pairs = disjoint_solutions(a_max, r_max);
    let outcomes: Vec<_> = pairs
        .par_iter()
        .map(|&p| check_positivity_chain(p))
        .collect();
    let mut evaluated = 0u64;
    let mut failures = 0u64;
    let mut rows = Vec::new();
    for (pair, outcome) in pairs.iter().zip(&outcomes) {
        let mut rec = Record::new("positivity-chain");
        rec.pair(pair);
        match outcome {
            ChainOutcome::Evaluated { bounds, .. } => {
                evaluated += 1;
                failures += !bounds.all() as u64;
                rec.text("status", "evaluated").text("holds", bounds.all());
                bounds_fields(&mut rec, bounds);
            }
            ChainOutcome::Rejected {
                failed,
                sums_distinct,
            } => {
                failures += !sums_distinct as u64;
                rec.text("status", "hypotheses-unmet")
                    .text("failed_hypotheses", failed.join("; "))
                    .text("sums_distinct", sums_distinct);
                // bounds are informational here: the hypotheses do not hold
                let report = taylor_decompose(*pair).expect("disjoint solution");
                let mut diag = Record::default();
                bounds_fields(&mut diag, &chain_bounds(&report));
                for (k, v) in diag.0 {
                    rec.0.insert(format!("diag_{k}"), v);
                }
            }
        }
        rows.push(rec.build());
    }
    results.push(
        Record::new("summary")
            .text("check", "positivity-chain")
            .text("checked", pairs.len())
            .text("evaluated", evaluated)
            .text("failures", failures)
            .text("holds", failures == 0)
            .build(),
    );
    results.extend(rows);
    failures == 0
}
