//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Each criterion also carries a pinned expectation. Two of the stated
//! claims are false on their ranges; for those the line reads FAIL and the
//! suite checks that the falsifying set equals an independently computed
//! oracle set. The process exits non-zero only when an outcome departs from
//! its expectation.

use std::collections::{BTreeSet, HashMap};
use std::process::Command;
use std::time::Instant;

use hypharm::kernel::{format_rational, rat, ExactRational};
use hypharm::lemmas::diophantine::e11_search;
use hypharm::partial_sums::sample_disjoint_pairs;
use hypharm::report::{Record, Report};
use hypharm_cli::output::{from_csv, from_json};

const BIN: &str = env!("CARGO_BIN_EXE_hypharm");
const SEARCH_WALL_LIMIT_S: f64 = 60.0;
const PRECISION_BITS: &str = "64";

struct Run {
    code: i32,
    stdout: String,
    seconds: f64,
}

fn run(args: &[&str], threads: Option<usize>) -> Run {
    let mut cmd = Command::new(BIN);
    cmd.args(args);
    match threads {
        Some(t) => cmd.env("HYPHARM_THREADS", t.to_string()),
        None => cmd.env_remove("HYPHARM_THREADS"),
    };
    let start = Instant::now();
    let out = cmd.output().expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).expect("utf-8 report"),
        seconds: start.elapsed().as_secs_f64(),
    }
}

fn json(args: &[&str]) -> (i32, Report, f64) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let r = run(&full, None);
    let report = from_json(&r.stdout).unwrap_or_else(|e| panic!("{args:?}: {e}\n{}", r.stdout));
    (r.code, report, r.seconds)
}

fn records<'a>(report: &'a Report, kind: &str) -> Vec<&'a Record> {
    report
        .results
        .iter()
        .filter(|r| r.get("kind") == Some(kind))
        .collect()
}

fn num(rec: &Record, key: &str) -> u64 {
    rec.get(key)
        .and_then(|v| v.parse().ok())
        .unwrap_or_else(|| panic!("missing numeric field {key}"))
}

fn quad(rec: &Record) -> (u64, u64, u64, u64) {
    (num(rec, "a1"), num(rec, "r"), num(rec, "a2"), num(rec, "s"))
}

/// `check -> failures` from the summary records.
fn summaries(report: &Report) -> HashMap<String, u64> {
    records(report, "summary")
        .into_iter()
        .map(|r| (r.get("check").unwrap().to_string(), num(r, "failures")))
        .collect()
}

fn g(a: u64, r: u64) -> ExactRational {
    (a..=a + r).fold(rat(0, 1), |acc, k| acc + rat(1, k * k))
}

fn largest_prime_factor(mut n: u64) -> u64 {
    let mut best = 1;
    let mut p = 2;
    while p * p <= n {
        while n.is_multiple_of(p) {
            best = p;
            n /= p;
        }
        p += 1;
    }
    if n > 1 {
        n
    } else {
        best
    }
}

struct Verdict {
    pass: bool,
    /// Whether `pass` is the pinned outcome.
    expected: bool,
    detail: String,
}

fn criterion_1() -> Verdict {
    let (code, report, secs) = json(&[
        "--seed",
        "0",
        "search",
        "--max-n",
        "2000",
        "--exponent",
        "2",
        "--moduli",
        "3",
    ]);
    let head = records(&report, "search")[0];
    let intervals = num(head, "interval_count");
    let exact = num(head, "exact_collisions");

    // all-exact brute force at N = 300
    let n = 300u64;
    let mut by_value: HashMap<ExactRational, Vec<(u64, u64)>> = HashMap::new();
    for a in 1..=n {
        let mut sum = rat(0, 1);
        for end in a..=n {
            sum += rat(1, end * end);
            by_value.entry(sum.clone()).or_default().push((a, end - a));
        }
    }
    let exact_pairs: BTreeSet<(u64, u64, u64, u64)> = by_value
        .values()
        .filter(|v| v.len() > 1)
        .flat_map(|v| {
            v.iter().enumerate().flat_map(move |(i, x)| {
                v[i + 1..].iter().map(move |y| {
                    let (p, q) = if x < y { (x, y) } else { (y, x) };
                    (p.0, p.1, q.0, q.1)
                })
            })
        })
        .collect();
    let brute_intervals: usize = by_value.values().map(Vec::len).sum();
    let (code300, small, _) = json(&["search", "--max-n", "300"]);
    let screen_pairs: BTreeSet<_> = records(&small, "screen_collision")
        .into_iter()
        .map(quad)
        .collect();

    let pass = intervals == 2_001_000
        && exact == 0
        && code == 0
        && secs <= SEARCH_WALL_LIMIT_S
        && brute_intervals == 45_150
        && exact_pairs.is_empty()
        && code300 == 0
        && screen_pairs == exact_pairs;
    Verdict {
        pass,
        expected: pass,
        detail: format!(
            "N=2000 p=2: {intervals} intervals, {exact} exact collisions, exit {code}, {secs:.1}s \
             (limit {SEARCH_WALL_LIMIT_S}s); N=300 brute force: {brute_intervals} sums, \
             {} equal pairs, screen pairs {} identical={}",
            exact_pairs.len(),
            screen_pairs.len(),
            screen_pairs == exact_pairs
        ),
    }
}

fn criterion_2() -> Verdict {
    let (code, report, secs) = json(&[
        "--seed",
        "0",
        "search",
        "--max-n",
        "2000",
        "--exponent",
        "1",
        "--moduli",
        "3",
    ]);
    let head = records(&report, "search")[0];
    let intervals = num(head, "interval_count");
    let exact = num(head, "exact_collisions");
    let pass = intervals == 2_001_000 && exact == 0 && code == 0;
    Verdict {
        pass,
        expected: pass,
        detail: format!(
            "N=2000 p=1: {intervals} intervals, {exact} exact collisions, exit {code}, {secs:.1}s"
        ),
    }
}

fn large_window_oracle() -> BTreeSet<(u64, u64)> {
    let mut out = BTreeSet::new();
    for k in 1..=20u64 {
        let lo = (k + 1) * (k + 1);
        for n in lo..=lo + 1000 {
            if (n..=n + k).all(|m| largest_prime_factor(m) < 2 * (k + 1)) {
                out.insert((k, n));
            }
        }
    }
    out
}

fn criterion_3() -> Verdict {
    let checks: [(&str, Vec<&str>); 5] = [
        ("bertrand", vec!["--n-max", "1000000"]),
        ("prime-window", vec!["--k-max", "50", "--span", "2000"]),
        (
            "large-prime-window",
            vec!["--k-max", "20", "--span", "1000"],
        ),
        (
            "lcm-bound",
            vec!["--a-max", "20", "--b-max", "20", "--n-max", "12"],
        ),
        ("power-sums", vec!["--r-max", "2000"]),
    ];
    let mut parts = Vec::new();
    let mut all_hold = true;
    let mut others_hold = true;
    let mut large_failures = BTreeSet::new();
    for (lemma, extra) in &checks {
        let mut args = vec!["verify", "--lemma", lemma];
        args.extend(extra.iter().copied());
        let (code, report, _) = json(&args);
        let sums = summaries(&report);
        let failures: u64 = sums.values().sum();
        let checked: u64 = records(&report, "summary")
            .iter()
            .map(|r| num(r, "checked"))
            .sum();
        let holds = code == 0 && failures == 0;
        all_hold &= holds;
        if *lemma == "large-prime-window" {
            large_failures = records(&report, "witness")
                .into_iter()
                .map(|r| (num(r, "k"), num(r, "n")))
                .collect();
        } else {
            others_hold &= holds;
        }
        parts.push(format!("{lemma} {checked} checked/{failures} failed"));
    }
    let oracle = large_window_oracle();
    parts.push(format!(
        "large-prime-window counterexamples (k, n) {large_failures:?}, oracle {oracle:?}"
    ));
    Verdict {
        pass: all_hold,
        expected: !all_hold && others_hold && !oracle.is_empty() && large_failures == oracle,
        detail: parts.join("; "),
    }
}

/// Grid points where `4(r+1)/G - [(2a-1)(2a+2r+1)+1] >= (2r+1)/(4(a+r))`,
/// evaluated exactly. The left side is the band quantity at the exact eta.
fn upper_band_oracle() -> BTreeSet<(u64, u64)> {
    let mut out = BTreeSet::new();
    for a in 1..=100u64 {
        let mut sum = rat(0, 1);
        for r in 0..=50u64 {
            let k = a + r;
            sum += rat(1, k * k);
            let b = rat(((2 * a - 1) * (2 * a + 2 * r + 1) + 1) as i64, 1);
            let value = rat(4 * (r + 1), 1) / &sum - b;
            if value >= rat(2 * r + 1, 4 * (a + r)) {
                out.insert((a, r));
            }
        }
    }
    out
}

fn criterion_4() -> Verdict {
    let (code, report, _) = json(&[
        "--precision-bits",
        PRECISION_BITS,
        "verify",
        "--lemma",
        "eta-band",
        "--a-max",
        "100",
        "--r-max",
        "50",
        "--n-max",
        "10000",
    ]);
    let sums = summaries(&report);
    let get = |k: &str| sums.get(k).copied().unwrap_or(u64::MAX);
    let failing: BTreeSet<(u64, u64)> = records(&report, "eta")
        .into_iter()
        .filter(|r| r.get("upper_band") != Some("certified"))
        .map(|r| (num(r, "a"), num(r, "r")))
        .collect();
    let oracle = upper_band_oracle();
    let sound = get("eta-width") == 0
        && get("eta-bracketed") == 0
        && get("q-band") == 0
        && get("lower-band") == 0
        && get("telescope") == 0;
    let pass = code == 0 && sound && get("upper-band") == 0;
    Verdict {
        pass,
        expected: !pass && code == 1 && sound && !oracle.is_empty() && failing == oracle,
        detail: format!(
            "5100 grid points at 2^-{PRECISION_BITS}: width fails {}, bracket fails {}, \
             q-band fails {}, lower fails {}, upper fails {} (exact oracle {}, sets equal={}, \
             e.g. {:?}); telescoping n<=10^4 fails {}",
            get("eta-width"),
            get("eta-bracketed"),
            get("q-band"),
            get("lower-band"),
            get("upper-band"),
            oracle.len(),
            failing == oracle,
            oracle.iter().next(),
            get("telescope"),
        ),
    }
}

fn criterion_5() -> Verdict {
    let common = ["--seed", "0", "--precision-bits", PRECISION_BITS, "verify"];
    let range = ["--pairs", "1000", "--max-end", "500"];
    let mut out = Vec::new();
    let mut pass = true;
    for lemma in ["decompose", "bracket-identity"] {
        let mut args = common.to_vec();
        args.extend(["--lemma", lemma]);
        args.extend(range);
        let (code, report, _) = json(&args);
        let failures = summaries(&report)[lemma];
        pass &= code == 0 && failures == 0;
        out.push(format!(
            "{lemma}: 1000 pairs, {failures} failures, exit {code}"
        ));
    }
    // the sampled set is disjoint and bounded; spot-check differences independently
    let pairs = sample_disjoint_pairs(1000, 500, 0).unwrap();
    let bounded = pairs.iter().all(|p| {
        let (a1, r, a2, s) = p.parts();
        a1 + r < a2 && a2 + s <= 500
    });
    let mut spot_ok = true;
    for p in pairs.iter().take(10) {
        let (a1, r, a2, s) = p.parts();
        let (_, report, _) = json(&[
            "decompose",
            "--a1",
            &a1.to_string(),
            "--r",
            &r.to_string(),
            "--a2",
            &a2.to_string(),
            "--s",
            &s.to_string(),
        ]);
        let rec = records(&report, "decomposition")[0];
        spot_ok &= rec.get("difference") == Some(format_rational(&(g(a1, r) - g(a2, s))).as_str())
            && rec.get("identity_holds") == Some("true");
    }
    pass &= bounded && spot_ok;
    out.push(format!(
        "pairs disjoint with a2+s<=500: {bounded}; 10 differences match direct sums: {spot_ok}"
    ));
    Verdict {
        pass,
        expected: pass,
        detail: out.join("; "),
    }
}

fn bracket(a: u64, r: u64) -> u128 {
    (2 * a as u128 - 1) * (2 * a as u128 + 2 * r as u128 + 1) + 1
}

fn criterion_6() -> Verdict {
    let (a_max, r_max) = (300u64, 30u64);
    let mut oracle = Vec::new();
    for a1 in 1..=a_max {
        for r in 0..=r_max {
            let left = bracket(a1, r);
            for a2 in 1..=a_max {
                for s in 0..=r_max {
                    if (s as u128 + 1) * left == (r as u128 + 1) * bracket(a2, s) {
                        oracle.push((a1, r, a2, s));
                    }
                }
            }
        }
    }
    let library = e11_search(a_max, r_max);
    let search_matches = library == oracle;

    let (code, report, _) = json(&[
        "verify",
        "--lemma",
        "e11-search",
        "--a-max",
        "300",
        "--r-max",
        "30",
    ]);
    let reported: Vec<_> = records(&report, "e11-solution")
        .into_iter()
        .map(quad)
        .collect();
    let disjoint: Vec<_> = oracle
        .iter()
        .copied()
        .filter(|&(a1, r, a2, _)| a1 + r < a2)
        .collect();
    let listed_matches = reported == disjoint;
    let distinct = disjoint.iter().all(|&(a1, r, a2, s)| g(a1, r) != g(a2, s));

    let in_scope: Vec<_> = disjoint
        .iter()
        .copied()
        .filter(|&(_, r, a2, s)| s > r && a2 as u128 >= 4 * (s as u128 + 1).pow(3))
        .collect();
    let positive = in_scope.iter().all(|&(a1, r, a2, s)| g(a1, r) > g(a2, s));
    let (chain_code, chain, _) = json(&[
        "verify",
        "--lemma",
        "positivity-chain",
        "--a-max",
        "300",
        "--r-max",
        "30",
    ]);
    let evaluated: Vec<_> = records(&chain, "positivity-chain")
        .into_iter()
        .filter(|r| r.get("status") == Some("evaluated"))
        .map(|r| (quad(r), r.get("holds") == Some("true")))
        .collect();
    let chain_ok = chain_code == 0
        && evaluated.len() == in_scope.len()
        && evaluated.iter().all(|(q, ok)| *ok && in_scope.contains(q));

    let pass = search_matches && listed_matches && code == 0 && distinct && positive && chain_ok;
    Verdict {
        pass,
        expected: pass,
        detail: format!(
            "box a<=300, r,s<=30: {} solutions, oracle match {search_matches}; {} disjoint, \
             listed match {listed_matches}, all sums distinct {distinct}; {} meet s>r and \
             a2>=4(s+1)^3{} (chain evaluated on {}, all certified {chain_ok})",
            oracle.len(),
            disjoint.len(),
            in_scope.len(),
            if in_scope.is_empty() {
                ", positivity part vacuous"
            } else {
                ""
            },
            evaluated.len(),
        ),
    }
}

fn body_bytes(args: &[&str], threads: usize) -> (String, String, i32) {
    let mut j = vec!["--format", "json"];
    j.extend_from_slice(args);
    let rj = run(&j, Some(threads));
    let report = from_json(&rj.stdout).expect("json report");
    let json_body = serde_json::to_string(&report.results).unwrap();
    let mut c = vec!["--format", "csv"];
    c.extend_from_slice(args);
    let rc = run(&c, Some(threads));
    let csv_body = rc
        .stdout
        .split_once('\n')
        .map(|x| x.1.to_string())
        .unwrap_or_default();
    let parity = from_csv(&rc.stdout).expect("csv report").results == report.results;
    assert!(parity, "json and csv disagree for {args:?}");
    (json_body, csv_body, rj.code)
}

fn criterion_7() -> Verdict {
    let cases: Vec<Vec<&str>> = vec![
        vec!["search", "--max-n", "300"],
        vec!["--seed", "7", "search", "--max-n", "300", "--exponent", "1"],
        vec![
            "verify",
            "--lemma",
            "bracket-identity",
            "--pairs",
            "40",
            "--max-end",
            "200",
        ],
        vec![
            "verify",
            "--lemma",
            "decompose",
            "--pairs",
            "40",
            "--max-end",
            "200",
        ],
        vec![
            "verify", "--lemma", "eta-band", "--a-max", "12", "--r-max", "6", "--n-max", "300",
        ],
        vec![
            "verify",
            "--lemma",
            "e11-search",
            "--a-max",
            "120",
            "--r-max",
            "12",
        ],
        vec![
            "verify",
            "--lemma",
            "positivity-chain",
            "--a-max",
            "120",
            "--r-max",
            "12",
        ],
        vec![
            "verify",
            "--lemma",
            "large-prime-window",
            "--k-max",
            "4",
            "--span",
            "60",
        ],
        vec!["verify", "--lemma", "bertrand", "--n-max", "20000"],
        vec!["eta", "--a", "3", "--r", "2"],
        vec![
            "decompose",
            "--a1",
            "2",
            "--r",
            "0",
            "--a2",
            "4",
            "--s",
            "24",
        ],
        vec!["reduce", "--a1", "1", "--r", "3", "--a2", "2", "--s", "5"],
    ];
    let mut differing = Vec::new();
    for args in &cases {
        let base = body_bytes(args, 1);
        for threads in [1, 2, 4] {
            if body_bytes(args, threads) != base {
                differing.push(format!("{args:?} at {threads} threads"));
            }
        }
    }
    let pass = differing.is_empty();
    Verdict {
        pass,
        expected: pass,
        detail: if pass {
            format!(
                "{} invocations x threads {{1,1,2,4}}: json and csv bodies byte-identical",
                cases.len()
            )
        } else {
            format!("bodies differ: {}", differing.join(", "))
        },
    }
}

fn main() {
    // `cargo test -- <filter>` style arguments are accepted and ignored.
    let criteria: [(u8, fn() -> Verdict); 7] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
    ];
    let mut unexpected = 0;
    let mut failed = 0;
    for (id, check) in criteria {
        let v = check();
        let status = if v.pass { "PASS" } else { "FAIL" };
        let note = match (v.pass, v.expected) {
            (_, false) => {
                unexpected += 1;
                " [UNEXPECTED]"
            }
            (false, true) => " [claim false on this range; counterexamples match oracle]",
            (true, true) => "",
        };
        failed += !v.pass as u32;
        println!("criterion {id}: {status}{note} - {}", v.detail);
    }
    println!(
        "acceptance: {} passed, {failed} failed, {unexpected} unexpected",
        7 - failed
    );
    if unexpected > 0 {
        std::process::exit(1);
    }
}
