use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use evendecomp::experiments::*;
use evendecomp::planted::{planted_batch, PlantedKind};
use evendecomp::stats::within_sigmas;
use evendecomp::*;
use serde_json::Value;

const ALPHA: f64 = 1e-3;

struct Verdict {
    ok: bool,
    detail: String,
}

fn verdict(ok: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        ok,
        detail: detail.into(),
    }
}

fn cli(args: &[&str]) -> (Option<i32>, String) {
    let o = Command::new(env!("CARGO_BIN_EXE_evendecomp"))
        .args(args)
        .output()
        .unwrap();
    (o.status.code(), String::from_utf8(o.stdout).unwrap())
}

fn opts(workers: usize) -> RunOptions {
    RunOptions {
        workers,
        timing: false,
    }
}

fn census_of(n: usize, decomposability: bool, degeneracy: bool, workers: usize) -> CensusReport {
    census(
        n,
        CensusOptions {
            decomposability,
            degeneracy,
            exemplars: 8,
            workers,
        },
    )
    .unwrap()
}

fn k4_verdict() -> Verdict {
    let k4 = Graph::complete(4);
    let start = Instant::now();
    let dec = exact_even_decomposable(&k4).unwrap();
    let deg = exact_even_degenerate(&k4).unwrap();
    let elapsed = start.elapsed();
    let (code, out) = cli(&["decide", "--g6", "C~"]);
    let v: Value = serde_json::from_str(out.trim()).unwrap();
    let ok = dec.is_none()
        && deg.is_none()
        && code == Some(1)
        && v["verdict"] == "non-even-decomposable"
        && v["degeneracy"] == "non-even-degenerate"
        && elapsed < Duration::from_millis(1);
    verdict(
        ok,
        format!("{} / {}, {elapsed:?}", v["verdict"], v["degeneracy"]),
    )
}

fn census_decomposability_four() -> Verdict {
    let r = census_of(4, true, false, 1);
    let ok = r.even_edge == 32
        && r.even_decomposable == Some(31)
        && r.exemplars.even_non_decomposable == ["C~"];
    verdict(
        ok,
        format!(
            "{:?} of {} even graphs decomposable, failures {:?}",
            r.even_decomposable, r.even_edge, r.exemplars.even_non_decomposable
        ),
    )
}

fn census_degeneracy_four() -> Verdict {
    let r = census_of(4, false, true, 1);
    let ok =
        r.total == 64 && r.non_even_degenerate == Some(8) && r.non_degenerate_all_odd == Some(8);
    verdict(
        ok,
        format!(
            "{:?} of {} non-even-degenerate, {:?} with all degrees odd",
            r.non_even_degenerate, r.total, r.non_degenerate_all_odd
        ),
    )
}

fn tiny_degeneracy() -> Verdict {
    let counts: Vec<Option<u64>> = (1..=3)
        .map(|n| census_of(n, false, true, 1).non_even_degenerate)
        .collect();
    verdict(
        counts.iter().all(|&c| c == Some(0)),
        format!("n = 1..3: {counts:?}"),
    )
}

fn k4_free() -> Verdict {
    let counts: Vec<Option<u64>> = (1..=7)
        .map(|n| census_of(n, true, false, 8).k4_free_even_non_decomposable)
        .collect();
    verdict(
        counts.iter().all(|&c| c == Some(0)),
        format!("exceptions for n = 1..7: {counts:?}"),
    )
}

fn degenerate_implies_decomposable() -> Verdict {
    let counts: Vec<Option<u64>> = (1..=6)
        .map(|n| census_of(n, true, true, 8).degenerate_even_non_decomposable)
        .collect();
    verdict(
        counts.iter().all(|&c| c == Some(0)),
        format!("exceptions for n = 1..6: {counts:?}"),
    )
}

fn rig_suites() -> Verdict {
    let (code, out) = cli(&["verify-lemmas"]);
    let rows: Vec<Value> = out
        .lines()
        .filter(|l| !l.starts_with("{\"config\""))
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    let count = |suite: &str| rows.iter().filter(|r| r["suite"] == suite).count();
    let failed = rows.iter().filter(|r| r["passed"] != true).count();
    let coverage = [
        ("dense-stage-2", 40),
        ("dense-stage-3", 30),
        ("sparse-stage-2", 40),
        ("sparse-stage-3", 30),
    ];
    let covered = coverage.iter().all(|&(s, k)| count(s) == k);
    verdict(
        code == Some(0) && failed == 0 && covered,
        format!("{} cases, {failed} failed", rows.len()),
    )
}

fn planted() -> Verdict {
    let mut parts = Vec::new();
    let mut ok = true;
    for kind in PlantedKind::ALL {
        let t = planted_batch(kind, 10_000, 0x5eed);
        ok &= t.instances == 10_000 && t.sound() && t.decomposed > 0;
        parts.push(format!(
            "{}: {} decomposed, {} bad witnesses, {} faults",
            kind.name(),
            t.decomposed,
            t.bad_witness,
            t.faults
        ));
    }
    verdict(ok, parts.join("; "))
}

fn c4_monte_carlo() -> Verdict {
    let r = estimate_c(4, 1_000_000, 4004, opts(8)).unwrap();
    verdict(
        within_sigmas(r.estimate, r.sigma(), 0.125, 3.0),
        format!("estimate {:.5} +- {:.5}", r.estimate, r.sigma()),
    )
}

fn recursion_inequality() -> Verdict {
    let recs: Vec<ExperimentRecord> = (4..=15)
        .map(|n| estimate_c(n, 1_000_000, 1010, opts(8)).unwrap())
        .collect();
    let mut worst = f64::INFINITY;
    for w in recs.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let q = 2f64.powi(-(a.n as i32));
        let sigma = (a.sigma().powi(2) + b.sigma().powi(2)).sqrt();
        worst = worst.min((1.0 - q) * a.estimate + q + 3.0 * sigma - b.estimate);
    }
    let est: Vec<String> = recs.iter().map(|r| format!("{:.4}", r.estimate)).collect();
    verdict(
        worst >= 0.0,
        format!("smallest slack {worst:.5}; c_4..c_15 = {}", est.join(" ")),
    )
}

fn removal_bound_holds() -> Verdict {
    let r = removal_process_stats(30, 10, 3, 100_000, 1111, opts(8)).unwrap();
    let bound = removal_bound(10, 3);
    verdict(
        r.estimate >= bound - 3.0 * r.sigma(),
        format!(
            "P(F) = {:.4} +- {:.4}, bound {bound:.4}",
            r.estimate,
            r.sigma()
        ),
    )
}

fn statistical_suites() -> Verdict {
    let mut worst: (f64, String) = (1.0, String::new());
    let mut note = |p: f64, label: String| {
        if p < worst.0 {
            worst = (p, label);
        }
    };
    for n in 2..=8 {
        let samples = if n == 8 { 1_000_000 } else { 200_000 };
        let r = degree_parity_gof(n, samples, 1212 + n as u64, opts(8)).unwrap();
        note(r.estimate, format!("degree parity n = {n}"));
    }
    for n in 3..=5usize {
        let masks: Vec<u64> = (0u64..1 << n).filter(|m| m.count_ones() % 2 == 0).collect();
        for vertex in 0..n {
            for &mask in masks.iter().step_by(masks.len().div_ceil(4)) {
                let r = forgetfulness_gof(n, vertex, mask, 100_000, 1313, opts(8)).unwrap();
                note(
                    r.estimate,
                    format!("forgetfulness n = {n} v = {vertex} parities {mask:#b}"),
                );
            }
        }
    }
    let (p, label) = worst;
    verdict(p >= ALPHA, format!("smallest p-value {p:.4} ({label})"))
}

fn determinism() -> Verdict {
    let runs: [&[&str]; 7] = [
        &["c", "-n", "6", "--n-to", "9", "--samples", "50000"],
        &["b-star", "-n", "7", "-s", "5", "--samples", "50000"],
        &[
            "removal",
            "-n",
            "12",
            "-t",
            "5",
            "-a",
            "2",
            "--samples",
            "20000",
        ],
        &["degree-parity", "-n", "6", "--samples", "50000"],
        &[
            "forgetfulness",
            "-n",
            "4",
            "--vertex",
            "2",
            "--samples",
            "50000",
        ],
        &[
            "nondecomposable",
            "-n",
            "10",
            "-p",
            "0.3",
            "--samples",
            "20000",
        ],
        &["planted", "--kind", "dense", "-n", "64", "--samples", "500"],
    ];
    let mut mismatched = Vec::new();
    for args in runs {
        let mut outputs = Vec::new();
        for workers in ["1", "2", "8"] {
            for format in ["csv", "json"] {
                let mut full = vec![
                    "mc",
                    "--seed",
                    "13",
                    "--workers",
                    workers,
                    "--format",
                    format,
                ];
                full.extend_from_slice(args);
                let (code, out) = cli(&full);
                assert_eq!(code, Some(0), "{full:?}");
                let records: Vec<String> = out
                    .lines()
                    .filter(|l| !l.starts_with("# config:") && !l.starts_with("{\"config\""))
                    .map(str::to_string)
                    .collect();
                outputs.push((format, records));
            }
        }
        for format in ["csv", "json"] {
            let same: Vec<&Vec<String>> = outputs
                .iter()
                .filter(|o| o.0 == format)
                .map(|o| &o.1)
                .collect();
            if same.iter().any(|r| *r != same[0]) {
                mismatched.push(format!("{} ({format})", args[0]));
            }
        }
    }
    verdict(
        mismatched.is_empty(),
        format!(
            "{} experiments x 2 formats at 1, 2, 8 workers; mismatches {mismatched:?}",
            runs.len()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(u32, Duration, fn() -> Verdict); 13] = [
        (1, Duration::from_secs(60), k4_verdict),
        (2, Duration::from_secs(1), census_decomposability_four),
        (3, Duration::from_secs(1), census_degeneracy_four),
        (4, Duration::from_secs(1), tiny_degeneracy),
        (5, Duration::from_secs(30 * 60), k4_free),
        (
            6,
            Duration::from_secs(2 * 60),
            degenerate_implies_decomposable,
        ),
        (7, Duration::from_secs(10), rig_suites),
        (8, Duration::from_secs(5 * 60), planted),
        (9, Duration::from_secs(30), c4_monte_carlo),
        (10, Duration::from_secs(30 * 60), recursion_inequality),
        (11, Duration::from_secs(10 * 60), removal_bound_holds),
        (12, Duration::from_secs(5 * 60), statistical_suites),
        (13, Duration::from_secs(5 * 60), determinism),
    ];
    let mut failures = 0;
    for (id, budget, run) in criteria {
        let start = Instant::now();
        let v = run();
        let elapsed = start.elapsed();
        let ok = v.ok && elapsed <= budget;
        failures += usize::from(!ok);
        println!(
            "criterion {id:>2}: {} {} [{:.2?} of {budget:?}]",
            if ok { "PASS" } else { "FAIL" },
            v.detail,
            elapsed
        );
    }
    println!("{} of 13 criteria passed", 13 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
