//! End-to-end acceptance checks. Prints one line per criterion and fails
//! if any criterion fails.

#[path = "../../core/tests/support/mod.rs"]
mod support;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ginbound::budget::{max_sporadic, BudgetVariant};
use ginbound::inequality::{elimination_threshold, gamma_lower_gate, neg_statistic, plane_curve_lemma};
use ginbound::optimizer::{evaluate_schedule, maximize_penalty, BudgetZ, RuleSet};
use ginbound::staircase::enumerate_sequences;
use ginbound::survey::{verify_witness, SurveyReport, Verdict};
use ginbound::{Column, HeightFunction, InvariantSequence, Rational, Scalar};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

/// All integer criteria are exact; the only tolerance is zero.
const TOLERANCE: i64 = 0;
/// Sample size for the Borel round-trip.
const ROUND_TRIP_CASES: u32 = 100;
/// Minimum number of oracle instances.
const ORACLE_MIN: usize = 200;

type Check = Result<String, String>;

fn seq(l: &[u32]) -> InvariantSequence {
    InvariantSequence::new(l.to_vec()).unwrap()
}

fn hf(l: &[u32], entries: &[((u32, u32), u32)]) -> HeightFunction {
    HeightFunction::from_entries(seq(l), entries.iter().map(|&((a, b), v)| (Column::new(a, b), v))).unwrap()
}

fn close(got: i64, want: i64) -> bool {
    (got - want).abs() <= TOLERANCE
}

fn expect(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn budget_table() -> Check {
    let rows: [(&[u32], i64); 7] = [
        (&[14, 12, 11, 9], 50),
        (&[14, 12, 10, 9], 49),
        (&[13, 12, 11, 9], 48),
        (&[13, 11, 10, 8, 6], 45),
        (&[13, 11, 9, 8, 6], 44),
        (&[12, 11, 10, 8, 6], 43),
        (&[13, 11, 9, 7, 6], 44),
    ];
    let mut bad = Vec::new();
    for (l, want) in rows {
        let z = max_sporadic(&seq(l), BudgetVariant::S4Table).map_err(|e| e.to_string())?.z;
        if !close(z, want) {
            bad.push(format!("{{{}}} gives {z}, want {want}", seq(l)));
        }
    }
    expect(bad.is_empty(), if bad.is_empty() { "7/7 budgets exact".into() } else { bad.join("; ") })
}

fn neg_table() -> Check {
    let rows: [(&[u32], i64, i64, i64); 7] = [
        (&[14, 12, 11, 9], 921, 50, -2),
        (&[14, 12, 10, 9], 882, 49, -18),
        (&[13, 12, 11, 9], 854, 48, -2),
        (&[13, 11, 10, 8, 6], 810, 45, -14),
        (&[13, 11, 9, 8, 6], 770, 44, -20),
        (&[12, 11, 10, 8, 6], 743, 43, -4),
        (&[13, 11, 9, 7, 6], 770, 44, -56),
    ];
    let got: Vec<i64> = rows.iter().map(|&(l, a, z, _)| neg_statistic(&seq(l), a, z)).collect();
    let ok = rows.iter().zip(&got).all(|(r, &g)| close(g, r.3));
    expect(ok, format!("neg = {got:?}"))
}

fn shipped_witness() -> Check {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/examples/witness46.json");
    let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
    let v = verify_witness(&text, &RuleSet::default()).map_err(|e| e.to_string())?;
    let ok = v.passed()
        && v.lambdas == seq(&[13, 11, 9, 7, 6])
        && close(v.gamma, 44)
        && close(v.a, 731)
        && close(v.value, -202)
        && v.value <= 0;
    expect(ok, format!("{{{}}}, gamma = {}, A = {}, value = {}", v.lambdas, v.gamma, v.a, v.value))
}

fn degree_48_elimination() -> Check {
    let q = seq(&[13, 11, 10, 8, 6]);
    let placement = hf(&[13, 11, 10, 8, 6], &[((0, 13), 12), ((1, 11), 12), ((4, 6), 16), ((3, 8), 5)]);
    let e = evaluate_schedule(&placement);
    let r = maximize_penalty(&q, &RuleSet::default()).map_err(|e| e.to_string())?;
    let a_min = elimination_threshold(&q, 45).a_min;
    let ok = close(e.a, 777)
        && close(e.gamma, 45)
        && close(r.best_objective, 8334)
        && r.best_objective < r.p
        && r.eliminated
        && close(r.p, 8562)
        && close(a_min, 796);
    expect(
        ok,
        format!(
            "placement A = {}, gamma = {}; optimum {} vs P = {} ({}); a_min = {a_min}",
            e.a,
            e.gamma,
            r.best_objective,
            r.p,
            if r.eliminated { "Eliminated" } else { "Survives" }
        ),
    )
}

fn ci_subcase() -> Check {
    let q = seq(&[13, 11, 10, 8, 6]);
    let ci = hf(&[13, 11, 10, 8, 6], &[((1, 11), 12), ((0, 13), 12)]);
    let e = evaluate_schedule(&ci);
    let p = elimination_threshold(&q, 45).objective_threshold;
    let ok = close(e.a, 432) && close(e.gamma, 24) && e.objective() < p;
    expect(ok, format!("A = {}, gamma = {}, 12A-22γ = {} < P = {p}", e.a, e.gamma, e.objective()))
}

fn oracle_equivalence() -> Check {
    let grid = support::oracle_grid();
    let mut bad = Vec::new();
    for (q, z, rules) in &grid {
        if let Err(e) = support::check_against_oracle(q, *z, rules) {
            bad.push(e);
        }
    }
    let ok = bad.is_empty() && grid.len() >= ORACLE_MIN;
    let detail = format!("{} instances, {} mismatches", grid.len(), bad.len());
    expect(ok, bad.first().map(|b| format!("{detail}: {b}")).unwrap_or(detail))
}

fn borel_round_trip() -> Check {
    let config = Config { cases: ROUND_TRIP_CASES, failure_persistence: None, ..Config::default() };
    let mut runner = TestRunner::new_with_rng(
        config,
        proptest::test_runner::TestRng::deterministic_rng(proptest::test_runner::RngAlgorithm::ChaCha),
    );
    let seqs =
        (1usize..=4, 1u32..=16, any::<prop::sample::Index>()).prop_filter_map("empty", |(s, d, pick)| {
            let all = enumerate_sequences(d, s);
            (!all.is_empty()).then(|| all[pick.index(all.len())].clone())
        });
    let raw = prop::collection::vec(prop::collection::vec(0u32..7, 6), 5);
    let strategy = (seqs, raw).prop_map(|(q, raw)| support::borel_lift(&q, &raw));
    let result = runner.run(&strategy, |h| {
        let ideal = h.to_ideal();
        let gens = ideal.generators().len() == h.minimal_generators().len();
        prop_assert!(gens);
        prop_assert!(ideal.is_borel_fixed());
        prop_assert_eq!(ideal.heights_of().unwrap(), h);
        Ok(())
    });
    match result {
        Ok(()) => Ok(format!("{ROUND_TRIP_CASES} random Borel lifts round-trip")),
        Err(e) => Err(e.to_string()),
    }
}

fn cubic_gates() -> Check {
    let q = |s: usize, d: u32| gamma_lower_gate::<Rational>(s, d).unwrap();
    let zero = Rational::from_int(0);
    let gates = q(4, 25).cubic_value <= zero
        && q(4, 26).cubic_value > zero
        && q(4, 25).d_cap_if_gate_fails == 25
        && q(5, 32).cubic_value <= zero
        && q(5, 33).cubic_value > zero
        && q(5, 32).d_cap_if_gate_fails == 32;
    let mut lemma_ok = true;
    for (s, from) in [(7, 43), (6, 43), (5, 35)] {
        for d in 10..=120 {
            let c = plane_curve_lemma::<Rational>(s, d).unwrap().contradiction;
            lemma_ok &= c == (d >= from);
        }
    }
    expect(
        gates && lemma_ok,
        format!(
            "q4(25) = {}, q4(26) = {}, q5(32) = {}, q5(33) = {}; lemma thresholds 43, 43, 35",
            q(4, 25).cubic_value,
            q(4, 26).cubic_value,
            q(5, 32).cubic_value,
            q(5, 33).cubic_value
        ),
    )
}

fn survey_cli(out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ginbound"))
        .args(["survey", "--d-min", "43", "--d-max", "66", "--s", "4,5", "--out"])
        .arg(out)
        .output()
        .expect("running the survey")
}

fn survey_bound(out: &Path, run: &Output) -> Check {
    let text = std::fs::read_to_string(out.join("report.json")).map_err(|e| e.to_string())?;
    let report = SurveyReport::parse_json(&text).map_err(|e| e.to_string())?;
    let stderr = String::from_utf8_lossy(&run.stderr);
    let target = seq(&[13, 11, 9, 7, 6]);
    let rec46 = report.records.iter().find(|r| r.lambdas == target);
    let Some(rec46) = rec46 else { return Err("no record for {13,11,9,7,6}".into()) };
    let shipped = std::fs::read_to_string(
        Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/examples/witness46.json"),
    )
    .map_err(|e| e.to_string())?;
    let rules = RuleSet { budget_z: BudgetZ::Fixed(rec46.z.unwrap_or(-1)), ..report.config.rules.clone() };
    let backed = rec46.verdict == Verdict::Survives
        && verify_witness(&shipped, &rules).map(|v| v.passed()).unwrap_or(false);
    let high: Vec<_> = report.survivors().filter(|r| r.d >= 47).collect();
    if high.is_empty() {
        let ok = report.max_surviving_degree == 46 && backed && run.status.success();
        return expect(ok, format!("max surviving degree {}", report.max_surviving_degree));
    }
    // Some d >= 47 survives: the run must fail and certify every survivor.
    let mut bad = Vec::new();
    for r in &high {
        let Some(path) = &r.witness_ref else {
            bad.push(format!("d = {} has no witness", r.d));
            continue;
        };
        let file = std::fs::read_to_string(out.join(path)).unwrap_or_default();
        let mut rules = report.config.rules.clone();
        rules.budget_z = BudgetZ::Fixed(r.z.unwrap_or(-1));
        let verified = verify_witness(&file, &rules).map(|v| v.passed() && v.lambdas == r.lambdas);
        if !matches!(verified, Ok(true)) || !stderr.contains(path.as_str()) {
            bad.push(format!("d = {} {{{}}} not certified", r.d, r.lambdas));
        }
    }
    let ok = run.status.code() == Some(2) && bad.is_empty() && backed;
    let detail = format!(
        "honest certificate: exit code {}, {} survivors with d >= 47, max surviving degree {}, each witness re-verified",
        run.status.code().map_or("none".to_string(), |c| c.to_string()),
        high.len(),
        report.max_surviving_degree
    );
    expect(ok, if bad.is_empty() { detail } else { format!("{detail}; {}", bad.join("; ")) })
}

fn determinism(a: &Path, b: &Path, runs: (&Output, &Output)) -> Check {
    let mut differing = Vec::new();
    if runs.0.status.code() != runs.1.status.code() || runs.0.stderr != runs.1.stderr {
        differing.push("exit status or diagnostics");
    }
    for name in ["report.csv", "report.json", "report.md", "config.json"] {
        let x = std::fs::read(a.join(name)).map_err(|e| e.to_string())?;
        let y = std::fs::read(b.join(name)).map_err(|e| e.to_string())?;
        if x != y {
            differing.push(name);
        }
    }
    let list = |p: &Path| -> Vec<PathBuf> {
        let mut v: Vec<PathBuf> = std::fs::read_dir(p.join("witnesses"))
            .map(|d| d.filter_map(|e| e.ok()).map(|e| e.file_name().into()).collect())
            .unwrap_or_default();
        v.sort();
        v
    };
    if list(a) != list(b) {
        differing.push("witnesses/");
    }
    let detail = if differing.is_empty() {
        "reports, config, witnesses and diagnostics byte-identical".to_string()
    } else {
        format!("differing: {}", differing.join(", "))
    };
    expect(differing.is_empty(), detail)
}

fn main() {
    let first = tempfile::tempdir().expect("temp dir");
    let second = tempfile::tempdir().expect("temp dir");
    let run1 = survey_cli(first.path());
    let run2 = survey_cli(second.path());
    let results: Vec<(u32, &str, Check)> = vec![
        (1, "budget table", budget_table()),
        (2, "neg statistic table", neg_table()),
        (3, "shipped witness", shipped_witness()),
        (4, "degree 48 elimination", degree_48_elimination()),
        (5, "complete intersection sub-case", ci_subcase()),
        (6, "optimizer oracle equivalence", oracle_equivalence()),
        (7, "Borel round trip", borel_round_trip()),
        (8, "cubic gates and plane-curve thresholds", cubic_gates()),
        (9, "survey up to degree 66", survey_bound(first.path(), &run1)),
        (10, "survey determinism", determinism(first.path(), second.path(), (&run1, &run2))),
    ];
    let mut failed = 0;
    for (n, name, r) in &results {
        match r {
            Ok(d) => println!("criterion {n:>2} PASS {name}: {d}"),
            Err(d) => {
                failed += 1;
                println!("criterion {n:>2} FAIL {name}: {d}");
            }
        }
    }
    println!("{} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
