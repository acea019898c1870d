//! Degree sweeps: priors, budgets and exact optimization per sequence,
//! with verdicts, witness certificates and report output.

use std::fmt;
use std::fmt::Write as _;
use std::ops::RangeInclusive;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::budget::{admissible, Exclusion, Priors};
use crate::error::{Error, Result};
use crate::inequality::{elimination_threshold, eval_eq1, p_value};
use crate::lift::{HeightFunction, IdealFile, Monomial};
use crate::optimizer::{maximize_penalty, violations, RuleSet};
use crate::staircase::{enumerate_sequences, AcmClass, InvariantSequence};
use crate::Int;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// Every admissible lift has `12A - 22γ < P`.
    Eliminated,
    /// Some admissible lift satisfies the inequality.
    Survives,
    ExcludedByPrior {
        reason: Exclusion,
    },
}

impl Verdict {
    pub fn label(&self) -> String {
        match self {
            Verdict::Eliminated => "Eliminated".into(),
            Verdict::Survives => "Survives".into(),
            Verdict::ExcludedByPrior { reason } => format!("ExcludedByPrior({})", reason.code()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyRecord {
    pub d: u32,
    pub s: usize,
    pub lambdas: InvariantSequence,
    /// Sporadic-zero budget, when a formula applies.
    pub z: Option<Int>,
    pub acm: AcmClass,
    /// `None` when the sequence was not optimized or has no admissible lift.
    pub best_objective: Option<Int>,
    #[serde(rename = "best_A")]
    pub best_a: Option<Int>,
    pub best_gamma: Option<Int>,
    #[serde(rename = "P")]
    pub p: Int,
    pub a_min: Option<Int>,
    pub verdict: Verdict,
    /// Relative path of the witness file, for surviving sequences.
    pub witness_ref: Option<String>,
    pub witness: Option<HeightFunction>,
    pub rule_set_id: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyConfig {
    pub d_min: u32,
    pub d_max: u32,
    pub s_values: Vec<usize>,
    pub priors: Priors,
    pub rules: RuleSet,
}

impl Default for SurveyConfig {
    fn default() -> Self {
        SurveyConfig {
            d_min: 43,
            d_max: 66,
            s_values: vec![4, 5],
            priors: Priors::default(),
            rules: RuleSet::default(),
        }
    }
}

/// Priors and rules as read from a configuration file; missing fields keep
/// their defaults.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ConfigFile {
    pub priors: Priors,
    pub rules: RuleSet,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyReport {
    pub records: Vec<SurveyRecord>,
    /// Largest `d` among surviving records, 0 if none survive.
    pub max_surviving_degree: u32,
    pub config: SurveyConfig,
}

impl SurveyReport {
    pub fn survivors(&self) -> impl Iterator<Item = &SurveyRecord> {
        self.records.iter().filter(|r| r.verdict == Verdict::Survives)
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Classifies one sequence: priors first, then the budget, then the exact
/// optimizer against the threshold `P`.
pub fn classify(seq: &InvariantSequence, rules: &RuleSet, priors: &Priors) -> SurveyRecord {
    let p = p_value(seq);
    let z = rules.resolve_z(seq).ok();
    let mut record = SurveyRecord {
        d: seq.d(),
        s: seq.s(),
        lambdas: seq.clone(),
        z,
        acm: seq.acm_class(),
        best_objective: None,
        best_a: None,
        best_gamma: None,
        p,
        a_min: z.map(|z| elimination_threshold(seq, z).a_min),
        verdict: Verdict::Eliminated,
        witness_ref: None,
        witness: None,
        rule_set_id: rules.id(),
    };
    let excluded = match (admissible(seq, priors), z) {
        (Err(reason), _) => Some(reason),
        (Ok(()), None) => Some(Exclusion::NoBudgetFormula { s: seq.s() }),
        (Ok(()), Some(z)) if z < 0 => Some(Exclusion::NegativeBudget { z }),
        _ => None,
    };
    if let Some(reason) = excluded {
        record.verdict = Verdict::ExcludedByPrior { reason };
        return record;
    }
    // with a valid budget the only failure left is an empty search space
    if let Ok(r) = maximize_penalty(seq, rules) {
        record.best_objective = Some(r.best_objective);
        record.best_a = Some(r.best_a);
        record.best_gamma = Some(r.best_gamma);
        if !r.eliminated {
            record.verdict = Verdict::Survives;
            record.witness_ref = Some(witness_file(&r.witness).0);
            record.witness = Some(r.witness);
        }
    }
    record
}

/// Classifies every connected sequence with `d` in `d_range` and `s` in
/// `s_set`. Records are ordered by `d` descending, then `s` ascending,
/// then `λ` lexicographically descending.
pub fn run_survey(
    d_range: RangeInclusive<u32>,
    s_set: &[usize],
    rules: &RuleSet,
    priors: &Priors,
) -> SurveyReport {
    let mut s_values = s_set.to_vec();
    s_values.sort_unstable();
    s_values.dedup();
    let seqs: Vec<InvariantSequence> = d_range
        .clone()
        .rev()
        .flat_map(|d| s_values.iter().flat_map(move |&s| enumerate_sequences(d, s)))
        .collect();
    let records: Vec<SurveyRecord> = seqs.par_iter().map(|q| classify(q, rules, priors)).collect();
    let max_surviving_degree =
        records.iter().filter(|r| r.verdict == Verdict::Survives).map(|r| r.d).max().unwrap_or(0);
    SurveyReport {
        records,
        max_surviving_degree,
        config: SurveyConfig {
            d_min: *d_range.start(),
            d_max: *d_range.end(),
            s_values,
            priors: priors.clone(),
            rules: rules.clone(),
        },
    }
}

/// Content-addressed file for a witness: `witnesses/<hash>.json` and the
/// ideal JSON it holds.
pub fn witness_file(h: &HeightFunction) -> (String, String) {
    let json = h.to_ideal().to_json();
    let digest = Sha256::digest(json.as_bytes());
    (format!("witnesses/{}.json", hex::encode(&digest[..8])), json + "\n")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub lambdas: InvariantSequence,
    pub gamma: Int,
    #[serde(rename = "A")]
    pub a: Int,
    /// `P - (12A - 22γ)`; the lift satisfies the inequality iff `<= 0`.
    pub value: Int,
    /// Redundant generators removed while reading the file.
    pub dropped: Vec<Monomial>,
    pub checks: Vec<Check>,
}

impl WitnessReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for WitnessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let mark = if c.passed { "pass" } else { "FAIL" };
            writeln!(f, "[{mark}] {}: {}", c.name, c.detail)?;
        }
        Ok(())
    }
}

fn check(name: &str, passed: bool, detail: impl Into<String>) -> Check {
    Check { name: name.into(), passed, detail: detail.into() }
}

/// Re-verifies an ideal file as a surviving lift: Borel-fixedness,
/// saturation, heights, zero statistics, the admissibility rules and the
/// inequality.
pub fn verify_witness(text: &str, rules: &RuleSet) -> Result<WitnessReport> {
    let (ideal, dropped) = IdealFile::parse(text)?.into_ideal();
    let mut checks = Vec::new();
    let detail = if dropped.is_empty() {
        format!("{} generators", ideal.generators().len())
    } else {
        let names: Vec<String> = dropped.iter().map(Monomial::to_string).collect();
        format!("normalized, dropped redundant {}", names.join(", "))
    };
    checks.push(check("minimal_generators", true, detail));
    let borel = ideal.is_borel_fixed();
    checks.push(check(
        "borel_fixed",
        borel,
        if borel { "every Borel move stays in the ideal" } else { "a Borel move leaves the ideal" },
    ));
    let seq = ideal.saturate()?;
    checks.push(check("saturation", seq.is_connected(), format!("{{{seq}}}, d = {}", seq.d())));
    let h = ideal.heights_of()?;
    let st = h.zero_stats();
    checks.push(check("zero_stats", true, format!("gamma = {}, A = {}", st.gamma, st.degree_sum)));
    match violations(&h, rules) {
        Ok(v) if v.is_empty() => checks.push(check("admissible", true, format!("rules {}", rules.id()))),
        Ok(v) => {
            let found: Vec<String> = v.iter().map(|v| format!("{} {}", v.rule.code(), v.detail)).collect();
            checks.push(check("admissible", false, found.join("; ")));
        }
        Err(e) => checks.push(check("admissible", false, e.to_string())),
    }
    let eq1 = eval_eq1(&seq, st.degree_sum, st.gamma);
    checks.push(check("inequality", eq1.is_consistent(), format!("P = {}, value = {}", eq1.p, eq1.value)));
    Ok(WitnessReport { lambdas: seq, gamma: st.gamma, a: st.degree_sum, value: eq1.value, dropped, checks })
}

/// Re-checks every record of a report: survivors through their witness,
/// eliminated records against the inequality. Returns the failures.
pub fn audit(report: &SurveyReport) -> Vec<String> {
    let mut failures = Vec::new();
    for r in &report.records {
        let tag = format!("d = {}, {{{}}}", r.d, r.lambdas);
        match &r.verdict {
            Verdict::Survives => {
                let Some(w) = &r.witness else {
                    failures.push(format!("{tag}: survives without a witness"));
                    continue;
                };
                let mut rules = report.config.rules.clone();
                if let Some(z) = r.z {
                    rules.budget_z = crate::optimizer::BudgetZ::Fixed(z);
                }
                let text = w.to_ideal().to_json();
                match verify_witness(&text, &rules) {
                    Ok(v) if v.passed() && v.lambdas == r.lambdas => {}
                    Ok(v) => failures.push(format!("{tag}: witness fails\n{v}")),
                    Err(e) => failures.push(format!("{tag}: witness unreadable: {e}")),
                }
                if r.witness_ref.as_deref() != Some(witness_file(w).0.as_str()) {
                    failures.push(format!("{tag}: witness reference does not match its content"));
                }
            }
            Verdict::Eliminated => {
                if let (Some(a), Some(g)) = (r.best_a, r.best_gamma) {
                    if eval_eq1(&r.lambdas, a, g).is_consistent() {
                        failures
                            .push(format!("{tag}: eliminated but its best lift satisfies the inequality"));
                    }
                }
            }
            Verdict::ExcludedByPrior { .. } => {
                if admissible(&r.lambdas, &report.config.priors).is_ok() && r.z.is_some_and(|z| z >= 0) {
                    failures.push(format!("{tag}: excluded although the priors allow it"));
                }
            }
        }
    }
    failures
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
    Markdown,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            "md" | "markdown" => Ok(ReportFormat::Markdown),
            _ => Err(Error::Parse(format!("unknown report format {s:?}"))),
        }
    }
}

impl ReportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ReportFormat::Csv => "csv",
            ReportFormat::Json => "json",
            ReportFormat::Markdown => "md",
        }
    }
}

fn opt(x: Option<Int>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub const CSV_HEADER: [&str; 11] =
    ["d", "s", "lambdas", "z", "acm", "best_A", "best_gamma", "objective", "P", "a_min", "verdict"];

fn csv_row(r: &SurveyRecord) -> [String; 11] {
    [
        r.d.to_string(),
        r.s.to_string(),
        r.lambdas.to_string(),
        opt(r.z),
        r.acm.label().to_string(),
        opt(r.best_a),
        opt(r.best_gamma),
        opt(r.best_objective),
        r.p.to_string(),
        opt(r.a_min),
        r.verdict.label(),
    ]
}

pub fn emit_report(report: &SurveyReport, format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Json => Ok(serde_json::to_string_pretty(report)? + "\n"),
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| Error::Io(e.to_string());
            w.write_record(CSV_HEADER).map_err(io)?;
            for r in &report.records {
                w.write_record(csv_row(r)).map_err(io)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
        }
        ReportFormat::Markdown => Ok(markdown(report)),
    }
}

fn markdown(report: &SurveyReport) -> String {
    let c = &report.config;
    let s_list: Vec<String> = c.s_values.iter().map(usize::to_string).collect();
    let mut out = String::new();
    let _ = writeln!(out, "# Survey for d = {}..{}, s in {{{}}}\n", c.d_min, c.d_max, s_list.join(", "));
    let _ = writeln!(
        out,
        "Rules: `{}`. Largest surviving degree: {}.\n",
        c.rules.id(),
        report.max_surviving_degree
    );
    for &s in &c.s_values {
        let _ = writeln!(out, "## s = {s}\n");
        let _ = writeln!(out, "| degree | z | {{λi}} | acm | best A | γ | 12A-22γ | P | a_min | verdict |");
        let _ = writeln!(out, "|---:|---:|---|---|---:|---:|---:|---:|---:|---|");
        for r in report.records.iter().filter(|r| r.s == s) {
            let row = csv_row(r);
            let _ = writeln!(
                out,
                "| {} | {} | {{{}}} | {} | {} | {} | {} | {} | {} | {} |",
                row[0], row[3], row[2], row[4], row[5], row[6], row[7], row[8], row[9], row[10]
            );
        }
        out.push('\n');
    }
    out
}
