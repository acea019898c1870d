mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use ginbound::budget::{max_sporadic, BudgetVariant, Priors};
use ginbound::inequality::{
    elimination_threshold, eval_eq1, gamma_lower_gate, lambda0_cap, naive_a_bound, neg_statistic, p_value,
    plane_curve_lemma,
};
use ginbound::optimizer::{heuristic_schedule, maximize_penalty, HeuristicBranch, RuleSet};
use ginbound::staircase::enumerate_sequences;
use ginbound::survey::{
    audit, emit_report, run_survey, verify_witness, witness_file, ConfigFile, ReportFormat, SurveyReport,
};
use ginbound::{InvariantSequence, Rational, Scalar};
use serde_json::{json, Value};

use output::{emit, object, render, write_file};

/// Exact degree-bound pipeline: budgets, penalties, lifts and surveys.
#[derive(Parser)]
#[command(name = "ginbound", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Output format: csv, json or md.
    #[arg(long, global = true, value_parser = parse_format)]
    format: Option<ReportFormat>,
    /// Rule modifiers, e.g. `default`, `no-ci`, `no-borel,z=40`.
    #[arg(long, global = true, default_value = "default")]
    rules: String,
    /// Budget formula for s = 4: s4_table or s4_paper.
    #[arg(long, global = true)]
    budget_variant: Option<BudgetVariant>,
    /// Write results into this directory instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// JSON file with `priors` and `rules`; modifiers apply on top.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// List connected invariant sequences.
    Enumerate {
        /// Degree, or a range `lo:hi`.
        #[arg(long, value_parser = parse_range)]
        d: (u32, u32),
        /// Comma-separated values of s.
        #[arg(long, value_delimiter = ',', default_values_t = [4usize, 5])]
        s: Vec<usize>,
    },
    /// Sporadic-zero budget of one sequence.
    Budget {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        lambda: InvariantSequence,
        #[arg(long)]
        variant: Option<BudgetVariant>,
    },
    /// Evaluate the inequality at an A bound and report the rounded statistic.
    Neg {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        lambda: InvariantSequence,
        #[arg(long)]
        abound: i64,
        #[arg(long)]
        z: i64,
    },
    /// Exact maximum of the penalty over admissible lifts.
    MaxA {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        lambda: InvariantSequence,
        /// Budget: `auto` or an integer.
        #[arg(long)]
        z: Option<String>,
        /// Write the optimal lift as an ideal file.
        #[arg(long)]
        emit_witness: Option<PathBuf>,
    },
    /// Verify an ideal file as a surviving lift.
    CheckIdeal { path: PathBuf },
    /// Classify every sequence in a degree range.
    Survey {
        #[arg(long, default_value_t = 43)]
        d_min: u32,
        #[arg(long, default_value_t = 66)]
        d_max: u32,
        #[arg(long, value_delimiter = ',', default_values_t = [4usize, 5])]
        s: Vec<usize>,
        /// Any survivor above this degree fails the run.
        #[arg(long, default_value_t = 46)]
        expect_max_degree: u32,
    },
    /// Exact tables of the γ-gate cubic and the plane-curve comparison.
    Appendix {
        #[arg(long)]
        s: usize,
        /// Degree range `lo:hi`.
        #[arg(long, value_parser = parse_range, default_value = "20:80")]
        scan: (u32, u32),
    },
}

fn parse_format(s: &str) -> Result<ReportFormat, String> {
    s.parse().map_err(|e: ginbound::Error| e.to_string())
}

fn parse_range(s: &str) -> Result<(u32, u32), String> {
    let bad = |_| format!("bad range {s:?}");
    let (lo, hi) = match s.split_once(':') {
        Some((lo, hi)) => (lo.trim().parse().map_err(bad)?, hi.trim().parse().map_err(bad)?),
        None => {
            let d = s.trim().parse().map_err(bad)?;
            (d, d)
        }
    };
    if lo > hi {
        return Err(format!("empty range {s:?}"));
    }
    Ok((lo, hi))
}

/// Outcome of a command that ran to completion.
enum Outcome {
    Ok,
    /// A verification failed; exit code 2.
    Failed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

struct Session {
    format: Option<ReportFormat>,
    out: Option<PathBuf>,
    priors: Priors,
    rules: RuleSet,
}

impl Session {
    fn load(g: Global) -> Result<Self> {
        let file = match &g.config {
            Some(path) => {
                let text =
                    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                ConfigFile::parse(&text).with_context(|| format!("parsing {}", path.display()))?
            }
            None => ConfigFile::default(),
        };
        let mut rules = file.rules;
        rules.apply_modifiers(&g.rules)?;
        if let Some(v) = g.budget_variant {
            rules.budget_variant = v;
        }
        Ok(Session { format: g.format, out: g.out, priors: file.priors, rules })
    }

    fn format(&self) -> ReportFormat {
        self.format.unwrap_or(ReportFormat::Json)
    }

    fn out(&self) -> Option<&Path> {
        self.out.as_deref()
    }

    fn print(&self, value: &Value, stem: &str) -> Result<()> {
        let format = self.format();
        emit(&render(value, format)?, self.out(), &format!("{stem}.{}", format.extension()))
    }
}

fn run(cli: Cli) -> Result<Outcome> {
    let ctx = Session::load(cli.global)?;
    match cli.command {
        Command::Enumerate { d, s } => enumerate(&ctx, d, &s),
        Command::Budget { d, s, lambda, variant } => {
            check_shape(&lambda, d, Some(s))?;
            let report = max_sporadic(&lambda, variant.unwrap_or(ctx.rules.budget_variant))?;
            ctx.print(&serde_json::to_value(report)?, "budget")?;
            Ok(Outcome::Ok)
        }
        Command::Neg { d, lambda, abound, z } => {
            check_shape(&lambda, d, None)?;
            let eq = eval_eq1(&lambda, abound, z);
            let value = object([
                ("d", json!(d)),
                ("lambdas", json!(lambda)),
                ("A", json!(abound)),
                ("z", json!(z)),
                ("P", json!(eq.p)),
                ("value", json!(eq.value)),
                ("neg", json!(neg_statistic(&lambda, abound, z))),
                ("a_min", json!(elimination_threshold(&lambda, z).a_min)),
            ]);
            ctx.print(&value, "neg")?;
            Ok(Outcome::Ok)
        }
        Command::MaxA { d, lambda, z, emit_witness } => {
            check_shape(&lambda, d, None)?;
            let mut rules = ctx.rules.clone();
            if let Some(z) = z {
                rules.apply_modifiers(&format!("z={z}"))?;
            }
            max_a(&ctx, &lambda, &rules, emit_witness.as_deref())
        }
        Command::CheckIdeal { path } => check_ideal(&ctx, &path),
        Command::Survey { d_min, d_max, s, expect_max_degree } => {
            if d_min > d_max {
                bail!("empty degree range {d_min}..{d_max}");
            }
            survey(&ctx, d_min, d_max, &s, expect_max_degree)
        }
        Command::Appendix { s, scan } => appendix(&ctx, s, scan),
    }
}

fn check_shape(seq: &InvariantSequence, d: u32, s: Option<usize>) -> Result<()> {
    if seq.d() != d {
        bail!("--lambda {seq} has degree {}, not {d}", seq.d());
    }
    if let Some(s) = s.filter(|&s| s != seq.s()) {
        bail!("--lambda {seq} has {} entries, not {s}", seq.s());
    }
    Ok(())
}

fn enumerate(ctx: &Session, (lo, hi): (u32, u32), s_values: &[usize]) -> Result<Outcome> {
    let mut rows = Vec::new();
    for d in (lo..=hi).rev() {
        for &s in s_values {
            for q in enumerate_sequences(d, s) {
                let z = max_sporadic(&q, ctx.rules.budget_variant).ok().map(|b| b.z);
                rows.push(object([
                    ("d", json!(d)),
                    ("s", json!(s)),
                    ("lambdas", json!(q)),
                    ("sum2", json!(q.sum2())),
                    ("sum3", json!(q.sum3())),
                    ("acm", json!(q.acm_class().label())),
                    ("z", json!(z)),
                    ("P", json!(p_value(&q))),
                ]));
            }
        }
    }
    ctx.print(&Value::Array(rows), "enumerate")?;
    Ok(Outcome::Ok)
}

fn max_a(ctx: &Session, seq: &InvariantSequence, rules: &RuleSet, witness: Option<&Path>) -> Result<Outcome> {
    let r = maximize_penalty(seq, rules)?;
    let threshold = elimination_threshold(seq, r.z);
    let heuristics: Vec<Value> = [HeuristicBranch::SixHigh, HeuristicBranch::Staircase]
        .into_iter()
        .filter_map(|b| heuristic_schedule(seq, r.z, b).ok())
        .map(|h| json!({ "branch": h.branch, "A": h.a, "gamma": h.gamma, "approximate": h.approximate }))
        .collect();
    let heights: Vec<Value> = r.witness.support().map(|(c, h)| json!([c.a, c.b, h])).collect();
    let value = object([
        ("d", json!(seq.d())),
        ("lambdas", json!(seq)),
        ("rules", json!(rules.id())),
        ("z", json!(r.z)),
        ("best_objective", json!(r.best_objective)),
        ("best_A", json!(r.best_a)),
        ("best_gamma", json!(r.best_gamma)),
        ("P", json!(r.p)),
        ("a_min", json!(threshold.a_min)),
        ("verdict", json!(if r.eliminated { "Eliminated" } else { "Survives" })),
        ("witness_heights", json!(heights)),
        ("nodes_explored", json!(r.nodes_explored)),
        ("heuristics", json!(heuristics)),
    ]);
    if let Some(path) = witness {
        write_file(path, &(r.witness.to_ideal().to_json() + "\n"))?;
    }
    ctx.print(&value, "max-a")?;
    Ok(Outcome::Ok)
}

fn check_ideal(ctx: &Session, path: &Path) -> Result<Outcome> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let report = verify_witness(&text, &ctx.rules)?;
    if !report.dropped.is_empty() {
        eprintln!("warning: {} redundant generators dropped", report.dropped.len());
    }
    let stem = "check-ideal";
    match ctx.format {
        None => {
            let summary = format!(
                "{{{}}}: gamma = {}, A = {}, value = {}: {}\n",
                report.lambdas,
                report.gamma,
                report.a,
                report.value,
                if report.passed() { "pass" } else { "FAIL" }
            );
            emit(&format!("{report}{summary}"), ctx.out(), &format!("{stem}.txt"))?;
        }
        Some(ReportFormat::Json) => ctx.print(&serde_json::to_value(&report)?, stem)?,
        Some(_) => ctx.print(&serde_json::to_value(&report.checks)?, stem)?,
    }
    Ok(if report.passed() { Outcome::Ok } else { Outcome::Failed })
}

fn survey(ctx: &Session, d_min: u32, d_max: u32, s: &[usize], expect: u32) -> Result<Outcome> {
    let report = run_survey(d_min..=d_max, s, &ctx.rules, &ctx.priors);
    match ctx.out() {
        Some(dir) => write_survey(dir, &report)?,
        None => print!("{}", emit_report(&report, ctx.format())?),
    }
    let survivors = report.survivors().count();
    eprintln!(
        "{} records, {} survive, largest surviving degree {}",
        report.records.len(),
        survivors,
        report.max_surviving_degree
    );
    let mut outcome = Outcome::Ok;
    let failures = audit(&report);
    for f in &failures {
        eprintln!("audit: {f}");
        outcome = Outcome::Failed;
    }
    for r in report.survivors().filter(|r| r.d > expect) {
        outcome = Outcome::Failed;
        let w = r.witness.as_ref().context("survivor without witness")?;
        let (path, json) = witness_file(w);
        eprintln!(
            "survivor above d = {expect}: d = {}, {{{}}}, objective {} >= P = {}, witness {path}",
            r.d,
            r.lambdas,
            r.best_objective.unwrap_or_default(),
            r.p
        );
        eprint!("{json}");
    }
    Ok(outcome)
}

fn write_survey(dir: &Path, report: &SurveyReport) -> Result<()> {
    for format in [ReportFormat::Csv, ReportFormat::Json, ReportFormat::Markdown] {
        write_file(&dir.join(format!("report.{}", format.extension())), &emit_report(report, format)?)?;
    }
    write_file(&dir.join("config.json"), &(serde_json::to_string_pretty(&report.config)? + "\n"))?;
    for w in report.survivors().filter_map(|r| r.witness.as_ref()) {
        let (path, json) = witness_file(w);
        write_file(&dir.join(path), &json)?;
    }
    Ok(())
}

/// `p/q`, with `q = 1` spelled out.
fn rat(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn appendix(ctx: &Session, s: usize, (lo, hi): (u32, u32)) -> Result<Outcome> {
    if !(4..=7).contains(&s) {
        bail!("appendix tables exist for s in 4..=7, not {s}");
    }
    let mut rows = Vec::new();
    for d in lo..=hi {
        let dd = Rational::from_int(d as i64);
        let gate = gamma_lower_gate::<Rational>(s, d).ok();
        let lemma = plane_curve_lemma::<Rational>(s, d)?;
        rows.push(object([
            ("d", json!(d)),
            ("gate_gamma", json!(gate.as_ref().map(|g| rat(&g.gate_gamma)))),
            ("lambda0_cap", json!(lambda0_cap(s, &dd).ok().map(|x| rat(&x)))),
            ("naive_A", json!(naive_a_bound(s, &dd).ok().map(|x| rat(&x)))),
            ("cubic_value", json!(gate.as_ref().map(|g| rat(&g.cubic_value)))),
            ("cubic_nonpositive", json!(gate.as_ref().map(|g| g.cubic_value <= Rational::from_int(0)))),
            ("d_cap_if_gate_fails", json!(gate.as_ref().map(|g| g.d_cap_if_gate_fails))),
            ("lemma_lhs", json!(rat(&lemma.lhs))),
            ("lemma_rhs", json!(rat(&lemma.rhs))),
            ("contradiction", json!(lemma.contradiction)),
        ]));
    }
    ctx.print(&Value::Array(rows), "appendix")?;
    Ok(Outcome::Ok)
}
