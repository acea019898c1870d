//! Admissibility rules for lifts and the exact maximization of the
//! sporadic-zero penalty `12A - 22γ`.
//!
//! Rules, in evaluation order:
//!
//! * R1 Borel moves on the height function,
//! * R2 the sporadic-zero budget `γ <= z`,
//! * R3 generator-degree criteria above `d/2`,
//! * R4 complete-intersection forcing when the last row carries no zeros,
//! * R5 per-configuration exclusions.

mod bound;
mod heuristic;
mod search;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::budget::{max_sporadic, BudgetVariant};
use crate::error::{Error, Result};
use crate::lift::HeightFunction;
use crate::staircase::{Column, InvariantSequence};
use crate::Int;

pub use bound::high_generator_level;
pub use heuristic::{heuristic_schedule, Chain, HeuristicBranch, HeuristicSchedule};
pub use search::maximize_penalty;

/// `Auto` resolves through [`max_sporadic`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum BudgetZ {
    #[default]
    Auto,
    Fixed(Int),
}

impl Serialize for BudgetZ {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            BudgetZ::Auto => ser.serialize_str("auto"),
            BudgetZ::Fixed(z) => ser.serialize_i64(*z),
        }
    }
}

impl<'de> Deserialize<'de> for BudgetZ {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Int(Int),
            Str(String),
        }
        match Repr::deserialize(de)? {
            Repr::Int(z) => Ok(BudgetZ::Fixed(z)),
            Repr::Str(s) if s == "auto" => Ok(BudgetZ::Auto),
            Repr::Str(s) => s
                .parse()
                .map(BudgetZ::Fixed)
                .map_err(|_| serde::de::Error::custom(format!("bad budget {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HeightFact {
    /// `H(column) != value`.
    Forbid { value: u32 },
    /// `H(column) == value`.
    Force { value: u32 },
}

impl HeightFact {
    pub fn allows(self, h: u32) -> bool {
        match self {
            HeightFact::Forbid { value } => h != value,
            HeightFact::Force { value } => h == value,
        }
    }
}

/// A height fact that applies to one configuration `(d, λ)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpecialExclusion {
    pub d: u32,
    pub lambdas: InvariantSequence,
    pub column: Column,
    pub fact: HeightFact,
}

impl SpecialExclusion {
    pub fn applies_to(&self, seq: &InvariantSequence) -> bool {
        self.d == seq.d() && &self.lambdas == seq
    }

    /// On `{13,11,9,7,6}` the column `(4, 6)` must carry a zero: otherwise
    /// the curve would be linked to a plane quartic.
    pub fn plane_quartic() -> Self {
        SpecialExclusion {
            d: 46,
            lambdas: InvariantSequence::new(vec![13, 11, 9, 7, 6]).expect("valid"),
            column: Column::new(4, 6),
            fact: HeightFact::Forbid { value: 0 },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct RuleSet {
    pub borel: bool,
    pub budget_z: BudgetZ,
    pub budget_variant: BudgetVariant,
    pub degree_criteria: bool,
    pub ci_forcing: bool,
    pub special_exclusions: Vec<SpecialExclusion>,
    /// Generator degree `r` triggers the criteria iff `2r > d`; with `false`,
    /// iff `2r >= d`.
    pub half_degree_strict: bool,
}

impl Default for RuleSet {
    fn default() -> Self {
        RuleSet {
            borel: true,
            budget_z: BudgetZ::Auto,
            budget_variant: BudgetVariant::default(),
            degree_criteria: true,
            ci_forcing: true,
            special_exclusions: vec![SpecialExclusion::plane_quartic()],
            half_degree_strict: true,
        }
    }
}

impl RuleSet {
    /// Applies comma-separated modifiers such as `no-ci,z=40` on top of the
    /// defaults. Recognized: `default`, `no-borel`, `no-criteria`, `no-ci`,
    /// `no-special`, `non-strict`, `z=N`, `z=auto`.
    pub fn from_modifiers(spec: &str) -> Result<Self> {
        let mut rules = RuleSet::default();
        rules.apply_modifiers(spec)?;
        Ok(rules)
    }

    pub fn apply_modifiers(&mut self, spec: &str) -> Result<()> {
        for m in spec.split(',').map(str::trim).filter(|m| !m.is_empty()) {
            match m {
                "default" => {}
                "no-borel" => self.borel = false,
                "no-criteria" => self.degree_criteria = false,
                "no-ci" => self.ci_forcing = false,
                "no-special" => self.special_exclusions.clear(),
                "non-strict" => self.half_degree_strict = false,
                _ => match m.strip_prefix("z=") {
                    Some("auto") => self.budget_z = BudgetZ::Auto,
                    Some(v) => {
                        let z = v.parse().map_err(|_| Error::Parse(format!("bad budget {v:?}")))?;
                        self.budget_z = BudgetZ::Fixed(z);
                    }
                    None => return Err(Error::Parse(format!("unknown rule modifier {m:?}"))),
                },
            }
        }
        Ok(())
    }

    /// Short stable identifier, `default` for the default rules.
    pub fn id(&self) -> String {
        let base = RuleSet::default();
        let mut parts = Vec::new();
        if !self.borel {
            parts.push("no-borel".to_string());
        }
        if !self.degree_criteria {
            parts.push("no-criteria".to_string());
        }
        if !self.ci_forcing {
            parts.push("no-ci".to_string());
        }
        if self.special_exclusions.is_empty() {
            parts.push("no-special".to_string());
        } else if self.special_exclusions != base.special_exclusions {
            parts.push(format!("special={}", self.special_exclusions.len()));
        }
        if !self.half_degree_strict {
            parts.push("non-strict".to_string());
        }
        if let BudgetZ::Fixed(z) = self.budget_z {
            parts.push(format!("z={z}"));
        }
        if self.budget_variant != base.budget_variant {
            parts.push(self.budget_variant.to_string());
        }
        if parts.is_empty() {
            "default".to_string()
        } else {
            parts.join(",")
        }
    }

    pub fn resolve_z(&self, seq: &InvariantSequence) -> Result<Int> {
        match self.budget_z {
            BudgetZ::Fixed(z) => Ok(z),
            BudgetZ::Auto => Ok(max_sporadic(seq, self.budget_variant)?.z),
        }
    }

    /// Largest generator degree that does not trigger the criteria.
    pub fn half_degree(&self, d: u32) -> u32 {
        if self.half_degree_strict {
            d / 2
        } else {
            d.div_ceil(2).saturating_sub(1)
        }
    }

    pub(crate) fn exclusions_for<'a>(
        &'a self,
        seq: &'a InvariantSequence,
    ) -> impl Iterator<Item = &'a SpecialExclusion> + 'a {
        self.special_exclusions.iter().filter(move |e| e.applies_to(seq))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Rule {
    #[serde(rename = "R1")]
    Borel,
    #[serde(rename = "R2")]
    Budget,
    #[serde(rename = "R3")]
    DegreeCriteria,
    #[serde(rename = "R4")]
    CiForcing,
    #[serde(rename = "R5")]
    SpecialExclusion,
}

impl Rule {
    pub fn code(self) -> &'static str {
        match self {
            Rule::Borel => "R1",
            Rule::Budget => "R2",
            Rule::DegreeCriteria => "R3",
            Rule::CiForcing => "R4",
            Rule::SpecialExclusion => "R5",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub rule: Rule,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.rule.code(), self.detail)
    }
}

fn violation(rule: Rule, detail: String) -> Violation {
    Violation { rule, detail }
}

/// Every violated rule, in rule order; within a rule only the first
/// offending column is reported.
pub fn violations(h: &HeightFunction, rules: &RuleSet) -> Result<Vec<Violation>> {
    let seq = h.seq();
    let mut out = Vec::new();
    if rules.borel {
        if let Some(v) = borel_violation(h) {
            out.push(v);
        }
    }
    let z = rules.resolve_z(seq)?;
    let gamma = h.zero_stats().gamma;
    if gamma > z {
        out.push(violation(Rule::Budget, format!("γ = {gamma} exceeds z = {z}")));
    }
    if rules.degree_criteria {
        let degrees: Vec<u32> = h.minimal_generators().iter().map(|g| g.degree).collect();
        if let Some(r) = criteria_violation(&degrees, rules.half_degree(seq.d())) {
            out.push(violation(
                Rule::DegreeCriteria,
                format!("generator in degree {r} has no generator in degree {} and fewer than six in degree >= {r}", r - 1),
            ));
        }
    }
    if rules.ci_forcing {
        if let Some(v) = ci_violation(h) {
            out.push(v);
        }
    }
    for e in rules.exclusions_for(seq) {
        let v = h.get(e.column);
        if !e.fact.allows(v) {
            out.push(violation(
                Rule::SpecialExclusion,
                format!("H({}, {}) = {v} is excluded ({:?})", e.column.a, e.column.b, e.fact),
            ));
            break;
        }
    }
    Ok(out)
}

/// The first violated rule, or `None` if `h` is admissible.
pub fn first_violation(h: &HeightFunction, rules: &RuleSet) -> Result<Option<Violation>> {
    Ok(violations(h, rules)?.into_iter().next())
}

pub fn is_admissible(h: &HeightFunction, rules: &RuleSet) -> Result<bool> {
    Ok(first_violation(h, rules)?.is_none())
}

fn borel_violation(h: &HeightFunction) -> Option<Violation> {
    let seq = h.seq();
    let dec = |v: u32| v.saturating_sub(1);
    for (col, t) in h.support() {
        let (a, b) = (col.a, col.b);
        let check = |src: Column, bound: u32, what: &str| {
            if seq.contains(src) && (src.a as usize) < seq.s() && t > bound {
                Some(violation(
                    Rule::Borel,
                    format!("H({a}, {b}) = {t} > {what} = {bound} from ({}, {})", src.a, src.b),
                ))
            } else {
                None
            }
        };
        if a > 0 {
            let src = Column::new(a - 1, b + 1);
            if let Some(v) = check(src, h.get(src), "H") {
                return Some(v);
            }
            let src = Column::new(a - 1, b);
            if let Some(v) = check(src, dec(h.get(src)), "max(H-1, 0)") {
                return Some(v);
            }
        }
        if b > 0 {
            let src = Column::new(a, b - 1);
            if let Some(v) = check(src, dec(h.get(src)), "max(H-1, 0)") {
                return Some(v);
            }
        }
    }
    None
}

/// First generator degree `r > half` that has neither a generator in degree
/// `r - 1` nor five further generators in degree `>= r`.
pub fn criteria_violation(degrees: &[u32], half: u32) -> Option<u32> {
    let mut count: BTreeMap<u32, usize> = BTreeMap::new();
    for &r in degrees {
        *count.entry(r).or_default() += 1;
    }
    let mut at_least = 0;
    for (&r, &n) in count.iter().rev() {
        at_least += n;
        if r > half && at_least < 6 && !count.contains_key(&(r - 1)) {
            return Some(r);
        }
    }
    None
}

fn ci_violation(h: &HeightFunction) -> Option<Violation> {
    let seq = h.seq();
    let s = seq.s();
    let last = seq.lambda(s - 1);
    if h.get(Column::new(s as u32 - 1, last)) > 0 {
        return None;
    }
    for (col, _) in h.support() {
        let limit = last + 2 * (s as u32 - 1 - col.a);
        if col.b >= limit {
            return Some(violation(
                Rule::CiForcing,
                format!("H({}, {last}) = 0 forces H({}, {}) = 0", s - 1, col.a, col.b),
            ));
        }
    }
    None
}

/// Zero statistics and generator degrees of a hand-built schedule.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduleEvaluation {
    pub gamma: Int,
    #[serde(rename = "A")]
    pub a: Int,
    pub generator_degrees: Vec<u32>,
}

impl ScheduleEvaluation {
    pub fn objective(&self) -> Int {
        12 * self.a - 22 * self.gamma
    }
}

pub fn evaluate_schedule(h: &HeightFunction) -> ScheduleEvaluation {
    let st = h.zero_stats();
    let mut generator_degrees: Vec<u32> = h.minimal_generators().iter().map(|g| g.degree).collect();
    generator_degrees.sort_unstable_by(|x, y| y.cmp(x));
    ScheduleEvaluation { gamma: st.gamma, a: st.degree_sum, generator_degrees }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub seq: InvariantSequence,
    pub z: Int,
    /// Maximum of `12A - 22γ` over admissible lifts.
    pub best_objective: Int,
    #[serde(rename = "best_A")]
    pub best_a: Int,
    pub best_gamma: Int,
    pub witness: HeightFunction,
    #[serde(rename = "P")]
    pub p: Int,
    /// `best_objective < P`.
    pub eliminated: bool,
    pub nodes_explored: u64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lift::MonomialIdeal;

    fn seq(l: &[u32]) -> InvariantSequence {
        InvariantSequence::new(l.to_vec()).unwrap()
    }

    fn hf(l: &[u32], e: &[((u32, u32), u32)]) -> HeightFunction {
        HeightFunction::from_entries(seq(l), e.iter().map(|&((a, b), h)| (Column::new(a, b), h))).unwrap()
    }

    fn witness() -> HeightFunction {
        hf(&[13, 11, 9, 7, 6], &[((4, 6), 1), ((3, 7), 13), ((2, 9), 13), ((1, 11), 13), ((0, 13), 4)])
    }

    #[test]
    fn witness_is_admissible() {
        assert_eq!(violations(&witness(), &RuleSet::default()).unwrap(), vec![]);
    }

    #[test]
    fn plane_quartic_exclusion() {
        let mut h = witness();
        h.set(Column::new(4, 6), 0).unwrap();
        let v = violations(&h, &RuleSet::default()).unwrap();
        assert!(v.iter().any(|v| v.rule == Rule::SpecialExclusion));
        let rules = RuleSet::from_modifiers("no-special").unwrap();
        assert!(!violations(&h, &rules).unwrap().iter().any(|v| v.rule == Rule::SpecialExclusion));
    }

    #[test]
    fn ci_forcing_example() {
        let h = hf(&[13, 11, 10, 8, 6], &[((2, 10), 12), ((0, 13), 12), ((1, 11), 14), ((2, 11), 7)]);
        let v = violations(&h, &RuleSet::default()).unwrap();
        let rules: Vec<Rule> = v.iter().map(|v| v.rule).collect();
        assert!(rules.contains(&Rule::CiForcing), "{v:?}");
        // H(2, 11) = 7 also breaks the row rule against H(1, 12) = 0
        assert_eq!(v[0].rule, Rule::Borel);
    }

    #[test]
    fn lone_high_generator() {
        let h = hf(&[13, 11, 10, 8, 6], &[((0, 13), 13)]);
        assert_eq!(first_violation(&h, &RuleSet::default()).unwrap().unwrap().rule, Rule::DegreeCriteria);
    }

    #[test]
    fn budget_rule() {
        let h = witness();
        let tight = RuleSet { budget_z: BudgetZ::Fixed(43), ..RuleSet::default() };
        assert_eq!(first_violation(&h, &tight).unwrap().unwrap().rule, Rule::Budget);
    }

    #[test]
    fn criteria_degrees() {
        // contiguous run down to the half degree
        assert_eq!(criteria_violation(&[27, 26, 25, 24, 10], 24), None);
        assert_eq!(criteria_violation(&[27, 25, 24], 24), Some(27));
        // six generators in degree >= 30 cover the gap below 30
        assert_eq!(criteria_violation(&[30, 30, 31, 31, 32, 33, 5], 24), None);
        assert_eq!(criteria_violation(&[30, 31, 31, 32, 33, 5], 24), Some(30));
        assert_eq!(criteria_violation(&[25], 24), Some(25));
        assert_eq!(criteria_violation(&[24], 24), None);
    }

    #[test]
    fn schedules_from_the_text() {
        let h = hf(&[13, 11, 10, 8, 6], &[((0, 13), 12), ((1, 11), 12), ((4, 6), 16), ((3, 8), 5)]);
        let e = evaluate_schedule(&h);
        assert_eq!((e.gamma, e.a), (45, 777));
        let ci = hf(&[13, 11, 10, 8, 6], &[((1, 11), 12), ((0, 13), 12)]);
        let e = evaluate_schedule(&ci);
        assert_eq!((e.gamma, e.a), (24, 432));
        assert!(is_admissible(&ci, &RuleSet::default()).unwrap());
        let e = evaluate_schedule(&witness());
        assert_eq!((e.gamma, e.a), (44, 731));
        assert_eq!(e.objective(), 7804);
    }

    #[test]
    fn borel_rule_matches_ideal_borel_check() {
        let s = seq(&[5, 3, 2]);
        let cases: &[&[((u32, u32), u32)]] = &[
            &[((0, 5), 3), ((0, 6), 1)],
            &[((0, 5), 3), ((0, 6), 3)],
            &[((1, 3), 2)],
            &[((1, 3), 2), ((2, 2), 2)],
            &[((0, 5), 3), ((1, 4), 3)],
            &[((0, 5), 3), ((1, 4), 4)],
        ];
        for e in cases {
            let h =
                HeightFunction::from_entries(s.clone(), e.iter().map(|&((a, b), v)| (Column::new(a, b), v)))
                    .unwrap();
            // R1 holds iff the materialized ideal is Borel-fixed and has
            // exactly these heights
            let ideal: MonomialIdeal = h.to_ideal();
            let faithful = ideal.is_borel_fixed() && ideal.heights_of().as_ref() == Ok(&h);
            assert_eq!(borel_violation(&h).is_none(), faithful, "{e:?}");
        }
    }

    #[test]
    fn modifiers_and_ids() {
        assert_eq!(RuleSet::default().id(), "default");
        let r = RuleSet::from_modifiers("no-ci, z=40").unwrap();
        assert!(!r.ci_forcing);
        assert_eq!(r.budget_z, BudgetZ::Fixed(40));
        assert_eq!(r.id(), "no-ci,z=40");
        assert!(RuleSet::from_modifiers("bogus").is_err());
        let text = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<RuleSet>(&text).unwrap(), r);
        let auto: RuleSet = serde_json::from_str("{\"budget_z\":\"auto\"}").unwrap();
        assert_eq!(auto, RuleSet::default());
    }

    #[test]
    fn half_degree() {
        let strict = RuleSet::default();
        assert_eq!((strict.half_degree(48), strict.half_degree(47)), (24, 23));
        let loose = RuleSet { half_degree_strict: false, ..RuleSet::default() };
        assert_eq!((loose.half_degree(48), loose.half_degree(47)), (23, 23));
    }
}
