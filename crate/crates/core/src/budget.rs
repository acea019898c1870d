//! Sporadic-zero budgets and the survey priors.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::staircase::{AcmClass, InvariantSequence};
use crate::{Int, Rational};

/// Which closed form to use for `s = 4`. Ignored for `s = 5`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BudgetVariant {
    /// `floor(sum2 - (d^2 - 9d)/8)`, consistent with the tabulated budgets.
    #[default]
    S4Table,
    /// `floor(1 + sum2 - d^2/8 + 9d/8)`, the closed form with the leading `1 +`.
    S4Paper,
}

impl FromStr for BudgetVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "s4_table" | "table" => Ok(BudgetVariant::S4Table),
            "s4_paper" | "paper" => Ok(BudgetVariant::S4Paper),
            other => Err(Error::Parse(format!("unknown budget variant {other:?}"))),
        }
    }
}

impl fmt::Display for BudgetVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BudgetVariant::S4Table => "s4_table",
            BudgetVariant::S4Paper => "s4_paper",
        })
    }
}

/// The formula actually evaluated for a sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Formula {
    S4Paper,
    S4Table,
    S5,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetReport {
    pub seq: InvariantSequence,
    pub z: Int,
    pub variant: Formula,
    /// Exact value before flooring, as `p/q`.
    pub bound: String,
}

/// The unfloored budget in any scalar type.
pub fn sporadic_bound<S: Scalar>(seq: &InvariantSequence, variant: BudgetVariant) -> Result<(S, Formula)> {
    let d = S::from_int(seq.d() as i64);
    let sum2 = S::from_int(seq.sum2());
    let d2 = d.clone() * d.clone();
    match (seq.s(), variant) {
        (5, _) => {
            let tail = (d2 - S::from_int(5) * d + S::from_int(10)) / S::from_int(10);
            Ok((S::one() + sum2 - tail, Formula::S5))
        }
        (4, BudgetVariant::S4Table) => {
            let tail = (d2 - S::from_int(9) * d) / S::from_int(8);
            Ok((sum2 - tail, Formula::S4Table))
        }
        (4, BudgetVariant::S4Paper) => {
            Ok((S::one() + sum2 - d2 / S::from_int(8) + S::ratio(9, 8) * d, Formula::S4Paper))
        }
        (s, _) => Err(Error::UnsupportedS(s)),
    }
}

/// Maximal number of sporadic zeros `z` for a sequence with `s` in `{4, 5}`.
pub fn max_sporadic(seq: &InvariantSequence, variant: BudgetVariant) -> Result<BudgetReport> {
    let (bound, formula) = sporadic_bound::<Rational>(seq, variant)?;
    Ok(BudgetReport { seq: seq.clone(), z: bound.floor_int(), variant: formula, bound: bound.to_string() })
}

/// Imported constraints on `(s, d)` that gate the survey.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Priors {
    pub s_min: usize,
    pub s_max: usize,
    pub d_max: u32,
    /// Degree cap for `s <= 3`.
    pub d_cap_s3: u32,
    /// Degree cap for `s` in `{6, 7}`.
    pub d_cap_s67: u32,
    /// Require `d > (s-1)^2 + 1`.
    pub gate: bool,
}

impl Default for Priors {
    fn default() -> Self {
        Priors { s_min: 4, s_max: 5, d_max: 66, d_cap_s3: 8, d_cap_s67: 44, gate: true }
    }
}

/// Why a sequence is excluded before any optimization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Exclusion {
    BelowGate {
        d: u32,
        gate: u32,
    },
    Acm {
        class: AcmClass,
        d: u32,
        cap: u32,
    },
    SOutOfRange {
        s: usize,
    },
    AboveDMax {
        d: u32,
        d_max: u32,
    },
    PriorCap {
        s: usize,
        d: u32,
        cap: u32,
    },
    NegativeBudget {
        z: Int,
    },
    /// No sporadic-zero budget formula exists for this `s`.
    NoBudgetFormula {
        s: usize,
    },
}

impl Exclusion {
    pub fn code(&self) -> &'static str {
        match self {
            Exclusion::BelowGate { .. } => "below_gate",
            Exclusion::Acm { .. } => "acm",
            Exclusion::SOutOfRange { .. } => "s_out_of_range",
            Exclusion::AboveDMax { .. } => "above_d_max",
            Exclusion::PriorCap { .. } => "prior_cap",
            Exclusion::NegativeBudget { .. } => "negative_budget",
            Exclusion::NoBudgetFormula { .. } => "no_budget_formula",
        }
    }
}

impl fmt::Display for Exclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exclusion::BelowGate { d, gate } => write!(f, "d = {d} <= (s-1)^2+1 = {gate}"),
            Exclusion::Acm { class, d, cap } => {
                write!(f, "{} with d = {d} > {cap}", class.label())
            }
            Exclusion::SOutOfRange { s } => write!(f, "s = {s} outside the survey range"),
            Exclusion::AboveDMax { d, d_max } => write!(f, "d = {d} > d_max = {d_max}"),
            Exclusion::PriorCap { s, d, cap } => write!(f, "s = {s} forces d <= {cap}, got {d}"),
            Exclusion::NegativeBudget { z } => write!(f, "negative sporadic budget z = {z}"),
            Exclusion::NoBudgetFormula { s } => write!(f, "no sporadic budget formula for s = {s}"),
        }
    }
}

/// Degree above which an ACM configuration of the given `s` cannot occur.
pub fn acm_cap(s: usize) -> Option<u32> {
    match s {
        4 => Some(10),
        5 => Some(17),
        _ => None,
    }
}

/// `Ok(())` if the priors allow the sequence, else the first exclusion found.
pub fn admissible(seq: &InvariantSequence, priors: &Priors) -> std::result::Result<(), Exclusion> {
    let (s, d) = (seq.s(), seq.d());
    let gate = ((s as u32).saturating_sub(1)).pow(2) + 1;
    if priors.gate && d <= gate {
        return Err(Exclusion::BelowGate { d, gate });
    }
    let class = seq.acm_class();
    if class.is_acm() {
        if let Some(cap) = acm_cap(s) {
            if d > cap {
                return Err(Exclusion::Acm { class, d, cap });
            }
        }
    }
    if s < priors.s_min || s > priors.s_max {
        return Err(Exclusion::SOutOfRange { s });
    }
    if d > priors.d_max {
        return Err(Exclusion::AboveDMax { d, d_max: priors.d_max });
    }
    let cap = match s {
        0..=3 => Some(priors.d_cap_s3),
        6 | 7 => Some(priors.d_cap_s67),
        _ => None,
    };
    if let Some(cap) = cap {
        if d > cap {
            return Err(Exclusion::PriorCap { s, d, cap });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::staircase::enumerate_sequences;

    fn seq(l: &[u32]) -> InvariantSequence {
        InvariantSequence::new(l.to_vec()).unwrap()
    }

    fn z(l: &[u32], v: BudgetVariant) -> Int {
        max_sporadic(&seq(l), v).unwrap().z
    }

    #[test]
    fn tabulated_budgets() {
        let t = BudgetVariant::S4Table;
        assert_eq!(z(&[14, 12, 11, 9], t), 50);
        assert_eq!(z(&[14, 12, 10, 9], t), 49);
        assert_eq!(z(&[13, 12, 11, 9], t), 48);
        assert_eq!(z(&[13, 11, 10, 8, 6], t), 45);
        assert_eq!(z(&[13, 11, 9, 8, 6], t), 44);
        assert_eq!(z(&[12, 11, 10, 8, 6], t), 43);
        assert_eq!(z(&[13, 11, 9, 7, 6], t), 44);
    }

    #[test]
    fn variants_differ_by_one_for_s4() {
        assert_eq!(z(&[14, 12, 11, 9], BudgetVariant::S4Paper), 51);
        for s in enumerate_sequences(46, 4) {
            let a = max_sporadic(&s, BudgetVariant::S4Table).unwrap().z;
            let b = max_sporadic(&s, BudgetVariant::S4Paper).unwrap().z;
            assert_eq!(b, a + 1);
        }
    }

    #[test]
    fn s5_ignores_the_variant() {
        let r = max_sporadic(&seq(&[13, 11, 9, 7, 6]), BudgetVariant::S4Paper).unwrap();
        assert_eq!((r.z, r.variant), (44, Formula::S5));
        assert_eq!(r.bound, "222/5");
    }

    #[test]
    fn unsupported_s() {
        assert_eq!(max_sporadic(&seq(&[5, 4, 3]), BudgetVariant::S4Table), Err(Error::UnsupportedS(3)));
    }

    #[test]
    fn float_and_exact_agree_away_from_integers() {
        for d in 43..=66 {
            for s in enumerate_sequences(d, 5) {
                let (q, _) = sporadic_bound::<Rational>(&s, BudgetVariant::S4Table).unwrap();
                let (f, _) = sporadic_bound::<f64>(&s, BudgetVariant::S4Table).unwrap();
                assert!((f - *q.numer() as f64 / *q.denom() as f64).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn raising_an_invariant_never_lowers_sum2() {
        for d in 20..=60 {
            for s in [4, 5] {
                for q in enumerate_sequences(d, s) {
                    for i in 0..s {
                        let mut l = q.lambdas().to_vec();
                        l[i] += 1;
                        if let Ok(r) = InvariantSequence::connected(l) {
                            assert!(r.sum2() >= q.sum2());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn prior_examples() {
        let p = Priors::default();
        assert_eq!(admissible(&seq(&[13, 11, 9, 7, 6]), &p), Ok(()));
        assert!(matches!(
            admissible(&seq(&[14, 12, 10, 8, 6]), &p),
            Err(Exclusion::Acm { cap: 17, d: 50, .. })
        ));
        assert!(matches!(admissible(&seq(&[13, 12, 10, 8, 6]), &p), Err(Exclusion::Acm { .. })));
        for s in enumerate_sequences(17, 5) {
            assert_eq!(admissible(&s, &p), Err(Exclusion::BelowGate { d: 17, gate: 17 }));
        }
        assert_eq!(admissible(&seq(&[10, 9, 8, 7, 6, 5]), &p), Err(Exclusion::SOutOfRange { s: 6 }));
        let wide = Priors { s_max: 7, ..p.clone() };
        assert_eq!(
            admissible(&seq(&[10, 9, 8, 7, 6, 5]), &wide),
            Err(Exclusion::PriorCap { s: 6, d: 45, cap: 44 })
        );
        assert!(matches!(admissible(&seq(&[19, 18, 17, 16, 15]), &p), Err(Exclusion::AboveDMax { .. })));
    }

    #[test]
    fn variant_parsing() {
        assert_eq!("s4_paper".parse::<BudgetVariant>().unwrap(), BudgetVariant::S4Paper);
        assert_eq!(BudgetVariant::default().to_string(), "s4_table");
        assert!("s6".parse::<BudgetVariant>().is_err());
    }
}
