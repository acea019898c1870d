//! Brute-force reference implementations shared by the test suites.

#![allow(dead_code)]

use std::cmp::Ordering;
use std::collections::BTreeMap;

use ginbound::optimizer::{HeightFact, RuleSet};
use ginbound::{Column, HeightFunction, InvariantSequence};

/// Best admissible lift found by walking every ideal-closed height function
/// with at most `z` zeros. Ties go to the lexicographically least one.
pub fn oracle_max(seq: &InvariantSequence, z: u32, rules: &RuleSet) -> Option<(i64, HeightFunction)> {
    let mut walk = Walk { seq, z, rules, rows: vec![Vec::new(); seq.s()], best: None, seen: 0 };
    walk.search();
    walk.best
}

/// Number of ideal-closed height functions with at most `z` zeros.
pub fn count_ideal_closed(seq: &InvariantSequence, z: u32) -> u64 {
    let rules = RuleSet::default();
    let mut walk = Walk { seq, z, rules: &rules, rows: vec![Vec::new(); seq.s()], best: None, seen: 0 };
    walk.count_only();
    walk.seen
}

struct Walk<'a> {
    seq: &'a InvariantSequence,
    z: u32,
    rules: &'a RuleSet,
    rows: Vec<Vec<u32>>,
    best: Option<(i64, HeightFunction)>,
    seen: u64,
}

impl Walk<'_> {
    fn count_only(&mut self) {
        self.enumerate(0, 0, self.z, &mut |_| {});
    }

    fn search(&mut self) {
        let mut found = Vec::new();
        self.enumerate(0, 0, self.z, &mut |rows| found.push(rows.to_vec()));
        for rows in found {
            let h = HeightFunction::from_rows(self.seq.clone(), rows);
            if !admissible(&h, self.z, self.rules) {
                continue;
            }
            let value = objective(&h);
            let better = match &self.best {
                None => true,
                Some((v, w)) => value > *v || (value == *v && h.cmp_lex(w) == Ordering::Less),
            };
            if better {
                self.best = Some((value, h));
            }
        }
    }

    /// Visits every assignment where heights weakly decrease along a row
    /// and down a column, the closure conditions of any monomial ideal.
    fn enumerate(&mut self, a: usize, j: usize, left: u32, out: &mut dyn FnMut(&[Vec<u32>])) {
        if a == self.seq.s() {
            self.seen += 1;
            out(&self.rows);
            return;
        }
        let mut cap = left;
        if j > 0 {
            cap = cap.min(self.rows[a][j - 1]);
        }
        if a > 0 {
            let b = self.seq.lambda(a) as usize + j;
            let above = self.seq.lambda(a - 1) as usize;
            if b >= above {
                cap = cap.min(self.rows[a - 1].get(b - above).copied().unwrap_or(0));
            }
        }
        for h in 0..=cap {
            if h == 0 {
                self.enumerate(a + 1, 0, left, out);
            } else {
                self.rows[a].push(h);
                self.enumerate(a, j + 1, left - h, out);
                self.rows[a].pop();
            }
        }
    }
}

/// `12A - 22γ`, summed zero by zero.
pub fn objective(h: &HeightFunction) -> i64 {
    let mut total = 0;
    for (col, height) in h.support() {
        for c in 0..height {
            total += 12 * (col.a + col.b + c) as i64 - 22;
        }
    }
    total
}

/// Admissibility decided from the ideal itself rather than the search
/// encoding.
pub fn admissible(h: &HeightFunction, z: u32, rules: &RuleSet) -> bool {
    let seq = h.seq();
    let ideal = h.to_ideal();
    let gamma: u32 = h.support().map(|(_, v)| v).sum();
    if gamma > z {
        return false;
    }
    match ideal.heights_of() {
        Ok(back) if back == *h => {}
        _ => return false,
    }
    if rules.borel && !ideal.is_borel_fixed() {
        return false;
    }
    if rules.degree_criteria {
        let d = seq.d();
        let mut count: BTreeMap<u32, usize> = BTreeMap::new();
        for g in ideal.generators() {
            *count.entry(g.degree()).or_default() += 1;
        }
        for &r in count.keys() {
            let triggers = if rules.half_degree_strict { 2 * r > d } else { 2 * r >= d };
            if !triggers || count.contains_key(&(r - 1)) {
                continue;
            }
            let above: usize = count.range(r..).map(|(_, n)| n).sum();
            if above < 6 {
                return false;
            }
        }
    }
    if rules.ci_forcing {
        let s = seq.s() as u32;
        let last = seq.lambda(seq.s() - 1);
        if h.get(Column::new(s - 1, last)) == 0
            && h.support().any(|(col, _)| col.b >= last + 2 * (s - 1 - col.a))
        {
            return false;
        }
    }
    for e in rules.special_exclusions.iter().filter(|e| e.applies_to(seq)) {
        let value = if e.column.a < seq.s() as u32 { h.get(e.column) } else { 0 };
        let ok = match e.fact {
            HeightFact::Forbid { value: v } => value != v,
            HeightFact::Force { value: v } => value == v,
        };
        if !ok {
            return false;
        }
    }
    true
}

/// Rule variants cycled through the small-instance grid.
pub fn rule_variant(k: usize, seq: &InvariantSequence, z: u32) -> RuleSet {
    let mods = ["default", "no-borel", "no-criteria", "no-ci", "non-strict", "no-borel,no-ci", "facts"];
    let m = mods[k % mods.len()];
    let mut rules = if m == "facts" {
        RuleSet {
            special_exclusions: vec![ginbound::optimizer::SpecialExclusion {
                d: seq.d(),
                lambdas: seq.clone(),
                column: Column::new(0, seq.lambda(0) + 1),
                fact: HeightFact::Forbid { value: 0 },
            }],
            ..RuleSet::default()
        }
    } else {
        RuleSet::from_modifiers(m).expect("known modifiers")
    };
    rules.budget_z = ginbound::optimizer::BudgetZ::Fixed(z as i64);
    rules
}

/// Every connected staircase with `d <= 20` and `s <= 4`, paired with
/// budgets `0..=8` and a rotating rule variant.
pub fn oracle_grid() -> Vec<(InvariantSequence, u32, RuleSet)> {
    let mut out = Vec::new();
    let mut k = 0;
    for d in 1..=20 {
        for s in 1..=4 {
            for seq in ginbound::staircase::enumerate_sequences(d, s) {
                for z in 0..=8 {
                    out.push((seq.clone(), z, rule_variant(k, &seq, z)));
                    k += 1;
                }
            }
        }
    }
    out
}

/// Compares the exact search with the oracle on one instance.
pub fn check_against_oracle(seq: &InvariantSequence, z: u32, rules: &RuleSet) -> Result<(), String> {
    let expected = oracle_max(seq, z, rules);
    let got = ginbound::optimizer::maximize_penalty(seq, rules);
    let tag = format!("{seq} z={z} rules={}", rules.id());
    match (expected, got) {
        (None, Err(ginbound::Error::Infeasible(_))) => Ok(()),
        (None, Err(e)) => Err(format!("{tag}: unexpected error {e}")),
        (None, Ok(r)) => Err(format!("{tag}: search found {} but nothing is admissible", r.best_objective)),
        (Some((v, _)), Err(e)) => Err(format!("{tag}: oracle found {v}, search failed with {e}")),
        (Some((v, w)), Ok(r)) => {
            if r.best_objective != v {
                return Err(format!("{tag}: search {} vs oracle {v}", r.best_objective));
            }
            if r.witness != w {
                return Err(format!("{tag}: witness {:?} vs oracle {:?}", r.witness.rows(), w.rows()));
            }
            Ok(())
        }
    }
}

/// Clamps raw heights into a lift that satisfies the Borel moves: rows
/// strictly decrease and each row sits under the row above shifted by
/// the gap.
pub fn borel_lift(seq: &InvariantSequence, raw: &[Vec<u32>]) -> HeightFunction {
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for a in 0..seq.s() {
        let mut row = Vec::new();
        for (j, &x) in raw[a].iter().enumerate() {
            let mut h = x;
            if j > 0 {
                h = h.min(row[j - 1] - 1);
            }
            if a > 0 {
                let g = (seq.lambda(a - 1) - seq.lambda(a)) as usize;
                if let Some(k) = (j + 1).checked_sub(g) {
                    h = h.min(rows[a - 1].get(k).copied().unwrap_or(0));
                }
            }
            if h == 0 {
                break;
            }
            row.push(h);
        }
        rows.push(row);
    }
    HeightFunction::from_rows(seq.clone(), rows)
}
