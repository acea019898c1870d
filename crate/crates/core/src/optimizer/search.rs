//! Exact branch-and-bound over height functions.
//!
//! Rows are filled top to bottom and each row column by column, trying
//! heights in decreasing order. Borel moves make every row strictly
//! decreasing and bound row `a + 1` by row `a` shifted by the gap
//! `λa - λ(a+1)`, so those rules hold by construction. The budget, the
//! column-top caps implied by the degree criteria, the CI-forcing case split
//! and the per-configuration facts prune during the descent; the degree
//! criteria are checked exactly at the leaves.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::inequality::p_value;
use crate::lift::HeightFunction;
use crate::staircase::InvariantSequence;
use crate::Int;

use super::bound::{column_bound, high_generator_level, RemainingBound};
use super::{HeightFact, OptimizationResult, RuleSet};

/// Maximizes `12A - 22γ` over every lift admissible under `rules`.
///
/// The witness is the lexicographically least optimal height function,
/// comparing rows top to bottom and columns left to right.
pub fn maximize_penalty(seq: &InvariantSequence, rules: &RuleSet) -> Result<OptimizationResult> {
    let z = rules.resolve_z(seq)?;
    if z < 0 {
        return Err(Error::Infeasible(format!("negative budget z = {z}")));
    }
    let s = seq.s();
    let mut facts = Vec::new();
    for e in rules.exclusions_for(seq) {
        let (a, b) = (e.column.a as usize, e.column.b);
        if a >= s || b < seq.lambda(a) {
            if !e.fact.allows(0) {
                return Err(Error::Infeasible(format!("column ({}, {b}) always has height 0", e.column.a)));
            }
            continue;
        }
        facts.push((a, (b - seq.lambda(a)) as usize, e.fact));
    }
    let half = rules.half_degree(seq.d());
    let level = rules.degree_criteria.then(|| high_generator_level(seq, z, half) as i64);

    let mut search = Search {
        seq,
        rules,
        s,
        bases: (0..s).map(|a| (a as u32 + seq.lambda(a)) as i64).collect(),
        gaps: (0..s).map(|a| if a == 0 { 0 } else { (seq.lambda(a - 1) - seq.lambda(a)) as usize }).collect(),
        z,
        half,
        level,
        facts,
        row_limit: vec![usize::MAX; s],
        last_row_positive: false,
        rows: vec![Vec::new(); s],
        gamma: 0,
        objective: 0,
        high: [0; 5],
        best: None,
        nodes: 0,
        buffers: Buffers::default(),
        degree_count: Vec::new(),
    };
    let bases0 = search.bases[0];
    search.degree_count = vec![0; (bases0 + 2 * z + s as i64 + 4) as usize];
    // x0^s
    search.degree_count[s] += 1;

    if rules.ci_forcing {
        let last = seq.lambda(s - 1) as i64;
        search.row_limit =
            (0..s).map(|a| (last + 2 * (s - 1 - a) as i64 - seq.lambda(a) as i64).max(0) as usize).collect();
        search.visit(0, 0);
        search.row_limit = vec![usize::MAX; s];
        search.last_row_positive = true;
        search.visit(0, 0);
    } else {
        search.visit(0, 0);
    }

    let nodes = search.nodes;
    let (best_objective, rows) =
        search.best.ok_or_else(|| Error::Infeasible(format!("no lift of {seq} satisfies the rules")))?;
    let witness = HeightFunction::from_rows(seq.clone(), rows);
    let st = witness.zero_stats();
    debug_assert_eq!(st.penalty(), best_objective);
    let p = p_value(seq);
    Ok(OptimizationResult {
        seq: seq.clone(),
        z,
        best_objective,
        best_a: st.degree_sum,
        best_gamma: st.gamma,
        witness,
        p,
        eliminated: best_objective < p,
        nodes_explored: nodes,
    })
}

struct Search<'a> {
    seq: &'a InvariantSequence,
    rules: &'a RuleSet,
    s: usize,
    bases: Vec<i64>,
    gaps: Vec<usize>,
    z: Int,
    half: u32,
    /// Upper bound for `max(half, g6)` when the degree criteria are on.
    level: Option<i64>,
    facts: Vec<(usize, usize, HeightFact)>,
    row_limit: Vec<usize>,
    last_row_positive: bool,
    rows: Vec<Vec<u32>>,
    gamma: Int,
    objective: Int,
    /// `high[y]`: fixed columns whose top zero has degree `>= level + y`.
    high: [i64; 5],
    best: Option<(Int, Vec<Vec<u32>>)>,
    nodes: u64,
    buffers: Buffers,
    /// Minimal generators by degree among the fixed columns.
    degree_count: Vec<u32>,
}

#[derive(Default)]
struct Buffers {
    above: Vec<i64>,
    current: Vec<i64>,
    cols: Vec<(i64, i64)>,
    scratch: Vec<(i64, i64)>,
}

fn chain_penalty(base: i64, h: i64) -> i64 {
    12 * (h * base + h * (h - 1) / 2) - 22 * h
}

impl Search<'_> {
    fn visit(&mut self, a: usize, j: usize) {
        self.nodes += 1;
        if self.rules.degree_criteria && self.criteria_dead(self.future_degree_cap(a, j)) {
            return;
        }
        if a == self.s {
            self.leaf();
            return;
        }
        if let Some(best) = self.best.as_ref().map(|b| b.0) {
            let prunes = |ub: i64, this: &Self| {
                ub < best || (ub == best && this.prefix_cmp(a, j) == Ordering::Greater)
            };
            if prunes(self.objective + self.remaining_bound(a, j), self)
                || prunes(self.objective + self.column_caps_bound(a), self)
            {
                return;
            }
        }
        let max_h = self.max_height(a, j);
        let min_h = u32::from(self.last_row_positive && a == self.s - 1 && j == 0);
        for h in (min_h..=max_h).rev() {
            if self.facts.iter().any(|&(fa, fj, f)| fa == a && fj == j && !f.allows(h)) {
                continue;
            }
            if h == 0 {
                let tail_ok = self.facts.iter().all(|&(fa, fj, f)| fa != a || fj < j || f.allows(0));
                if tail_ok {
                    // the first zero column may carry a corner generator
                    let corner = self.generator_degree(a, j, 0);
                    self.count_generator(corner, 1);
                    self.visit(a + 1, 0);
                    self.count_generator(corner, -1);
                }
                continue;
            }
            let base = self.bases[a] + j as i64;
            let top = base + h as i64 - 1;
            let delta = chain_penalty(base, h as i64);
            let generator = self.generator_degree(a, j, h);
            self.push(a, h, top, delta);
            self.count_generator(generator, 1);
            self.visit(a, j + 1);
            self.count_generator(generator, -1);
            self.pop(a, h, top, delta);
        }
    }

    /// Degree of the minimal generator sitting on top of column `j` of row
    /// `a` at height `h`, if that monomial is one.
    fn generator_degree(&self, a: usize, j: usize, h: u32) -> Option<usize> {
        if !self.rules.degree_criteria {
            return None;
        }
        let row = &self.rows[a];
        let left = j > 0 && row[j - 1] <= h;
        let lambda = self.seq.lambda(a) as usize;
        let up = a > 0 && {
            let above = self.seq.lambda(a - 1) as usize;
            let b = lambda + j;
            b >= above && self.rows[a - 1].get(b - above).copied().unwrap_or(0) <= h
        };
        (!left && !up).then_some(a + lambda + j + h as usize)
    }

    fn count_generator(&mut self, degree: Option<usize>, step: i32) {
        if let Some(r) = degree {
            self.degree_count[r] = (self.degree_count[r] as i32 + step) as u32;
        }
    }

    /// Highest degree any generator still to be placed can have, with rows
    /// above `a` and the first `j` columns of row `a` fixed.
    fn future_degree_cap(&self, a: usize, j: usize) -> i64 {
        if a == self.s {
            return -1;
        }
        if !self.rules.borel {
            return i64::MAX;
        }
        let r = self.z - self.gamma;
        let base = self.bases[a];
        let row = &self.rows[a];
        // along a row, base degree plus height never increases
        let current = if j > 0 {
            base + j as i64 + (row[j - 1] as i64 - 1).min(r).max(0)
        } else if a > 0 && self.gaps[a] == 1 {
            base + r.min(self.rows[a - 1].first().copied().unwrap_or(0) as i64)
        } else {
            base + r
        };
        // a column below shares its base degree with a column of row a and
        // is no taller; heads left of row a are limited by the budget
        let mut cap = current;
        if let Some(&h) = row.first() {
            cap = cap.max(base + h as i64);
        }
        if self.bases[self.s - 1] < base {
            cap = cap.max(base - 1 + r);
        }
        cap.max(self.s as i64)
    }

    /// Whether some generator degree already breaks the degree criteria in
    /// a way no generator of degree `<= future` can repair.
    fn criteria_dead(&self, future: i64) -> bool {
        let mut at_least = 0;
        for r in (1..self.degree_count.len()).rev() {
            let n = self.degree_count[r];
            if n == 0 {
                continue;
            }
            at_least += n;
            if at_least >= 6 || r as u32 <= self.half {
                return false;
            }
            if self.degree_count[r - 1] == 0 && (r - 1) as i64 > future {
                return true;
            }
        }
        false
    }

    fn push(&mut self, a: usize, h: u32, top: i64, delta: i64) {
        self.rows[a].push(h);
        self.gamma += h as i64;
        self.objective += delta;
        if let Some(level) = self.level {
            for y in 0..5 {
                if top >= level + y as i64 {
                    self.high[y] += 1;
                }
            }
        }
    }

    fn pop(&mut self, a: usize, h: u32, top: i64, delta: i64) {
        self.rows[a].pop();
        self.gamma -= h as i64;
        self.objective -= delta;
        if let Some(level) = self.level {
            for y in 0..5 {
                if top >= level + y as i64 {
                    self.high[y] -= 1;
                }
            }
        }
    }

    /// Highest top degree a new column may reach without exceeding the
    /// counts allowed by the degree criteria.
    fn top_cap(&self) -> Option<i64> {
        let level = self.level?;
        let mut cap = level - 1;
        for y in 0..5 {
            if self.high[y] < 5 - y as i64 {
                cap = level + y as i64;
            } else {
                break;
            }
        }
        Some(cap)
    }

    fn max_height(&self, a: usize, j: usize) -> u32 {
        if j >= self.row_limit[a] {
            return 0;
        }
        let mut h = (self.z - self.gamma).max(0);
        let row = &self.rows[a];
        if j > 0 {
            let prev = row[j - 1] as i64;
            h = h.min(if self.rules.borel { prev - 1 } else { prev });
        }
        if a > 0 {
            let g = self.gaps[a];
            // column j of row a sits under column j + 1 - g of row a - 1
            let shift = if self.rules.borel { (j + 1).checked_sub(g) } else { j.checked_sub(g) };
            if let Some(k) = shift {
                let above = self.rows[a - 1].get(k).copied().unwrap_or(0) as i64;
                h = h.min(above);
            }
        }
        if let Some(cap) = self.top_cap() {
            h = h.min(cap - (self.bases[a] + j as i64) + 1);
        }
        h.max(0) as u32
    }

    fn remaining_bound(&self, a: usize, j: usize) -> i64 {
        let r = self.z - self.gamma;
        if r <= 0 {
            return 0;
        }
        let first_base = self.bases[a] + j as i64;
        let lowest = self.bases[self.s - 1].min(first_base);
        if !self.rules.borel {
            let mut top = first_base + r - 1;
            if let Some(cap) = self.top_cap() {
                top = top.min(cap);
            }
            return r * (12 * top - 22).max(0);
        }
        let mut tops = Vec::with_capacity(5);
        let tail_top = match self.level {
            Some(level) => {
                let mut room = i64::MAX;
                let allowed: Vec<i64> = (0..5)
                    .map(|y| {
                        room = room.min(5 - y as i64 - self.high[y]);
                        room.max(0)
                    })
                    .collect();
                for i in 1..=allowed[0] {
                    let y = (0..5).rev().find(|&y| allowed[y] >= i).unwrap_or(0);
                    tops.push(level + y as i64);
                }
                level - 1
            }
            None => first_base + r - 1,
        };
        RemainingBound { first_base, tops: &tops, tail_top, lowest, remaining: r }.value()
    }

    /// Bounds the undecided zeros through per-column height caps. Each
    /// undecided column is capped by the row above, by its left neighbour
    /// and by the degree criteria, then [`column_bound`] spreads the budget.
    fn column_caps_bound(&mut self, a: usize) -> i64 {
        let r = self.z - self.gamma;
        if r <= 0 {
            return 0;
        }
        let top_cap = self.top_cap();
        let borel = self.rules.borel;
        let mut buf = std::mem::take(&mut self.buffers);
        buf.cols.clear();
        buf.above.clear();
        for row in a..self.s {
            buf.current.clear();
            if row == a {
                buf.current.extend(self.rows[a].iter().map(|&h| h as i64));
            }
            let mut k = buf.current.len();
            while k < self.row_limit[row] {
                let mut c = r;
                if k > 0 {
                    let prev = buf.current[k - 1];
                    c = c.min(if borel { prev - 1 } else { prev });
                }
                if row > 0 {
                    let g = self.gaps[row];
                    let shift = if borel { (k + 1).checked_sub(g) } else { k.checked_sub(g) };
                    if let Some(i) = shift {
                        let above = if row == a {
                            self.rows[a - 1].get(i).map_or(0, |&h| h as i64)
                        } else {
                            buf.above.get(i).copied().unwrap_or(0)
                        };
                        c = c.min(above);
                    }
                }
                let base = self.bases[row] + k as i64;
                if let Some(cap) = top_cap {
                    c = c.min(cap - base + 1);
                }
                if c <= 0 {
                    break;
                }
                buf.current.push(c);
                buf.cols.push((base, base + c - 1));
                k += 1;
            }
            std::mem::swap(&mut buf.above, &mut buf.current);
        }
        let value = column_bound(&buf.cols, r, &mut buf.scratch);
        self.buffers = buf;
        value
    }

    /// Compares the decided part of the current rows with the incumbent.
    fn prefix_cmp(&self, a: usize, j: usize) -> Ordering {
        let Some((_, inc)) = &self.best else {
            return Ordering::Less;
        };
        for (r, (cur, best)) in self.rows.iter().zip(inc).take(a + 1).enumerate() {
            let len = if r < a { cur.len().max(best.len()) } else { j };
            for k in 0..len {
                let x = cur.get(k).copied().unwrap_or(0);
                let y = best.get(k).copied().unwrap_or(0);
                match x.cmp(&y) {
                    Ordering::Equal => {}
                    ord => return ord,
                }
            }
        }
        Ordering::Equal
    }

    fn leaf(&mut self) {
        if let Some((best, inc)) = &self.best {
            if self.objective < *best
                || (self.objective == *best && lex_cmp(&self.rows, inc) != Ordering::Less)
            {
                return;
            }
        }
        let h = HeightFunction::from_rows(self.seq.clone(), self.rows.clone());
        debug_assert!(
            super::violations(&h, self.rules).map(|v| v.is_empty()).unwrap_or(false),
            "search produced an inadmissible lift: {:?}",
            super::violations(&h, self.rules)
        );
        self.best = Some((self.objective, self.rows.clone()));
    }
}

fn lex_cmp(x: &[Vec<u32>], y: &[Vec<u32>]) -> Ordering {
    for (p, q) in x.iter().zip(y) {
        for k in 0..p.len().max(q.len()) {
            let u = p.get(k).copied().unwrap_or(0);
            let v = q.get(k).copied().unwrap_or(0);
            match u.cmp(&v) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
    }
    Ordering::Equal
}
