//! Bounds used to prune the exact search.
//!
//! With `T = max(half, g6)`, where `g6` is the sixth largest generator degree,
//! the degree criteria force every degree in `[T, g1]` to carry a generator.
//! So at most `5 - y` columns have their top zero in degree `>= T + y`.
//! [`high_generator_level`] bounds `T` from above using only the budget.

use crate::staircase::InvariantSequence;
use crate::Int;

/// Cheapest number of zeros giving `k` generators of degree `>= rho` in a
/// row whose head has base degree `beta`.
fn row_cost(beta: i64, rho: i64, k: i64) -> i64 {
    if k == 0 {
        return 0;
    }
    let need = (rho - beta).max(0);
    // k positive columns, each topping out at degree >= rho
    let top = need.max(k);
    let positive: i64 = (0..k).map(|j| top - j).sum();
    // m positive columns plus the corner generator x0^a x1^(λa + m)
    let m = need.max(k - 1);
    positive.min(m * (m + 1) / 2)
}

/// Least number of sporadic zeros that any lift with six generators of
/// degree `>= rho` must carry.
fn six_generator_cost(seq: &InvariantSequence, rho: i64) -> i64 {
    const INF: i64 = i64::MAX / 4;
    let mut best = vec![INF; 7];
    best[0] = 0;
    // x0^s is a generator of degree s
    if seq.s() as i64 >= rho {
        best[1] = 0;
    }
    for a in 0..seq.s() {
        let beta = (a as u32 + seq.lambda(a)) as i64;
        let mut next = best.clone();
        for have in 0..=6usize {
            if best[have] == INF {
                continue;
            }
            for k in 1..=(6 - have) {
                let c = best[have] + row_cost(beta, rho, k as i64);
                let slot = &mut next[have + k];
                *slot = (*slot).min(c);
            }
        }
        best = next;
    }
    best[6]
}

/// An upper bound for `max(half, g6)` over all lifts with at most `z`
/// sporadic zeros.
pub fn high_generator_level(seq: &InvariantSequence, z: Int, half: u32) -> u32 {
    let mut level = half as i64;
    while six_generator_cost(seq, level + 1) <= z {
        level += 1;
    }
    level as u32
}

/// Upper bound on the penalty of the zeros that are still undecided.
///
/// `first_base` bounds the base degree of the first undecided column; the
/// `i`-th undecided column in order of decreasing top has base at most
/// `first_base + i - 1`. `tops[i]` caps the top degree of that column.
/// Every zero costs one unit of `remaining`.
pub(crate) struct RemainingBound<'a> {
    pub first_base: i64,
    pub tops: &'a [i64],
    /// Cap for every column beyond `tops`.
    pub tail_top: i64,
    pub lowest: i64,
    pub remaining: i64,
}

fn weight(t: i64) -> i64 {
    (12 * t - 22).max(0)
}

impl RemainingBound<'_> {
    fn top(&self, i: usize) -> i64 {
        self.tops.get(i).copied().unwrap_or(self.tail_top)
    }

    /// Most zeros in degree `>= t` affordable with the remaining budget.
    fn reach(&self, t: i64) -> i64 {
        let r = self.remaining;
        let mut best = 0;
        let mut cap = 0i64;
        let mut overhead = 0i64;
        let mut i = 0usize;
        loop {
            let top = self.top(i);
            let c = (top - t + 1).max(0);
            if c == 0 {
                // columns are sorted by top, so none further reaches t
                break;
            }
            let base = self.first_base + i as i64;
            let o = (t - base).max(0);
            overhead += o;
            if overhead > r {
                break;
            }
            cap += c;
            best = best.max(cap.min(r - overhead));
            if o == 0 && i >= self.tops.len() {
                // further columns are free of overhead and add `c` each
                best = best.max(r - overhead);
                break;
            }
            i += 1;
        }
        best.min(r)
    }

    pub fn value(&self) -> i64 {
        if self.remaining <= 0 {
            return 0;
        }
        let hi = (0..self.tops.len()).map(|i| self.top(i)).chain([self.tail_top]).max().unwrap_or(0);
        let mut total = 0;
        let mut placed = 0;
        let mut t = hi;
        while t >= self.lowest && placed < self.remaining {
            let k = self.reach(t).max(placed);
            total += (k - placed) * weight(t);
            placed = k;
            t -= 1;
        }
        total
    }
}

/// Upper bound on the penalty of `remaining` zeros spread over columns
/// given as `(base, top)` pairs, where a column's zeros fill its degrees
/// from the base upward and never pass its top.
///
/// For each degree `t`, the zeros of degree `>= t` are bounded by a
/// fractional knapsack: a column yields `top - t + 1` of them at a cost of
/// `top - base + 1` zeros.
pub(crate) fn column_bound(cols: &[(i64, i64)], remaining: i64, scratch: &mut Vec<(i64, i64)>) -> i64 {
    if remaining <= 0 || cols.is_empty() {
        return 0;
    }
    let hi = cols.iter().map(|c| c.1).max().unwrap_or(0);
    let lo = cols.iter().map(|c| c.0).min().unwrap_or(0);
    let mut total = 0;
    let mut placed = 0;
    let mut t = hi;
    while t >= lo && placed < remaining {
        scratch.clear();
        scratch.extend(cols.iter().filter(|c| c.1 >= t).map(|&(base, top)| (top - t + 1, (t - base).max(0))));
        // best gain per zero first
        scratch.sort_unstable_by(|x, y| (x.1 * y.0).cmp(&(y.1 * x.0)));
        let mut room = remaining;
        let mut reach = 0;
        for &(c, o) in scratch.iter() {
            if c + o <= room {
                reach += c;
                room -= c + o;
            } else {
                reach += c * room / (c + o);
                break;
            }
        }
        let k = reach.min(remaining).max(placed);
        total += (k - placed) * weight(t);
        placed = k;
        t -= 1;
    }
    total
}
