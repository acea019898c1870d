//! The numerical surface inequality in its exact and approximated forms.
//!
//! With `P = d^2 - 5d - 18 - 10 sum2 + 12 sum3`, a lift with sporadic-zero
//! statistics `(A, γ)` is consistent iff `P - (12A - 22γ) <= 0`.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{binom3, Scalar};
use crate::staircase::{binom, InvariantSequence};
use crate::Int;

/// `d^2 - 5d - 18 - 10 sum2 + 12 sum3`: the part of the inequality that does
/// not depend on the sporadic zeros.
pub fn p_value(seq: &InvariantSequence) -> Int {
    let d = seq.d() as Int;
    d * d - 5 * d - 18 - 10 * seq.sum2() + 12 * seq.sum3()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Eq1Evaluation {
    pub seq: InvariantSequence,
    #[serde(rename = "A")]
    pub a: Int,
    pub gamma: Int,
    #[serde(rename = "P")]
    pub p: Int,
    /// `P - (12A - 22γ)`; consistent iff `<= 0`.
    pub value: Int,
}

impl Eq1Evaluation {
    pub fn is_consistent(&self) -> bool {
        self.value <= 0
    }
}

pub fn eval_eq1(seq: &InvariantSequence, a: Int, gamma: Int) -> Eq1Evaluation {
    let p = p_value(seq);
    Eq1Evaluation { seq: seq.clone(), a, gamma, p, value: p - (12 * a - 22 * gamma) }
}

/// `floor(value / 12)` for the bound `A <= a_bound` at `γ = z`.
pub fn neg_statistic(seq: &InvariantSequence, a_bound: Int, z: Int) -> Int {
    Integer::div_floor(&eval_eq1(seq, a_bound, z).value, &12)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Threshold {
    pub seq: InvariantSequence,
    pub z: Int,
    /// `P`: the configuration is eliminated iff every admissible lift has
    /// `12A - 22γ < P`.
    pub objective_threshold: Int,
    /// Least `A` consistent with the inequality when `γ = z`.
    pub a_min: Int,
}

pub fn elimination_threshold(seq: &InvariantSequence, z: Int) -> Threshold {
    let p = p_value(seq);
    Threshold { seq: seq.clone(), z, objective_threshold: p, a_min: Integer::div_ceil(&(p + 22 * z), &12) }
}

/// Right-hand sides of the two invariant-sum approximations for `(d, s)`:
/// an upper bound for `1 + sum2` and a lower bound for `sum3`.
pub fn approx_bounds<S: Scalar>(d: u32, s: usize) -> (S, S) {
    let d = S::from_int(d as i64);
    let si = S::from_int(s as i64);
    let upper = d.clone() * d.clone() / (S::from_int(2) * si.clone())
        + S::from_int(s as i64 - 4) * d.clone() / S::from_int(2)
        + S::one();
    let x = d / si.clone() + S::ratio(s as i64 - 3, 2);
    let lower = si * binom3(&x) + S::one() - S::from_int(binom(s as Int - 1, 4));
    (upper, lower)
}

/// Whether a concrete sequence satisfies both approximations.
pub fn approx_bounds_hold<S: Scalar>(seq: &InvariantSequence) -> bool {
    let (upper, lower) = approx_bounds::<S>(seq.d(), seq.s());
    S::from_int(1 + seq.sum2()) <= upper && S::from_int(seq.sum3()) >= lower
}

/// The approximated inequality with both invariant sums replaced by their
/// bounds: consistent iff the result is `<= 0`.
pub fn eq7_value<S: Scalar>(d: &S, s: usize, a: &S, gamma: &S) -> S {
    let si = S::from_int(s as i64);
    let x = d.clone() / si.clone() + S::ratio(s as i64 - 3, 2);
    d.clone() * d.clone()
        - S::from_int(5) * d.clone()
        - S::from_int(18)
        - S::from_int(10)
            * (d.clone() * d.clone() / (S::from_int(2) * si.clone())
                + S::from_int(s as i64 - 4) * d.clone() / S::from_int(2))
        + S::from_int(12) * si * binom3(&x)
        + S::from_int(12) * (S::one() - S::from_int(binom(s as Int - 1, 4)))
        - (S::from_int(12) * a.clone() - S::from_int(22) * gamma.clone())
}

/// Gate on `γ` below which the cubic caps the degree, for `s` in `{4, 5}`.
pub fn gamma_gate<S: Scalar>(s: usize, d: &S) -> Result<S> {
    match s {
        4 => Ok(S::ratio(3, 4) * d.clone()),
        5 => Ok(S::ratio(2, 5) * d.clone()),
        _ => Err(Error::UnsupportedS(s)),
    }
}

/// Upper bound on `λ0` forced by connectedness.
pub fn lambda0_cap<S: Scalar>(s: usize, d: &S) -> Result<S> {
    match s {
        4 => Ok(d.clone() / S::from_int(4) + S::from_int(3)),
        5 => Ok(d.clone() / S::from_int(5) + S::from_int(4)),
        _ => Err(Error::UnsupportedS(s)),
    }
}

/// `Σ_{t=λ0}^{λ0+γ-1} t` with `λ0` and `γ` at their caps: the sum of `γ`
/// consecutive degrees starting at the top of row 0.
pub fn naive_a_bound<S: Scalar>(s: usize, d: &S) -> Result<S> {
    let l = lambda0_cap::<S>(s, d)?;
    let g = gamma_gate::<S>(s, d)?;
    Ok((S::from_int(2) * l + g.clone() - S::one()) * g / S::from_int(2))
}

/// The cubic in `d` that the approximated inequality reduces to once `γ` is
/// at most its gate.
pub fn gate_cubic<S: Scalar>(s: usize, d: &S) -> Result<S> {
    let d2 = d.clone() * d.clone();
    let d3 = d2.clone() * d.clone();
    match s {
        4 => Ok(d3 / S::from_int(8) - S::ratio(23, 8) * d2 - S::ratio(17, 2) * d.clone() + S::from_int(33)),
        5 => Ok(d3 / S::from_int(25) - S::ratio(24, 25) * d2 - S::from_int(10) * d.clone() - S::from_int(9)),
        _ => Err(Error::UnsupportedS(s)),
    }
}

/// Largest `d` in `0..=limit` with `q(d) <= 0`, scanning upwards.
fn cubic_cap<S: Scalar>(s: usize, limit: i64) -> Result<i64> {
    let mut cap = -1;
    for d in 0..=limit {
        if gate_cubic::<S>(s, &S::from_int(d))? <= S::zero() {
            cap = d;
        }
    }
    Ok(cap)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaGate<S> {
    pub gate_gamma: S,
    pub cubic_value: S,
    /// Largest degree allowed when `γ` does not exceed the gate.
    pub d_cap_if_gate_fails: i64,
}

pub fn gamma_lower_gate<S: Scalar>(s: usize, d: u32) -> Result<GammaGate<S>> {
    let dd = S::from_int(d as i64);
    Ok(GammaGate {
        gate_gamma: gamma_gate(s, &dd)?,
        cubic_value: gate_cubic(s, &dd)?,
        d_cap_if_gate_fails: cubic_cap::<S>(s, 400)?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaneCurveComparison<S> {
    /// Upper bound on the genus of the hyperplane section.
    pub lhs: S,
    /// Lower bound on the genus of a plane curve of degree `d/2`.
    pub rhs: S,
    pub contradiction: bool,
}

/// Compares the section genus bound with the genus of a plane curve of
/// degree `d/2`. For `s = 4` the section bound is strict, so equality is
/// already a contradiction; for `s` in `5..=7` only `lhs < rhs` is.
pub fn plane_curve_lemma<S: Scalar>(s: usize, d: u32) -> Result<PlaneCurveComparison<S>> {
    let d = S::from_int(d as i64);
    let d2 = d.clone() * d.clone();
    let lhs = match s {
        4 => d2 / S::from_int(8) + S::one() - S::ratio(3, 4) * d.clone(),
        5 => d2 / S::from_int(10) + d.clone() / S::from_int(2) + S::one() - S::ratio(2, 5) * d.clone(),
        6 | 7 => {
            d2 / S::from_int(2 * s as i64) + S::from_int(s as i64 - 4) * d.clone() / S::from_int(2) + S::one()
        }
        _ => return Err(Error::UnsupportedS(s)),
    };
    let half = d / S::from_int(2);
    let rhs = (half.clone() - S::one()) * (half - S::from_int(2)) / S::from_int(2);
    let contradiction = if s == 4 { lhs <= rhs } else { lhs < rhs };
    Ok(PlaneCurveComparison { lhs, rhs, contradiction })
}
