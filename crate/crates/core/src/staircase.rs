//! The two-variable staircase `gin(I_Γ) = (x0^s, x0^(s-1) x1^λ(s-1), ..., x1^λ0)`.
//!
//! Row `i` of the staircase (the monomials `x0^i x1^b`) is entered at
//! `b = λi`; every row `i >= s` is entirely inside the ideal.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Int;

/// Exponent pair `(a, b)` of `x0^a x1^b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Column {
    pub a: u32,
    pub b: u32,
}

impl Column {
    pub const fn new(a: u32, b: u32) -> Self {
        Column { a, b }
    }

    /// Degree of `x0^a x1^b`.
    pub fn base_degree(self) -> u32 {
        self.a + self.b
    }
}

/// Invariants `λ0 > λ1 > ... > λ(s-1) >= 1`, largest first.
///
/// Construction only enforces strict decrease and positivity; saturating an
/// arbitrary Borel ideal may legitimately produce gaps wider than two.
/// Use [`InvariantSequence::connected`] or [`InvariantSequence::is_connected`]
/// where connectedness is required.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct InvariantSequence {
    lambdas: Vec<u32>,
}

impl InvariantSequence {
    pub fn new(lambdas: Vec<u32>) -> Result<Self> {
        if lambdas.is_empty() {
            return Err(Error::InvalidSequence("empty sequence".into()));
        }
        if lambdas.contains(&0) {
            return Err(Error::InvalidSequence(format!(
                "{} has a non-positive invariant",
                fmt_lambdas(&lambdas)
            )));
        }
        if lambdas.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::InvalidSequence(format!(
                "{} is not strictly decreasing",
                fmt_lambdas(&lambdas)
            )));
        }
        Ok(InvariantSequence { lambdas })
    }

    /// Like [`InvariantSequence::new`], additionally requiring `λi <= λ(i+1) + 2`.
    pub fn connected(lambdas: Vec<u32>) -> Result<Self> {
        let seq = Self::new(lambdas)?;
        if !seq.is_connected() {
            return Err(Error::InvalidSequence(format!("{seq} is not connected")));
        }
        Ok(seq)
    }

    pub fn lambdas(&self) -> &[u32] {
        &self.lambdas
    }

    pub fn lambda(&self, i: usize) -> u32 {
        self.lambdas[i]
    }

    pub fn s(&self) -> usize {
        self.lambdas.len()
    }

    /// Degree of the curve, `Σ λi`.
    pub fn d(&self) -> u32 {
        self.lambdas.iter().sum()
    }

    /// Consecutive differences `λi - λ(i+1)`.
    pub fn gaps(&self) -> impl Iterator<Item = u32> + '_ {
        self.lambdas.windows(2).map(|w| w[0] - w[1])
    }

    pub fn is_connected(&self) -> bool {
        self.gaps().all(|g| g <= 2)
    }

    /// Membership of `x0^a x1^b` in the staircase ideal.
    pub fn contains(&self, col: Column) -> bool {
        let a = col.a as usize;
        a >= self.s() || col.b >= self.lambdas[a]
    }

    /// Column of the row generator `x0^i x1^λi`.
    pub fn row_head(&self, i: usize) -> Column {
        Column::new(i as u32, self.lambdas[i])
    }

    /// `Σ (C(λi, 2) + (i - 1) λi)`, with `i - 1 = -1` for the first row.
    pub fn sum2(&self) -> Int {
        self.lambdas.iter().enumerate().map(|(i, &l)| binom(l as Int, 2) + (i as Int - 1) * l as Int).sum()
    }

    /// `Σ (C(λi + i - 1, 3) - C(i - 1, 3))`.
    pub fn sum3(&self) -> Int {
        self.lambdas
            .iter()
            .enumerate()
            .map(|(i, &l)| binom(l as Int + i as Int - 1, 3) - binom(i as Int - 1, 3))
            .sum()
    }

    pub fn acm_class(&self) -> AcmClass {
        let s = self.s();
        if s < 2 {
            return AcmClass::NotAcm;
        }
        let gaps: Vec<u32> = self.gaps().collect();
        let t = self.lambdas[s - 1] + s as u32 - 1;
        if gaps.iter().all(|&g| g == 2) {
            AcmClass::CompleteIntersection { s: s as u32, t }
        } else if gaps[0] == 1 && gaps[1..].iter().all(|&g| g == 2) {
            AcmClass::LinkedToLine { s: s as u32, t }
        } else {
            AcmClass::NotAcm
        }
    }
}

/// `C(n, k)` for signed `n`; zero whenever `n < k`.
pub fn binom(n: Int, k: u32) -> Int {
    if n < k as Int {
        return 0;
    }
    let mut acc: Int = 1;
    for j in 0..k as Int {
        acc = acc * (n - j) / (j + 1);
    }
    acc
}

fn fmt_lambdas(l: &[u32]) -> String {
    l.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for InvariantSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_lambdas(&self.lambdas))
    }
}

impl FromStr for InvariantSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lambdas = s
            .split(',')
            .map(|p| p.trim().parse::<u32>().map_err(|e| Error::Parse(format!("invariant {p:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(lambdas)
    }
}

impl TryFrom<Vec<u32>> for InvariantSequence {
    type Error = Error;

    fn try_from(v: Vec<u32>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<InvariantSequence> for Vec<u32> {
    fn from(seq: InvariantSequence) -> Self {
        seq.lambdas
    }
}

/// Arithmetically Cohen–Macaulay pattern read off the invariants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AcmClass {
    NotAcm,
    /// All gaps equal two: a complete intersection of type `(s, t)`.
    CompleteIntersection {
        s: u32,
        t: u32,
    },
    /// First gap one, the rest two: linked to a line by a complete
    /// intersection of type `(s, t)`.
    LinkedToLine {
        s: u32,
        t: u32,
    },
}

impl AcmClass {
    pub fn is_acm(self) -> bool {
        !matches!(self, AcmClass::NotAcm)
    }

    pub fn label(self) -> &'static str {
        match self {
            AcmClass::NotAcm => "not_acm",
            AcmClass::CompleteIntersection { .. } => "acm_ci",
            AcmClass::LinkedToLine { .. } => "acm_line",
        }
    }
}

/// All connected sequences of `s` invariants summing to `d`, in
/// lexicographically decreasing order.
pub fn enumerate_sequences(d: u32, s: usize) -> Vec<InvariantSequence> {
    fn rec(prefix: &mut Vec<u32>, rem: u32, s: usize, out: &mut Vec<InvariantSequence>) {
        let left = s - prefix.len();
        if left == 0 {
            if rem == 0 {
                out.push(InvariantSequence { lambdas: prefix.clone() });
            }
            return;
        }
        let (lo, hi) = match prefix.last() {
            None => (1, rem),
            Some(&p) => (p.saturating_sub(2).max(1), p - 1),
        };
        for v in (lo..=hi.min(rem)).rev() {
            // the remaining k parts lie strictly between 0 and v
            let k = left as u32 - 1;
            let tri = k * (k + 1) / 2;
            if v < k + 1 || rem - v < tri || rem - v > k * v - tri {
                continue;
            }
            prefix.push(v);
            rec(prefix, rem - v, s, out);
            prefix.pop();
        }
    }

    let mut out = Vec::new();
    if d == 0 || s == 0 {
        return out;
    }
    rec(&mut Vec::with_capacity(s), d, s, &mut out);
    out
}
