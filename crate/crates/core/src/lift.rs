//! Three-variable lifts of a staircase: monomial ideals in `x0, x1, x2` and
//! their height-function encoding.
//!
//! For a saturated curve ideal the set of `c` with `x0^a x1^b x2^c` outside
//! the ideal is an initial segment `0..H(a, b)`, so one integer per staircase
//! column describes every sporadic zero. [`HeightFunction`] is the canonical
//! representation used by the optimizer; [`MonomialIdeal`] is the exchange
//! format.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::staircase::{Column, InvariantSequence};
use crate::Int;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[u32; 3]", into = "[u32; 3]")]
pub struct Monomial {
    pub e: [u32; 3],
}

impl Monomial {
    pub const fn new(e0: u32, e1: u32, e2: u32) -> Self {
        Monomial { e: [e0, e1, e2] }
    }

    pub fn e0(self) -> u32 {
        self.e[0]
    }

    pub fn e1(self) -> u32 {
        self.e[1]
    }

    pub fn e2(self) -> u32 {
        self.e[2]
    }

    pub fn degree(self) -> u32 {
        self.e.iter().sum()
    }

    pub fn column(self) -> Column {
        Column::new(self.e[0], self.e[1])
    }

    pub fn divides(self, other: Monomial) -> bool {
        self.e.iter().zip(other.e.iter()).all(|(x, y)| x <= y)
    }

    /// Graded reverse lexicographic order with `x0 > x1 > x2`.
    pub fn cmp_revlex(&self, other: &Monomial) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            for i in (0..3).rev() {
                match self.e[i].cmp(&other.e[i]) {
                    Ordering::Equal => continue,
                    ord => return ord.reverse(),
                }
            }
            Ordering::Equal
        })
    }

    /// Order used for files and reports: by `x0` exponent descending, then
    /// `x1` and `x2` ascending.
    fn cmp_listing(&self, other: &Monomial) -> Ordering {
        other.e[0].cmp(&self.e[0]).then(self.e[1].cmp(&other.e[1])).then(self.e[2].cmp(&other.e[2]))
    }
}

impl From<[u32; 3]> for Monomial {
    fn from(e: [u32; 3]) -> Self {
        Monomial { e }
    }
}

impl From<Monomial> for [u32; 3] {
    fn from(m: Monomial) -> Self {
        m.e
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (i, &e) in self.e.iter().enumerate() {
            match e {
                0 => {}
                1 => {
                    write!(f, "x{i}")?;
                    wrote = true;
                }
                _ => {
                    write!(f, "x{i}^{e}")?;
                    wrote = true;
                }
            }
        }
        if !wrote {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// A minimal generator together with its total degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub monomial: Monomial,
    pub degree: u32,
}

/// Monomial ideal in `x0, x1, x2`, stored by its minimal generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialIdeal {
    gens: Vec<Monomial>,
}

impl MonomialIdeal {
    pub fn new(gens: impl IntoIterator<Item = Monomial>) -> Self {
        Self::normalize(gens).0
    }

    /// Minimalizes `gens`, returning the ideal and the generators that were
    /// redundant (duplicates or multiples of another generator).
    pub fn normalize(gens: impl IntoIterator<Item = Monomial>) -> (Self, Vec<Monomial>) {
        let mut all: Vec<Monomial> = gens.into_iter().collect();
        all.sort_by(|x, y| x.degree().cmp(&y.degree()).then(x.cmp_listing(y)));
        let mut kept: Vec<Monomial> = Vec::with_capacity(all.len());
        let mut dropped = Vec::new();
        for m in all {
            if kept.iter().any(|k| k.divides(m)) {
                dropped.push(m);
            } else {
                kept.push(m);
            }
        }
        kept.sort_by(Monomial::cmp_listing);
        dropped.sort_by(Monomial::cmp_listing);
        (MonomialIdeal { gens: kept }, dropped)
    }

    pub fn generators(&self) -> &[Monomial] {
        &self.gens
    }

    pub fn contains(&self, m: Monomial) -> bool {
        self.gens.iter().any(|g| g.divides(m))
    }

    /// Strong stability: every move of one exponent unit from `x_j` to
    /// `x_i`, `i < j`, keeps a generator inside the ideal.
    pub fn is_borel_fixed(&self) -> bool {
        self.gens.iter().all(|&g| {
            let [e0, e1, e2] = g.e;
            let mut moves = Vec::with_capacity(3);
            if e1 > 0 {
                moves.push(Monomial::new(e0 + 1, e1 - 1, e2));
            }
            if e2 > 0 {
                moves.push(Monomial::new(e0 + 1, e1, e2 - 1));
                moves.push(Monomial::new(e0, e1 + 1, e2 - 1));
            }
            moves.into_iter().all(|m| self.contains(m))
        })
    }

    /// Saturation with respect to `x2`, read back as the staircase invariants.
    pub fn saturate(&self) -> Result<InvariantSequence> {
        let stripped = MonomialIdeal::new(self.gens.iter().map(|g| Monomial::new(g.e0(), g.e1(), 0)));
        let s = stripped
            .gens
            .iter()
            .filter(|g| g.e1() == 0)
            .map(|g| g.e0())
            .min()
            .ok_or_else(|| Error::NotACurveIdeal("no pure power of x0 after saturation".into()))?;
        if s == 0 {
            return Err(Error::NotACurveIdeal("saturation is the unit ideal".into()));
        }
        let lambdas = (0..s)
            .map(|i| {
                stripped
                    .gens
                    .iter()
                    .filter(|g| g.e0() <= i)
                    .map(|g| g.e1())
                    .min()
                    .ok_or_else(|| Error::NotACurveIdeal(format!("staircase row {i} has no generator")))
            })
            .collect::<Result<Vec<_>>>()?;
        InvariantSequence::new(lambdas).map_err(|e| Error::NotACurveIdeal(e.to_string()))
    }

    /// Least `c` with `x0^a x1^b x2^c` in the ideal, if any.
    fn height_at(&self, a: u32, b: u32) -> Option<u32> {
        self.gens.iter().filter(|g| g.e0() <= a && g.e1() <= b).map(|g| g.e2()).min()
    }

    pub fn heights_of(&self) -> Result<HeightFunction> {
        let seq = self.saturate()?;
        let s = seq.s() as u32;
        if self.height_at(s, 0) != Some(0) {
            return Err(Error::NotACurveIdeal(
                "sporadic zeros below the pure x0 power are not supported".into(),
            ));
        }
        let b_max = self.gens.iter().map(|g| g.e1()).max().unwrap_or(0);
        let mut rows = Vec::with_capacity(s as usize);
        for a in 0..s {
            let lambda = seq.lambda(a as usize);
            let mut row = Vec::new();
            for b in lambda..=b_max.max(lambda) {
                let h = self.height_at(a, b).ok_or_else(|| {
                    Error::NotACurveIdeal(format!("column ({a}, {b}) has no dividing generator"))
                })?;
                row.push(h);
            }
            if row.last().copied().unwrap_or(0) != 0 {
                return Err(Error::NotACurveIdeal(format!("row {a} carries infinitely many sporadic zeros")));
            }
            rows.push(row);
        }
        Ok(HeightFunction::from_rows(seq, rows))
    }

    /// Number of degree-`t` monomials outside the ideal.
    pub fn hilbert_count(&self, t: u32) -> u64 {
        let mut n = 0;
        for a in 0..=t {
            for b in 0..=t - a {
                if !self.contains(Monomial::new(a, b, t - a - b)) {
                    n += 1;
                }
            }
        }
        n
    }

    pub fn max_generator_degree(&self) -> u32 {
        self.gens.iter().map(|g| g.degree()).max().unwrap_or(0)
    }

    pub fn to_file(&self) -> IdealFile {
        IdealFile { vars: 3, generators: self.gens.iter().map(|g| g.e).collect() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("ideal serializes")
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.gens.iter().map(Monomial::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// On-disk form of an ideal: `{"vars": 3, "generators": [[e0, e1, e2], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealFile {
    pub vars: u32,
    pub generators: Vec<[u32; 3]>,
}

impl IdealFile {
    pub fn parse(text: &str) -> Result<Self> {
        let file: IdealFile = serde_json::from_str(text)?;
        if file.vars != 3 {
            return Err(Error::Parse(format!(
                "expected an ideal in 3 variables, found vars = {}",
                file.vars
            )));
        }
        Ok(file)
    }

    /// Builds the ideal, also returning any redundant generators.
    pub fn into_ideal(self) -> (MonomialIdeal, Vec<Monomial>) {
        MonomialIdeal::normalize(self.generators.into_iter().map(Monomial::from))
    }
}

/// Sporadic-zero totals of a lift.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroStats {
    /// Number of sporadic zeros.
    pub gamma: Int,
    /// Sum of the degrees of the sporadic zeros.
    #[serde(rename = "A")]
    pub degree_sum: Int,
}

impl ZeroStats {
    /// `Σ_t α_t (12 t - 22) = 12 A - 22 γ`.
    pub fn penalty(self) -> Int {
        12 * self.degree_sum - 22 * self.gamma
    }
}

/// `H(a, b)` on the columns of a staircase; zero outside a finite support.
///
/// `rows[a][j]` is the height of column `(a, λa + j)`; rows `a >= s` are
/// identically zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HeightFunction {
    seq: InvariantSequence,
    rows: Vec<Vec<u32>>,
}

impl HeightFunction {
    pub fn zero(seq: InvariantSequence) -> Self {
        let rows = vec![Vec::new(); seq.s()];
        HeightFunction { seq, rows }
    }

    /// `rows[a][j]` is the height at `(a, λa + j)`. Missing rows are zero.
    pub fn from_rows(seq: InvariantSequence, mut rows: Vec<Vec<u32>>) -> Self {
        assert!(rows.len() <= seq.s(), "more rows than invariants");
        rows.resize(seq.s(), Vec::new());
        for row in &mut rows {
            while row.last() == Some(&0) {
                row.pop();
            }
        }
        HeightFunction { seq, rows }
    }

    pub fn from_entries(
        seq: InvariantSequence,
        entries: impl IntoIterator<Item = (Column, u32)>,
    ) -> Result<Self> {
        let mut h = Self::zero(seq);
        for (col, v) in entries {
            h.set(col, v)?;
        }
        Ok(h)
    }

    pub fn seq(&self) -> &InvariantSequence {
        &self.seq
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    /// Height of a column; zero for every column outside the support,
    /// including columns outside the staircase.
    pub fn get(&self, col: Column) -> u32 {
        let a = col.a as usize;
        if a >= self.seq.s() || col.b < self.seq.lambda(a) {
            return 0;
        }
        let j = (col.b - self.seq.lambda(a)) as usize;
        self.rows[a].get(j).copied().unwrap_or(0)
    }

    pub fn set(&mut self, col: Column, h: u32) -> Result<()> {
        let a = col.a as usize;
        if a >= self.seq.s() || col.b < self.seq.lambda(a) {
            return Err(Error::ColumnOutsideStaircase(col));
        }
        let j = (col.b - self.seq.lambda(a)) as usize;
        let row = &mut self.rows[a];
        if row.len() <= j {
            row.resize(j + 1, 0);
        }
        row[j] = h;
        while row.last() == Some(&0) {
            row.pop();
        }
        Ok(())
    }

    /// Columns with positive height, row by row.
    pub fn support(&self) -> impl Iterator<Item = (Column, u32)> + '_ {
        self.rows.iter().enumerate().flat_map(move |(a, row)| {
            let lambda = self.seq.lambda(a);
            row.iter()
                .enumerate()
                .filter(|(_, &h)| h > 0)
                .map(move |(j, &h)| (Column::new(a as u32, lambda + j as u32), h))
        })
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    pub fn zero_stats(&self) -> ZeroStats {
        let mut st = ZeroStats::default();
        for (col, h) in self.support() {
            let base = col.base_degree() as Int;
            let h = h as Int;
            st.gamma += h;
            st.degree_sum += h * base + h * (h - 1) / 2;
        }
        st
    }

    fn in_staircase(&self, a: i64, b: i64) -> bool {
        a >= 0 && b >= 0 && self.seq.contains(Column::new(a as u32, b as u32))
    }

    /// Minimal generators of `{x0^a x1^b x2^c : (a, b) in the staircase,
    /// c >= H(a, b)}`, in listing order.
    pub fn minimal_generators(&self) -> Vec<Generator> {
        let s = self.seq.s();
        let mut out = Vec::new();
        for a in 0..=s {
            let (lo, hi) = if a == s {
                (0, 0)
            } else {
                let l = self.seq.lambda(a);
                (l, l + self.rows[a].len() as u32)
            };
            for b in lo..=hi {
                let h = self.get(Column::new(a as u32, b));
                let (ai, bi) = (a as i64, b as i64);
                let left = self.in_staircase(ai, bi - 1) && self.get(Column::new(a as u32, b - 1)) <= h;
                let up = self.in_staircase(ai - 1, bi) && self.get(Column::new(a as u32 - 1, b)) <= h;
                if !left && !up {
                    let m = Monomial::new(a as u32, b, h);
                    out.push(Generator { monomial: m, degree: m.degree() });
                }
            }
        }
        out.sort_by(|x, y| x.monomial.cmp_listing(&y.monomial));
        out
    }

    pub fn to_ideal(&self) -> MonomialIdeal {
        MonomialIdeal::new(self.minimal_generators().into_iter().map(|g| g.monomial))
    }

    /// Lexicographic comparison of the row-major height vectors, each row
    /// padded with zeros.
    pub fn cmp_lex(&self, other: &HeightFunction) -> Ordering {
        for (x, y) in self.rows.iter().zip(other.rows.iter()) {
            let n = x.len().max(y.len());
            for j in 0..n {
                let (u, v) = (x.get(j).copied().unwrap_or(0), y.get(j).copied().unwrap_or(0));
                match u.cmp(&v) {
                    Ordering::Equal => continue,
                    ord => return ord,
                }
            }
        }
        Ordering::Equal
    }
}

#[derive(Serialize, Deserialize)]
struct HeightFunctionRepr {
    lambdas: InvariantSequence,
    /// `[a, b, H(a, b)]` for every column of the support.
    heights: Vec<[u32; 3]>,
}

impl Serialize for HeightFunction {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        HeightFunctionRepr {
            lambdas: self.seq.clone(),
            heights: self.support().map(|(c, h)| [c.a, c.b, h]).collect(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for HeightFunction {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let repr = HeightFunctionRepr::deserialize(de)?;
        HeightFunction::from_entries(
            repr.lambdas,
            repr.heights.into_iter().map(|[a, b, h]| (Column::new(a, b), h)),
        )
        .map_err(serde::de::Error::custom)
    }
}
