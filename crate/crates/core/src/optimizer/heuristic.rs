//! The two hand schedules for bounding `A`. They are approximate reporting
//! aids: the chains they place need not form an admissible lift, and no
//! verdict depends on them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::staircase::{Column, InvariantSequence};
use crate::Int;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HeuristicBranch {
    /// Fill every row head up to degree `⌊d/2⌋`, then spend the rest on one
    /// chain directly above `⌊d/2⌋`.
    SixHigh,
    /// Give the row heads generators in degrees `⌊d/2⌋ + 1, ⌊d/2⌋ + 2, ...`,
    /// largest base first, until the budget runs out.
    Staircase,
}

impl FromStr for HeuristicBranch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "six_high" | "six-high" => Ok(HeuristicBranch::SixHigh),
            "staircase" => Ok(HeuristicBranch::Staircase),
            other => Err(Error::Parse(format!("unknown heuristic {other:?}"))),
        }
    }
}

impl fmt::Display for HeuristicBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HeuristicBranch::SixHigh => "six_high",
            HeuristicBranch::Staircase => "staircase",
        })
    }
}

/// Zeros in the consecutive degrees `low..=high`; `head` is `None` for the
/// free chain of the six-high schedule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chain {
    pub head: Option<Column>,
    pub low: u32,
    pub high: u32,
}

impl Chain {
    pub fn len(&self) -> Int {
        (self.high as Int - self.low as Int + 1).max(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn degree_sum(&self) -> Int {
        if self.is_empty() {
            return 0;
        }
        (self.low as Int + self.high as Int) * self.len() / 2
    }
}

/// Result of a hand schedule. Approximate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeuristicSchedule {
    pub branch: HeuristicBranch,
    pub gamma: Int,
    #[serde(rename = "A")]
    pub a: Int,
    pub chains: Vec<Chain>,
    pub approximate: bool,
}

pub fn heuristic_schedule(
    seq: &InvariantSequence,
    z: Int,
    branch: HeuristicBranch,
) -> Result<HeuristicSchedule> {
    let half = seq.d() / 2;
    let mut heads: Vec<Column> = (0..seq.s()).map(|i| seq.row_head(i)).collect();
    let chains = match branch {
        HeuristicBranch::SixHigh => {
            let mut chains: Vec<Chain> =
                heads.iter().map(|&c| Chain { head: Some(c), low: c.base_degree(), high: half }).collect();
            let used: Int = chains.iter().map(Chain::len).sum();
            if used > z {
                return Err(Error::InsufficientBudget { z, needed: used });
            }
            let rest = (z - used) as u32;
            if rest > 0 {
                chains.push(Chain { head: None, low: half + 1, high: half + rest });
            }
            chains
        }
        HeuristicBranch::Staircase => {
            heads.sort_by(|x, y| y.base_degree().cmp(&x.base_degree()).then(x.a.cmp(&y.a)));
            let mut chains = Vec::new();
            let mut left = z;
            for (k, &c) in heads.iter().enumerate() {
                let top = half + k as u32;
                let full = Chain { head: Some(c), low: c.base_degree(), high: top };
                if k == 0 && full.len() > z {
                    return Err(Error::InsufficientBudget { z, needed: full.len() });
                }
                if left <= 0 {
                    break;
                }
                let take = full.len().min(left);
                chains.push(Chain { head: Some(c), low: top + 1 - take as u32, high: top });
                left -= take;
            }
            chains
        }
    };
    Ok(HeuristicSchedule {
        branch,
        gamma: chains.iter().map(Chain::len).sum(),
        a: chains.iter().map(Chain::degree_sum).sum(),
        chains,
        approximate: true,
    })
}
