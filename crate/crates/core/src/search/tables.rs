//! Published largest-set sizes and counts for `p + q ≤ 7`.

use serde::{Deserialize, Serialize};

/// Workload tiers for table verification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    /// `p + q ≤ 5`.
    Small,
    /// `p + q ≤ 6`.
    Medium,
    /// `p + q ≤ 7`.
    Full,
}

impl Tier {
    pub fn of_cell(p: usize, q: usize) -> Tier {
        match p + q {
            0..=5 => Tier::Small,
            6 => Tier::Medium,
            _ => Tier::Full,
        }
    }
}

impl std::str::FromStr for Tier {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "small" => Ok(Tier::Small),
            "medium" => Ok(Tier::Medium),
            "full" => Ok(Tier::Full),
            _ => Err(format!("unknown tier {s:?} (small, medium, full)")),
        }
    }
}

/// Size of a largest set and the number of such sets, `None` for infinitely many.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedCell {
    pub p: usize,
    pub q: usize,
    pub size: usize,
    pub count: Option<usize>,
}

impl ExpectedCell {
    pub fn label(&self) -> String {
        match self.count {
            Some(c) => format!("{}_{}", self.size, c),
            None => format!("{}_∞", self.size),
        }
    }

    pub fn tier(&self) -> Tier {
        Tier::of_cell(self.p, self.q)
    }
}

const fn cell(p: usize, q: usize, size: usize, count: usize) -> ExpectedCell {
    ExpectedCell {
        p,
        q,
        size,
        count: Some(count),
    }
}

const fn infinite(p: usize, q: usize, size: usize) -> ExpectedCell {
    ExpectedCell {
        p,
        q,
        size,
        count: None,
    }
}

/// Largest proper two-distance sets in `ℝ^{p,q}`.
pub const LARGEST: &[ExpectedCell] = &[
    cell(1, 0, 3, 1),
    cell(2, 0, 5, 1),
    cell(3, 0, 6, 6),
    cell(4, 0, 10, 1),
    cell(5, 0, 16, 1),
    cell(6, 0, 27, 1),
    cell(7, 0, 29, 1),
    infinite(1, 1, 3),
    cell(2, 1, 5, 8),
    cell(3, 1, 7, 3),
    cell(4, 1, 10, 2),
    cell(5, 1, 13, 3),
    cell(6, 1, 22, 1),
    cell(2, 2, 7, 1),
    cell(3, 2, 8, 3),
    cell(4, 2, 10, 3),
    cell(5, 2, 13, 1),
    cell(3, 3, 9, 14),
    cell(4, 3, 12, 1),
];

/// Largest proper spherical two-distance sets in `ℝ^{p,q}`.
pub const LARGEST_SPHERICAL: &[ExpectedCell] = &[
    cell(1, 0, 3, 1),
    cell(2, 0, 5, 1),
    cell(3, 0, 6, 6),
    cell(4, 0, 10, 1),
    cell(5, 0, 16, 1),
    cell(6, 0, 27, 1),
    cell(7, 0, 28, 1),
    infinite(1, 1, 3),
    infinite(2, 1, 4),
    cell(3, 1, 7, 3),
    cell(4, 1, 10, 1),
    cell(5, 1, 13, 3),
    cell(6, 1, 22, 1),
    cell(2, 2, 7, 1),
    cell(3, 2, 8, 3),
    cell(4, 2, 10, 3),
    cell(5, 2, 13, 1),
    cell(3, 3, 9, 14),
    cell(4, 3, 11, 3),
];

pub fn expected(table: &[ExpectedCell], p: usize, q: usize) -> Option<ExpectedCell> {
    table.iter().copied().find(|c| c.p == p && c.q == q)
}

/// Cells of `table` whose tier is at most `tier`.
pub fn cells_up_to(table: &[ExpectedCell], tier: Tier) -> Vec<ExpectedCell> {
    table.iter().copied().filter(|c| c.tier() <= tier).collect()
}
