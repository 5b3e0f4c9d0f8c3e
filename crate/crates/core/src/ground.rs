//! Catalog ground groups.
//!
//! Every catalog group is cyclic on one generator `g`, so a ground element is
//! just an exponent reduced by the group's equality rule. Evaluation is a
//! closed-form bijection on the naturals.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Bijection `ℤ → ℕ` along which `IntShift` moves the successor map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Embedding {
    /// `z ↦ 2z` for `z ≥ 0`, `z ↦ -2z-1` otherwise.
    Zigzag,
    /// Zigzag positions with each pair `{2k, 2k+1}` swapped according to a
    /// hashed bit of `k`, so the parity of `enc(z)` looks random along `ℤ`.
    ParityMixing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GroundGroup {
    Trivial,
    /// `g` swaps `2k ↔ 2k+1`.
    OrderTwo,
    /// `g` is the successor on `ℤ` transported along `embedding`.
    IntShift { embedding: Embedding },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroundError {
    #[error("unknown ground group `{0}` (expected trivial, order2, intshift, intshift:zigzag)")]
    UnknownGroup(String),
    #[error("generator is not injective on [0, {bound}): {a} and {b} collide")]
    NotInjective { bound: u64, a: u64, b: u64 },
    #[error("g^{exponent} fixes {point}")]
    FixedPoint { exponent: i64, point: u64 },
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

impl Embedding {
    fn flip(k: u64) -> u64 {
        splitmix(k) & 1
    }

    pub fn encode(self, z: i64) -> u64 {
        let pos = if z >= 0 {
            2 * z as u64
        } else {
            (-2 * (z as i128) - 1) as u64
        };
        match self {
            Embedding::Zigzag => pos,
            Embedding::ParityMixing => pos ^ Self::flip(pos >> 1),
        }
    }

    pub fn decode(self, n: u64) -> i64 {
        let pos = match self {
            Embedding::Zigzag => n,
            Embedding::ParityMixing => n ^ Self::flip(n >> 1),
        };
        if pos % 2 == 0 {
            (pos / 2) as i64
        } else {
            -(pos.div_ceil(2) as i64)
        }
    }
}

impl GroundGroup {
    pub const PARITY_MIXING: GroundGroup = GroundGroup::IntShift {
        embedding: Embedding::ParityMixing,
    };

    /// Reduce an exponent by the group's equality rule.
    pub fn reduce(self, exponent: i64) -> i64 {
        match self {
            GroundGroup::Trivial => 0,
            GroundGroup::OrderTwo => exponent.rem_euclid(2),
            GroundGroup::IntShift { .. } => exponent,
        }
    }

    pub fn inverse(self, exponent: i64) -> i64 {
        self.reduce(-exponent)
    }

    /// Evaluate `g^exponent` at `m`.
    pub fn apply(self, exponent: i64, m: u64) -> u64 {
        match self {
            GroundGroup::Trivial => m,
            GroundGroup::OrderTwo => {
                if exponent.rem_euclid(2) == 1 {
                    m ^ 1
                } else {
                    m
                }
            }
            GroundGroup::IntShift { embedding } => {
                if exponent == 0 {
                    m
                } else {
                    embedding.encode(embedding.decode(m) + exponent)
                }
            }
        }
    }

    /// Closed-form answer: every non-identity catalog element is fixed-point free.
    pub fn has_fixed_points(self, exponent: i64) -> bool {
        self.reduce(exponent) == 0
    }

    /// Distinct elements `g^e` with `|e| ≤ span`, identity first.
    pub fn elements(self, span: i64) -> Vec<i64> {
        match self {
            GroundGroup::Trivial => vec![0],
            GroundGroup::OrderTwo => vec![0, 1],
            GroundGroup::IntShift { .. } => {
                let mut out = vec![0];
                for e in 1..=span {
                    out.push(e);
                    out.push(-e);
                }
                out
            }
        }
    }

    /// Check the catalog invariants below `bound`: the generator is injective
    /// and inverted by `g^-1`, and no `g^e` with `0 < |e| ≤ span` (reduced
    /// non-trivially) has a fixed point.
    pub fn audit(self, bound: u64, span: i64) -> Result<(), GroundError> {
        let mut seen = std::collections::HashMap::new();
        for m in 0..bound {
            let img = self.apply(1, m);
            if let Some(prev) = seen.insert(img, m) {
                return Err(GroundError::NotInjective { bound, a: prev, b: m });
            }
            if self.apply(-1, img) != m {
                return Err(GroundError::NotInjective { bound, a: m, b: img });
            }
        }
        for e in self.elements(span).into_iter().filter(|&e| e != 0) {
            if let Some(point) = (0..bound).find(|&m| self.apply(e, m) == m) {
                return Err(GroundError::FixedPoint { exponent: e, point });
            }
        }
        Ok(())
    }
}

impl fmt::Display for GroundGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroundGroup::Trivial => f.write_str("trivial"),
            GroundGroup::OrderTwo => f.write_str("order2"),
            GroundGroup::IntShift { embedding: Embedding::ParityMixing } => f.write_str("intshift"),
            GroundGroup::IntShift { embedding: Embedding::Zigzag } => f.write_str("intshift:zigzag"),
        }
    }
}

impl FromStr for GroundGroup {
    type Err = GroundError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "trivial" => Ok(GroundGroup::Trivial),
            "order2" | "order-two" => Ok(GroundGroup::OrderTwo),
            "intshift" | "intshift:parity-mixing" => Ok(GroundGroup::PARITY_MIXING),
            "intshift:zigzag" => Ok(GroundGroup::IntShift {
                embedding: Embedding::Zigzag,
            }),
            other => Err(GroundError::UnknownGroup(other.to_string())),
        }
    }
}
