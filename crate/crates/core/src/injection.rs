//! Finite partial injections on the naturals and the evaluation `w[s]` of
//! words against them.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::words::{Letter, Word};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InjectionError {
    #[error("not injective: {a} and {b} both map to {value}")]
    NotInjective { a: u64, b: u64, value: u64 },
    #[error("{point} is mapped twice")]
    NotFunction { point: u64 },
    #[error("cannot parse pair `{0}` (expected `a:b`)")]
    Parse(String),
}

/// A finite injective partial map `ℕ ⇀ ℕ`, kept together with its inverse.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialInjection {
    forward: BTreeMap<u64, u64>,
    backward: BTreeMap<u64, u64>,
}

impl PartialInjection {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (u64, u64)>) -> Result<Self, InjectionError> {
        let mut s = Self::new();
        for (a, b) in pairs {
            s.insert(a, b)?;
        }
        Ok(s)
    }

    /// Add `a ↦ b`. Re-inserting an existing pair is a no-op.
    pub fn insert(&mut self, a: u64, b: u64) -> Result<(), InjectionError> {
        match (self.forward.get(&a), self.backward.get(&b)) {
            (Some(&v), _) if v == b => Ok(()),
            (Some(_), _) => Err(InjectionError::NotFunction { point: a }),
            (None, Some(&prev)) => Err(InjectionError::NotInjective {
                a: prev,
                b: a,
                value: b,
            }),
            (None, None) => {
                self.forward.insert(a, b);
                self.backward.insert(b, a);
                Ok(())
            }
        }
    }

    pub fn with(&self, a: u64, b: u64) -> Result<Self, InjectionError> {
        let mut s = self.clone();
        s.insert(a, b)?;
        Ok(s)
    }

    pub fn get(&self, a: u64) -> Option<u64> {
        self.forward.get(&a).copied()
    }

    pub fn get_inverse(&self, b: u64) -> Option<u64> {
        self.backward.get(&b).copied()
    }

    pub fn inverse(&self) -> Self {
        Self {
            forward: self.backward.clone(),
            backward: self.forward.clone(),
        }
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn in_domain(&self, a: u64) -> bool {
        self.forward.contains_key(&a)
    }

    pub fn in_range(&self, b: u64) -> bool {
        self.backward.contains_key(&b)
    }

    pub fn domain(&self) -> impl Iterator<Item = u64> + '_ {
        self.forward.keys().copied()
    }

    pub fn range(&self) -> impl Iterator<Item = u64> + '_ {
        self.backward.keys().copied()
    }

    /// Pairs sorted by argument.
    pub fn pairs(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.forward.iter().map(|(&a, &b)| (a, b))
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.pairs().all(|(a, b)| other.get(a) == Some(b))
    }

    /// `self ∘ inner` as partial maps.
    pub fn compose(&self, inner: &Self) -> Self {
        let mut out = Self::new();
        for (a, b) in inner.pairs() {
            if let Some(c) = self.get(b) {
                out.insert(a, c).expect("composition of injections is injective");
            }
        }
        out
    }

    /// Largest natural mentioned, if any.
    pub fn max_point(&self) -> Option<u64> {
        self.forward
            .keys()
            .next_back()
            .copied()
            .max(self.backward.keys().next_back().copied())
    }
}

impl fmt::Display for PartialInjection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pairs().map(|(a, b)| format!("{a}:{b}")).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for PartialInjection {
    type Err = InjectionError;

    /// `a:b,c:d,…`; the empty string is the empty map.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut pairs = Vec::new();
        for part in s.split([',', ' ']).map(str::trim).filter(|p| !p.is_empty()) {
            let (a, b) = part
                .split_once([':', '>'])
                .ok_or_else(|| InjectionError::Parse(part.to_string()))?;
            let parse = |x: &str| {
                x.trim()
                    .trim_start_matches('-')
                    .parse::<u64>()
                    .map_err(|_| InjectionError::Parse(part.to_string()))
            };
            pairs.push((parse(a)?, parse(b)?));
        }
        Self::from_pairs(pairs)
    }
}

impl Serialize for PartialInjection {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.pairs().map(|(a, b)| [a, b]))
    }
}

impl<'de> Deserialize<'de> for PartialInjection {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let pairs = Vec::<[u64; 2]>::deserialize(deserializer)?;
        Self::from_pairs(pairs.into_iter().map(|[a, b]| (a, b))).map_err(serde::de::Error::custom)
    }
}

/// Apply a single letter.
pub fn apply_letter(w: &Word, letter: Letter, s: &PartialInjection, m: u64) -> Option<u64> {
    match letter {
        Letter::Ground(e) => Some(w.group().apply(e, m)),
        Letter::X => s.get(m),
        Letter::XInv => s.get_inverse(m),
    }
}

/// `w[s](m)`: letters applied right to left.
pub fn eval_word(w: &Word, s: &PartialInjection, m: u64) -> Option<u64> {
    w.letters()
        .iter()
        .rev()
        .try_fold(m, |v, &l| apply_letter(w, l, s, v))
}

/// `w^k[s](m)`.
pub fn eval_power(w: &Word, k: usize, s: &PartialInjection, m: u64) -> Option<u64> {
    (0..k).try_fold(m, |v, _| eval_word(w, s, v))
}

/// The partial injection `w[s]`, as long as `w` mentions `X`.
pub fn word_map(w: &Word, s: &PartialInjection) -> Option<PartialInjection> {
    if w.is_ground() {
        return None;
    }
    let mut out = PartialInjection::new();
    for m in candidate_inputs(w, s) {
        if let Some(v) = eval_word(w, s, m) {
            out.insert(m, v).expect("w[s] is injective");
        }
    }
    Some(out)
}

/// Every `m` where `w[s](m)` can be defined: the first `X`-letter must hit
/// `dom(s)` (or `ran(s)` for `X⁻¹`) after the ground prefix.
fn candidate_inputs(w: &Word, s: &PartialInjection) -> BTreeSet<u64> {
    let letters = w.letters();
    let Some(pos) = letters.iter().rposition(|l| l.is_x()) else {
        return BTreeSet::new();
    };
    let targets: Vec<u64> = match letters[pos] {
        Letter::X => s.domain().collect(),
        _ => s.range().collect(),
    };
    let prefix = w.slice(pos + 1, letters.len()).inverse();
    targets
        .into_iter()
        .map(|t| eval_word(&prefix, s, t).expect("ground prefix is total"))
        .collect()
}

/// Fixed-point set of `w[s]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FixSet {
    /// Identity word: every natural is fixed.
    All,
    Finite(BTreeSet<u64>),
}

impl FixSet {
    pub fn contains(&self, m: u64) -> bool {
        match self {
            FixSet::All => true,
            FixSet::Finite(set) => set.contains(&m),
        }
    }

    /// The finite set; panics on `All`.
    pub fn finite(&self) -> &BTreeSet<u64> {
        match self {
            FixSet::Finite(set) => set,
            FixSet::All => panic!("fixed-point set of the identity is not finite"),
        }
    }
}

/// Exact fixed points of `w[s]`. Words with `X` have finite domain; for
/// ground words the catalog's closed form decides (non-identity elements are
/// fixed-point free).
pub fn fix_set(w: &Word, s: &PartialInjection) -> FixSet {
    if w.is_ground() {
        let exponent = w.letters().first().map_or(0, |l| match l {
            Letter::Ground(e) => *e,
            _ => unreachable!(),
        });
        return if w.group().has_fixed_points(exponent) {
            FixSet::All
        } else {
            FixSet::Finite(BTreeSet::new())
        };
    }
    FixSet::Finite(
        candidate_inputs(w, s)
            .into_iter()
            .filter(|&m| eval_word(w, s, m) == Some(m))
            .collect(),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum PathEnd {
    /// The application at step `step` (0-based) was undefined.
    Undefined { step: usize },
    BudgetExhausted,
    /// A `(value, letter position)` state repeated.
    CycleDetected,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Path {
    pub word: String,
    pub start: u64,
    pub values: Vec<u64>,
    pub end: PathEnd,
}

/// Trace `m` letter by letter through `w` repeated, right to left. Stops at
/// the first undefined application, after `budget` applications, or on a
/// repeated state.
pub fn path(w: &Word, s: &PartialInjection, m: u64, budget: usize) -> Path {
    let letters = w.letters();
    let mut values = vec![m];
    let mut seen = HashSet::new();
    let end = if letters.is_empty() {
        PathEnd::CycleDetected
    } else {
        let mut end = PathEnd::BudgetExhausted;
        let mut v = m;
        seen.insert((v, 0usize));
        for step in 0..budget {
            let pos = step % letters.len();
            let letter = letters[letters.len() - 1 - pos];
            match apply_letter(w, letter, s, v) {
                None => {
                    end = PathEnd::Undefined { step };
                    break;
                }
                Some(next) => {
                    v = next;
                    values.push(v);
                    if !seen.insert((v, (step + 1) % letters.len())) {
                        end = PathEnd::CycleDetected;
                        break;
                    }
                }
            }
        }
        end
    };
    Path {
        word: w.to_string(),
        start: m,
        values,
        end,
    }
}

/// Critical points `(g_L X^i)⁻¹ w^{3(k+1)}[s](m)` for `k = 0, 1, …` while
/// defined, `i` the sign of the leftmost `X`-block.
pub fn critical_points(w: &Word, s: &PartialInjection, m: u64) -> Vec<u64> {
    let Some(sign) = w.leftmost_x_sign() else {
        return Vec::new();
    };
    let group = w.group();
    let x = if sign > 0 { Letter::X } else { Letter::XInv };
    let unwind = Word::normal_form(group, [Letter::Ground(w.g_left()), x]).inverse();
    let cube = w.pow(3);
    let mut out = Vec::new();
    let mut v = m;
    loop {
        match eval_word(&cube, s, v) {
            None => break,
            Some(next) => {
                if let Some(c) = eval_word(&unwind, s, next) {
                    out.push(c);
                }
                v = next;
                // an injective orbit either ends or returns to its start
                if v == m {
                    break;
                }
            }
        }
    }
    out
}
