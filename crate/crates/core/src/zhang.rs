//! Forcing conditions `(s, F)`: a finite partial injection together with a
//! finite set of sealed words whose fixed-point sets are frozen by every
//! extension.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ground::GroundGroup;
use crate::injection::{eval_word, fix_set, FixSet, PartialInjection};
use crate::streams::Target;
use crate::words::{Word, WordError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ZhangError {
    #[error("word {word} has the proper conjugated subword {core} (conjugator {conjugator})")]
    RejectedWord {
        word: String,
        conjugator: String,
        core: String,
    },
    #[error("extension rejected: {0}")]
    Rejected(String),
    #[error("no admissible point in [{from}, {budget})")]
    BudgetExhausted { from: u64, budget: u64 },
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Injection(#[from] crate::injection::InjectionError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Condition {
    pub s: PartialInjection,
    pub words: BTreeSet<Word>,
}

/// Which extension order to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Order {
    /// Fixed-point sets of sealed words stay equal.
    Basic,
    /// New fixed points must be witnessed by a fixed point of a non-empty
    /// subword under the old injection.
    Subword,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    Domain,
    Range,
}

/// Why `q ≤ p` failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "kebab-case")]
pub enum OrderViolation {
    NotExtension { point: u64 },
    MissingWord { word: String },
    FixChanged { word: String, point: u64 },
    NoSubwordWitness { word: String, point: u64 },
}

fn check_word(w: &Word) -> Result<(), ZhangError> {
    match w.proper_conjugate_subword() {
        None => Ok(()),
        Some((conj, core)) => Err(ZhangError::RejectedWord {
            word: w.to_string(),
            conjugator: conj.to_string(),
            core: core.to_string(),
        }),
    }
}

/// True iff the pairs form an injection and no word has a proper conjugated
/// subword.
pub fn is_condition(pairs: &[(u64, u64)], words: &[Word]) -> bool {
    PartialInjection::from_pairs(pairs.iter().copied()).is_ok()
        && words.iter().all(|w| w.proper_conjugate_subword().is_none())
}

impl Condition {
    pub fn new(s: PartialInjection, words: impl IntoIterator<Item = Word>) -> Result<Self, ZhangError> {
        let words: BTreeSet<Word> = words.into_iter().collect();
        words.iter().try_for_each(check_word)?;
        Ok(Condition { s, words })
    }

    pub fn empty() -> Self {
        Condition {
            s: PartialInjection::new(),
            words: BTreeSet::new(),
        }
    }

    pub fn to_json(&self) -> ConditionJson {
        ConditionJson {
            s: self.s.clone(),
            words: self.words.iter().map(Word::to_string).collect(),
        }
    }

    pub fn from_json(json: &ConditionJson, group: GroundGroup) -> Result<Self, ZhangError> {
        let words = json
            .words
            .iter()
            .map(|w| Word::parse(group, w))
            .collect::<Result<Vec<_>, _>>()?;
        Condition::new(json.s.clone(), words)
    }
}

/// Wire form: `{"s": [[a,b],…], "F": ["X^1", …]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionJson {
    pub s: PartialInjection,
    #[serde(rename = "F")]
    pub words: Vec<String>,
}

/// Check `q ≤ p`, returning the first violation found.
pub fn check_leq(q: &Condition, p: &Condition, order: Order) -> Result<(), OrderViolation> {
    if let Some((a, _)) = p.s.pairs().find(|&(a, b)| q.s.get(a) != Some(b)) {
        return Err(OrderViolation::NotExtension { point: a });
    }
    if let Some(w) = p.words.iter().find(|w| !q.words.contains(*w)) {
        return Err(OrderViolation::MissingWord { word: w.to_string() });
    }
    for w in p.words.iter().filter(|w| !w.is_ground()) {
        let new_fix = fix_set(w, &q.s);
        match order {
            Order::Basic => {
                let old_fix = fix_set(w, &p.s);
                if new_fix != old_fix {
                    let (a, b) = (new_fix.finite(), old_fix.finite());
                    let point = *a.symmetric_difference(b).next().expect("sets differ");
                    return Err(OrderViolation::FixChanged { word: w.to_string(), point });
                }
            }
            Order::Subword => {
                for &m in new_fix.finite() {
                    if !has_subword_witness(w, &q.s, &p.s, m) {
                        return Err(OrderViolation::NoSubwordWitness { word: w.to_string(), point: m });
                    }
                }
            }
        }
    }
    Ok(())
}

pub fn leq(q: &Condition, p: &Condition, order: Order) -> bool {
    check_leq(q, p, order).is_ok()
}

/// Is there a split `w = w₁ w′ w₀`, `w′` non-empty, with the `(w, s_new)`
/// path value after `w₀` fixed by `w′[s_old]`?
fn has_subword_witness(w: &Word, s_new: &PartialInjection, s_old: &PartialInjection, m: u64) -> bool {
    let n = w.len();
    let mut v = Some(m);
    for k in 0..n {
        // v = w₀[s_new](m) where w₀ is the rightmost k letters
        let Some(point) = v else { return false };
        for len in 1..=n - k {
            let sub = w.slice(n - k - len, n - k);
            if eval_word(&sub, s_old, point) == Some(point) {
                return true;
            }
        }
        v = eval_word(&w.slice(n - k - 1, n - k), s_new, point);
    }
    false
}

/// Values `n′` must avoid so that adding `(n, n′)` keeps `s` injective and
/// freezes the fixed points of every word in `words`.
pub fn exclusion_set<'a>(
    s: &PartialInjection,
    words: impl IntoIterator<Item = &'a Word>,
    n: u64,
) -> BTreeSet<u64> {
    let mut out: BTreeSet<u64> = s.range().collect();
    for w in words {
        for sub in w.shift_subwords() {
            if !sub.is_empty() {
                if let FixSet::Finite(f) = fix_set(&sub, s) {
                    out.extend(f);
                }
            }
            out.extend(eval_word(&sub, s, n));
            out.extend(eval_word(&sub.inverse(), s, n));
        }
    }
    out
}

/// The exclusion set for extending in `direction`; the range case runs the
/// domain computation on `s⁻¹` with `X` and `X⁻¹` swapped in every word.
pub fn directed_exclusion_set(p: &Condition, n: u64, direction: Direction) -> BTreeSet<u64> {
    match direction {
        Direction::Domain => exclusion_set(&p.s, &p.words, n),
        Direction::Range => {
            let swapped: Vec<Word> = p.words.iter().map(Word::swap_x).collect();
            exclusion_set(&p.s.inverse(), &swapped, n)
        }
    }
}

fn pair(n: u64, image: u64, direction: Direction) -> (u64, u64) {
    match direction {
        Direction::Domain => (n, image),
        Direction::Range => (image, n),
    }
}

/// Least admissible partner for `n` accepted by `accept`, scanning below
/// `limit`.
pub fn domain_extend_filtered(
    p: &Condition,
    n: u64,
    direction: Direction,
    limit: u64,
    mut accept: impl FnMut(&Condition, u64) -> bool,
) -> Result<(Condition, u64), ZhangError> {
    let occupied = match direction {
        Direction::Domain => p.s.in_domain(n),
        Direction::Range => p.s.in_range(n),
    };
    if occupied {
        let side = match direction {
            Direction::Domain => "domain",
            Direction::Range => "range",
        };
        return Err(ZhangError::Rejected(format!("{n} already in the {side} of s")));
    }
    let excluded = directed_exclusion_set(p, n, direction);
    for candidate in (0..limit).filter(|c| !excluded.contains(c)) {
        let (a, b) = pair(n, candidate, direction);
        let q = Condition {
            s: p.s.with(a, b)?,
            words: p.words.clone(),
        };
        if accept(&q, candidate) {
            return Ok((q, candidate));
        }
    }
    Err(ZhangError::BudgetExhausted { from: 0, budget: limit })
}

/// Put `n` into the domain (or range) of `s`, pairing it with the least
/// natural outside the exclusion set.
pub fn domain_extend(p: &Condition, n: u64, direction: Direction) -> Result<(Condition, u64), ZhangError> {
    let limit = directed_exclusion_set(p, n, direction).len() as u64 + 1;
    domain_extend_filtered(p, n, direction, limit, |_, _| true)
}

/// Find the least `n ≥ from`, `n ∉ dom(s)`, below `budget` such that
/// `(n, τ(n))` can be added, and add it.
pub fn hit_target(p: &Condition, target: &Target, from: u64, budget: u64) -> Result<(Condition, u64), ZhangError> {
    hit_target_filtered(p, target, from, budget, |_| true)
}

pub fn hit_target_filtered(
    p: &Condition,
    target: &Target,
    from: u64,
    budget: u64,
    mut accept: impl FnMut(&Condition) -> bool,
) -> Result<(Condition, u64), ZhangError> {
    for n in (from..budget).filter(|&n| !p.s.in_domain(n)) {
        let image = target.apply(n);
        if exclusion_set(&p.s, &p.words, n).contains(&image) {
            continue;
        }
        let q = Condition {
            s: p.s.with(n, image)?,
            words: p.words.clone(),
        };
        if accept(&q) {
            return Ok((q, n));
        }
    }
    Err(ZhangError::BudgetExhausted { from, budget })
}

/// Add `w` to the sealed words.
pub fn seal_word(p: &Condition, w: &Word) -> Result<Condition, ZhangError> {
    check_word(w)?;
    let mut q = p.clone();
    q.words.insert(w.clone());
    Ok(q)
}
