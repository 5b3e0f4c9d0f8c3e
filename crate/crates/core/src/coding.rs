//! Parity coding of bit strings into word paths, coding conditions
//! `(s, F, m̄)` and the best-effort search that lengthens a coding.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ground::GroundGroup;
use crate::injection::{apply_letter, eval_word, PartialInjection};
use crate::streams::BitStream;
use crate::words::{Letter, Word};
use crate::zhang::{directed_exclusion_set, leq, Condition, ConditionJson, Direction, Order, ZhangError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CodingError {
    #[error("{word} is not a coding word: {reason}")]
    NotCodingWord { word: String, reason: String },
    #[error("no bit stream assigned to {0}")]
    NoTarget(String),
    #[error("stream for {word} has fewer than {needed} bits")]
    StreamTooShort { word: String, needed: usize },
    #[error("{word} does not exactly code any prefix of its stream at parameter {m}")]
    NotExact { word: String, m: u64 },
    #[error("search for a coding of {word} exhausted its budget of {budget} nodes")]
    SearchExhausted { word: String, budget: usize },
    #[error(transparent)]
    Zhang(#[from] ZhangError),
    #[error(transparent)]
    Word(#[from] crate::words::WordError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Plain,
    Exact,
}

/// What exact coding of the empty string means.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EmptyExact {
    /// The empty string is never coded exactly.
    #[default]
    Never,
    /// Exact iff the first application `X^i g_R` is undefined at `m`.
    FirstStepUndefined,
}

/// Which stages the exactness clause constrains.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExactReading {
    /// Only `k = |χ| − 1`.
    #[default]
    Minimal,
    /// Every `k ≥ |χ| − 1`.
    AllLater,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodingPolicy {
    #[serde(default)]
    pub empty_exact: EmptyExact,
    #[serde(default)]
    pub reading: ExactReading,
}

/// Why a word is outside 𝒢′, if it is.
pub fn gprime_violation(w: &Word) -> Option<String> {
    if !w.contains_x() {
        return Some("no occurrence of X".into());
    }
    if let Some((conj, core)) = w.proper_conjugate_subword() {
        return Some(format!("proper conjugated subword {core} (conjugator {conj})"));
    }
    if let Some((root, n)) = w.proper_power() {
        return Some(format!("proper power ({root})^{n}"));
    }
    None
}

pub fn in_gprime(w: &Word) -> bool {
    gprime_violation(w).is_none()
}

fn require_gprime(w: &Word) -> Result<(), CodingError> {
    match gprime_violation(w) {
        None => Ok(()),
        Some(reason) => Err(CodingError::NotCodingWord { word: w.to_string(), reason }),
    }
}

/// `X^i g_R` with `i` the sign of the rightmost `X`-block: the first two
/// applications of `w`.
fn first_step(w: &Word) -> Word {
    let x = match w.rightmost_x_sign() {
        Some(s) if s < 0 => Letter::XInv,
        _ => Letter::X,
    };
    Word::normal_form(w.group(), [x, Letter::Ground(w.g_right())])
}

impl CodingPolicy {
    pub fn codes(&self, w: &Word, s: &PartialInjection, chi: &[u8], m: u64, mode: Mode) -> bool {
        let cube = w.pow(3);
        let mut v = m;
        for (k, &bit) in chi.iter().enumerate() {
            if k > 0 {
                match eval_word(&cube, s, v) {
                    Some(next) => v = next,
                    None => return false,
                }
            }
            if v % 2 != u64::from(bit) {
                return false;
            }
        }
        if mode == Mode::Plain {
            return true;
        }
        let step = first_step(w);
        if chi.is_empty() {
            return match self.empty_exact {
                EmptyExact::Never => false,
                EmptyExact::FirstStepUndefined => eval_word(&step, s, m).is_none(),
            };
        }
        match self.reading {
            ExactReading::Minimal => eval_word(&step, s, v).is_none(),
            ExactReading::AllLater => {
                // once a stage is undefined every later one is too
                let start = v;
                loop {
                    if eval_word(&step, s, v).is_some() {
                        return false;
                    }
                    match eval_word(&cube, s, v) {
                        None => return true,
                        Some(next) if next == start => return false,
                        Some(next) => v = next,
                    }
                }
            }
        }
    }

    /// The unique `l` with `z↾l` coded exactly at `m`.
    pub fn exact_code_length(&self, w: &Word, s: &PartialInjection, m: u64, z: &BitStream) -> Option<usize> {
        let step = first_step(w);
        if self.empty_exact == EmptyExact::FirstStepUndefined && eval_word(&step, s, m).is_none() {
            return Some(0);
        }
        let cube = w.pow(3);
        let mut v = m;
        for k in 0.. {
            if v % 2 != u64::from(z.bit(k)?) {
                return None;
            }
            if eval_word(&step, s, v).is_none() {
                return Some(k + 1);
            }
            v = eval_word(&cube, s, v)?;
            if v == m {
                return None;
            }
        }
        unreachable!()
    }
}

/// `codes` under the default policy.
pub fn codes(w: &Word, s: &PartialInjection, chi: &[u8], m: u64, mode: Mode) -> bool {
    CodingPolicy::default().codes(w, s, chi, m, mode)
}

/// `exact_code_length` under the default policy.
pub fn exact_code_length(w: &Word, s: &PartialInjection, m: u64, z: &BitStream) -> Option<usize> {
    CodingPolicy::default().exact_code_length(w, s, m, z)
}

/// The assignment `z̄` of bit streams to coding words.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CodingTarget {
    streams: BTreeMap<Word, BitStream>,
}

impl CodingTarget {
    pub fn new(streams: impl IntoIterator<Item = (Word, BitStream)>) -> Result<Self, CodingError> {
        let streams: BTreeMap<Word, BitStream> = streams.into_iter().collect();
        streams.keys().try_for_each(require_gprime)?;
        Ok(CodingTarget { streams })
    }

    pub fn get(&self, w: &Word) -> Option<&BitStream> {
        self.streams.get(w)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &BitStream)> {
        self.streams.iter()
    }

    pub fn stream(&self, w: &Word) -> Result<&BitStream, CodingError> {
        self.get(w).ok_or_else(|| CodingError::NoTarget(w.to_string()))
    }

    /// Wire form: word string to stream name or bit string.
    pub fn to_json(&self) -> BTreeMap<String, String> {
        self.streams.iter().map(|(w, z)| (w.to_string(), z.to_string())).collect()
    }

    pub fn from_json(json: &BTreeMap<String, String>, group: GroundGroup) -> Result<Self, CodingError> {
        let mut out = Vec::new();
        for (w, z) in json {
            let z = z.parse().map_err(|e: crate::streams::StreamError| CodingError::NotCodingWord {
                word: w.clone(),
                reason: e.to_string(),
            })?;
            out.push((Word::parse(group, w)?, z));
        }
        CodingTarget::new(out)
    }
}

/// A condition `(s, F, m̄)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CodingCondition {
    pub base: Condition,
    pub params: BTreeMap<Word, u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodingConditionJson {
    #[serde(flatten)]
    pub base: ConditionJson,
    pub m: BTreeMap<String, u64>,
}

impl CodingCondition {
    pub fn new(base: Condition) -> Self {
        CodingCondition {
            base,
            params: BTreeMap::new(),
        }
    }

    /// Check condition (E), returning `l^p_w` for every coded word.
    pub fn lengths(&self, target: &CodingTarget, policy: &CodingPolicy) -> Result<BTreeMap<Word, usize>, CodingError> {
        let mut out = BTreeMap::new();
        for (w, &m) in &self.params {
            require_gprime(w)?;
            let z = target.stream(w)?;
            let l = policy
                .exact_code_length(w, &self.base.s, m, z)
                .ok_or_else(|| CodingError::NotExact { word: w.to_string(), m })?;
            out.insert(w.clone(), l);
        }
        Ok(out)
    }

    pub fn to_json(&self) -> CodingConditionJson {
        CodingConditionJson {
            base: self.base.to_json(),
            m: self.params.iter().map(|(w, &m)| (w.to_string(), m)).collect(),
        }
    }

    pub fn from_json(json: &CodingConditionJson, group: GroundGroup) -> Result<Self, CodingError> {
        let base = Condition::from_json(&json.base, group)?;
        let params = json
            .m
            .iter()
            .map(|(w, &m)| Ok((Word::parse(group, w)?, m)))
            .collect::<Result<_, CodingError>>()?;
        Ok(CodingCondition { base, params })
    }
}

/// `q ≤ p`: basic order on `(s, F)` and `m̄^p ⊆ m̄^q`.
pub fn coding_leq(q: &CodingCondition, p: &CodingCondition) -> bool {
    leq(&q.base, &p.base, Order::Basic) && p.params.iter().all(|(w, m)| q.params.get(w) == Some(m))
}

/// Search knobs for [`extend_coding`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchLimits {
    /// Maximum number of search nodes.
    pub budget: usize,
    /// Candidates tried per new link.
    pub branching: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            budget: 20_000,
            branching: 6,
        }
    }
}

struct Search<'a> {
    target: &'a CodingTarget,
    policy: &'a CodingPolicy,
    word: &'a Word,
    stream: &'a BitStream,
    m: u64,
    goal: usize,
    /// `w³` in application order (rightmost letter first).
    letters: Vec<Letter>,
    limits: SearchLimits,
    nodes: usize,
    /// Points where the paths of the other coded words stop.
    others: BTreeSet<u64>,
}

impl Search<'_> {
    /// Extend `p` so that `w` codes `goal` bits; `v` is the last coded value
    /// and `l` the number of bits coded so far.
    fn stage(&mut self, p: &CodingCondition, v: u64, l: usize) -> Option<CodingCondition> {
        if l == self.goal {
            return self.accept(p).then(|| p.clone());
        }
        self.walk(p, v, 0, l)
    }

    fn walk(&mut self, p: &CodingCondition, cur: u64, pos: usize, l: usize) -> Option<CodingCondition> {
        if pos == self.letters.len() {
            if cur % 2 != u64::from(self.stream.bit(l)?) {
                return None;
            }
            return self.stage(p, cur, l + 1);
        }
        let letter = self.letters[pos];
        if let Some(next) = apply_letter(self.word, letter, &p.base.s, cur) {
            return self.walk(p, next, pos + 1, l);
        }
        if self.others.contains(&cur) {
            return None;
        }
        let direction = if letter == Letter::X {
            Direction::Domain
        } else {
            Direction::Range
        };
        let excluded = directed_exclusion_set(&p.base, cur, direction);
        let s = &p.base.s;
        let others = &self.others;
        let candidates: Vec<u64> = (0u64..)
            .filter(|&c| {
                c != cur
                    && !excluded.contains(&c)
                    && !s.in_domain(c)
                    && !s.in_range(c)
                    && !others.contains(&c)
            })
            .take(self.limits.branching)
            .collect();
        for c in candidates {
            self.nodes += 1;
            if self.nodes > self.limits.budget {
                return None;
            }
            let (a, b) = match direction {
                Direction::Domain => (cur, c),
                Direction::Range => (c, cur),
            };
            let mut q = p.clone();
            q.base.s = s.with(a, b).ok()?;
            if let Some(found) = self.walk(&q, c, pos + 1, l) {
                return Some(found);
            }
        }
        None
    }

    fn accept(&self, q: &CodingCondition) -> bool {
        match q.lengths(self.target, self.policy) {
            Ok(lengths) => {
                lengths.get(self.word) == Some(&self.goal)
                    && !self.others.contains(&stuck_point(self.word, &q.base.s, self.m, self.goal))
            }
            Err(_) => false,
        }
    }
}

/// Extend `p` to some `q ≤ p` in which `w` is coded with `l^q_w ≥ l_target`.
pub fn extend_coding(
    p: &CodingCondition,
    target: &CodingTarget,
    w: &Word,
    l_target: usize,
    limits: SearchLimits,
    policy: &CodingPolicy,
) -> Result<CodingCondition, CodingError> {
    require_gprime(w)?;
    let stream = target.stream(w)?;
    let lengths = p.lengths(target, policy)?;
    if let Some(&l) = lengths.get(w) {
        if l >= l_target {
            return Ok(p.clone());
        }
    }
    let needed = l_target.max(1);
    if stream.prefix(needed).is_none() {
        return Err(CodingError::StreamTooShort {
            word: w.to_string(),
            needed,
        });
    }

    let others: BTreeSet<u64> = p
        .params
        .iter()
        .filter(|(u, _)| *u != w)
        .map(|(u, &m)| stuck_point(u, &p.base.s, m, lengths[u]))
        .collect();
    let mut start = p.clone();
    let (m, l, v) = match p.params.get(w) {
        Some(&m) => {
            let l = lengths[w];
            let v = (1..l).try_fold(m, |v, _| eval_word(&w.pow(3), &p.base.s, v));
            (m, l, v.expect("coded path is defined"))
        }
        None => {
            let m = choose_parameter(p, w, stream.bit(0).expect("checked above"), &others);
            start.params.insert(w.clone(), m);
            (m, 1, m)
        }
    };

    let letters: Vec<Letter> = w.pow(3).letters().iter().rev().copied().collect();
    let mut search = Search {
        target,
        policy,
        word: w,
        stream,
        m,
        goal: needed,
        letters,
        limits,
        nodes: 0,
        others,
    };
    let found = search.stage(&start, v, l).ok_or_else(|| CodingError::SearchExhausted {
        word: w.to_string(),
        budget: limits.budget,
    })?;
    debug_assert!(coding_leq(&found, p));
    debug_assert_eq!(found.params[w], search.m);
    Ok(found)
}

/// The point where the exactly coded path of `w` from `m` gets stuck: the
/// input of the undefined `X`-application after `l − 1` cubes. Keeping these
/// distinct across coded words stops one word's extension from continuing
/// another word's path.
fn stuck_point(w: &Word, s: &PartialInjection, m: u64, l: usize) -> u64 {
    let cube = w.pow(3);
    let v = (1..l.max(1)).fold(m, |v, _| eval_word(&cube, s, v).expect("coded path is defined"));
    w.group().apply(w.g_right(), v)
}

/// The stuck points of all coded words are pairwise distinct.
pub fn paths_separated(p: &CodingCondition, target: &CodingTarget, policy: &CodingPolicy) -> bool {
    let Ok(lengths) = p.lengths(target, policy) else {
        return false;
    };
    let mut seen = BTreeSet::new();
    p.params
        .iter()
        .all(|(w, &m)| seen.insert(stuck_point(w, &p.base.s, m, lengths[w])))
}

/// Least natural with the required parity outside `dom(s) ∪ ran(s)`, at
/// which the first step of `w` is undefined and which does not get stuck
/// where another coded word does.
fn choose_parameter(p: &CodingCondition, w: &Word, bit: u8, others: &BTreeSet<u64>) -> u64 {
    let s = &p.base.s;
    let step = first_step(w);
    let used: BTreeSet<u64> = p.params.values().copied().collect();
    (u64::from(bit)..)
        .step_by(2)
        .find(|&m| {
            !s.in_domain(m)
                && !s.in_range(m)
                && !used.contains(&m)
                && eval_word(&step, s, m).is_none()
                && !others.contains(&w.group().apply(w.g_right(), m))
        })
        .expect("finitely many points are excluded")
}

/// Witness count for one tuple and bit pattern.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternCount {
    /// Exponents `e` of the elements `g^e`.
    pub tuple: Vec<i64>,
    pub bits: Vec<u8>,
    pub witnesses: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityReport {
    pub group: GroundGroup,
    pub arity: usize,
    pub bound: u64,
    pub patterns: Vec<PatternCount>,
}

impl ParityReport {
    /// Patterns with no witness below the bound.
    pub fn failures(&self) -> impl Iterator<Item = &PatternCount> {
        self.patterns.iter().filter(|p| p.witnesses == 0)
    }

    pub fn all_witnessed(&self) -> bool {
        self.failures().next().is_none()
    }
}

/// For every tuple of `arity` distinct elements `g^e` (`|e| ≤ span`) and
/// every bit pattern, count `m < bound` with `g_j(m) ≡ i_j (mod 2)` for all `j`.
pub fn check_parity_hypothesis(group: GroundGroup, arity: usize, bound: u64, span: i64) -> ParityReport {
    let elements = group.elements(span);
    let mut patterns = Vec::new();
    for tuple in combinations(&elements, arity) {
        let mut counts = vec![0u64; 1 << arity];
        for m in 0..bound {
            let key = tuple
                .iter()
                .enumerate()
                .fold(0usize, |acc, (j, &e)| acc | (((group.apply(e, m) & 1) as usize) << j));
            counts[key] += 1;
        }
        for (key, &witnesses) in counts.iter().enumerate() {
            patterns.push(PatternCount {
                tuple: tuple.clone(),
                bits: (0..arity).map(|j| ((key >> j) & 1) as u8).collect(),
                witnesses,
            });
        }
    }
    ParityReport {
        group,
        arity,
        bound,
        patterns,
    }
}

fn combinations(items: &[i64], k: usize) -> Vec<Vec<i64>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &first) in items.iter().enumerate() {
        for mut rest in combinations(&items[i + 1..], k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const T: GroundGroup = GroundGroup::Trivial;
    const O2: GroundGroup = GroundGroup::OrderTwo;

    fn w(g: GroundGroup, s: &str) -> Word {
        Word::parse(g, s).unwrap()
    }

    fn inj(s: &str) -> PartialInjection {
        s.parse().unwrap()
    }

    #[test]
    fn gprime_examples() {
        assert!(in_gprime(&w(O2, "X")));
        assert!(!in_gprime(&w(O2, "XX")));
        assert!(!in_gprime(&w(O2, "g")));
        assert!(!in_gprime(&w(O2, "X^-1gX")));
        assert!(in_gprime(&w(O2, "gX")));
    }

    #[test]
    fn codes_examples() {
        let x = w(T, "X");
        assert!(codes(&x, &inj("0:5"), &[], 7, Mode::Plain));
        assert!(!codes(&x, &inj(""), &[1], 4, Mode::Plain));
        assert!(codes(&x, &inj("1:2,2:3,3:4"), &[1, 0], 1, Mode::Exact));
        // not exact at a shorter length: the path continues
        assert!(codes(&x, &inj("1:2,2:3,3:4"), &[1], 1, Mode::Plain));
        assert!(!codes(&x, &inj("1:2,2:3,3:4"), &[1], 1, Mode::Exact));
    }

    #[test]
    fn exact_length_examples() {
        let x = w(T, "X");
        let empty = inj("");
        assert_eq!(exact_code_length(&x, &empty, 1, &BitStream::Ones), Some(1));
        assert_eq!(exact_code_length(&x, &empty, 0, &BitStream::Ones), None);
        assert_eq!(exact_code_length(&x, &empty, 0, &BitStream::Zeros), Some(1));
        let first = CodingPolicy {
            empty_exact: EmptyExact::FirstStepUndefined,
            ..Default::default()
        };
        assert_eq!(first.exact_code_length(&x, &empty, 0, &BitStream::Ones), Some(0));
    }

    #[test]
    fn readings_agree() {
        let strict = CodingPolicy {
            reading: ExactReading::AllLater,
            ..Default::default()
        };
        let x = w(T, "X");
        let s = inj("1:2,2:3,3:4");
        for chi in [&[1u8][..], &[1, 0], &[1, 1]] {
            assert_eq!(
                strict.codes(&x, &s, chi, 1, Mode::Exact),
                codes(&x, &s, chi, 1, Mode::Exact)
            );
        }
    }

    fn target(pairs: &[(&str, &str)]) -> CodingTarget {
        CodingTarget::new(pairs.iter().map(|(a, b)| (w(T, a), b.parse().unwrap()))).unwrap()
    }

    #[test]
    fn extend_examples() {
        let x = w(T, "X");
        let z = target(&[("X", "10")]);
        let p = CodingCondition::new(Condition::new(inj(""), [x.clone()]).unwrap());
        let pol = CodingPolicy::default();
        let q = extend_coding(&p, &z, &x, 1, SearchLimits::default(), &pol).unwrap();
        assert!(q.base.s.is_empty());
        assert_eq!(q.params, BTreeMap::from([(x.clone(), 1)]));

        assert_eq!(extend_coding(&q, &z, &x, 0, SearchLimits::default(), &pol).unwrap(), q);

        let r = extend_coding(&q, &z, &x, 2, SearchLimits::default(), &pol).unwrap();
        assert_eq!(r.base.s.len(), 3);
        assert!(coding_leq(&r, &q));
        let a = r.base.s.get(1).unwrap();
        let b = r.base.s.get(a).unwrap();
        let c = r.base.s.get(b).unwrap();
        assert_eq!(c % 2, 0);
        assert!(codes(&x, &r.base.s, &[1, 0], 1, Mode::Exact));
        assert_eq!(r.lengths(&z, &pol).unwrap()[&x], 2);
    }

    #[test]
    fn extend_rejects_bad_words() {
        let z = target(&[("X", "1")]);
        let p = CodingCondition::new(Condition::empty());
        let pol = CodingPolicy::default();
        let xx = w(T, "XX");
        assert!(matches!(
            extend_coding(&p, &z, &xx, 1, SearchLimits::default(), &pol),
            Err(CodingError::NotCodingWord { .. })
        ));
        assert!(matches!(
            extend_coding(&p, &z, &w(T, "X^-1"), 1, SearchLimits::default(), &pol),
            Err(CodingError::NoTarget(_))
        ));
        assert!(matches!(
            extend_coding(&p, &z, &w(T, "X"), 2, SearchLimits::default(), &pol),
            Err(CodingError::StreamTooShort { .. })
        ));
    }

    #[test]
    fn coding_leq_examples() {
        let x = w(T, "X");
        let mut p = CodingCondition::new(Condition::new(inj(""), [x.clone()]).unwrap());
        p.params.insert(x.clone(), 1);
        assert!(coding_leq(&p, &p));
        let mut q = p.clone();
        q.base.s = inj("4:6");
        assert!(coding_leq(&q, &p));
        q.base.s = inj("4:4");
        assert!(!coding_leq(&q, &p));
        let shrunk = CodingCondition::new(p.base.clone());
        assert!(!coding_leq(&shrunk, &p));
    }

    #[test]
    fn several_words_coded_together() {
        let g = GroundGroup::PARITY_MIXING;
        let words: Vec<Word> = ["X", "gX", "X^-1g^2X^-1g"].iter().map(|s| w(g, s)).collect();
        let z = CodingTarget::new(words.iter().cloned().zip([
            BitStream::Champernowne,
            BitStream::Alternating,
            BitStream::Ones,
        ]))
        .unwrap();
        let pol = CodingPolicy::default();
        let mut p = CodingCondition::new(Condition::new(inj(""), words.clone()).unwrap());
        for round in 1..=6 {
            for word in &words {
                let q = extend_coding(&p, &z, word, round, SearchLimits::default(), &pol)
                    .unwrap_or_else(|e| panic!("round {round} {word}: {e} at {:?} {}", p.to_json(), p.base.s));
                assert!(coding_leq(&q, &p));
                p = q;
            }
        }
        let lengths = p.lengths(&z, &pol).unwrap();
        for word in &words {
            assert!(lengths[word] >= 6);
            let chi = z.get(word).unwrap().prefix(lengths[word]).unwrap();
            assert!(codes(word, &p.base.s, &chi, p.params[word], Mode::Exact));
        }
    }

    #[test]
    fn parity_examples() {
        let r = check_parity_hypothesis(T, 1, 100, 0);
        assert_eq!(r.patterns[0].witnesses, 50);
        let r = check_parity_hypothesis(O2, 2, 10_000, 1);
        let zero = r.patterns.iter().find(|p| p.bits == [0, 0]).unwrap();
        assert_eq!(zero.tuple, [0, 1]);
        assert_eq!(zero.witnesses, 0);
        let r = check_parity_hypothesis(GroundGroup::PARITY_MIXING, 2, 10_000, 2);
        assert!(r.all_witnessed());
    }

    #[test]
    fn json_round_trip() {
        let x = w(T, "X");
        let mut p = CodingCondition::new(Condition::new(inj("1:2"), [x.clone()]).unwrap());
        p.params.insert(x, 3);
        let text = serde_json::to_string(&p.to_json()).unwrap();
        assert_eq!(text, r#"{"s":[[1,2]],"F":["X^1"],"m":{"X^1":3}}"#);
        let back: CodingConditionJson = serde_json::from_str(&text).unwrap();
        assert_eq!(CodingCondition::from_json(&back, T).unwrap(), p);
    }
}
