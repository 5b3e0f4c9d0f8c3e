//! Symbolic sets of finite sequences.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::{number_list, Cursor, TreeError};

/// A set of finite sequences, described by its root bit and its verticals
/// `X(n) = {t : ⟨n⟩⌢t ∈ X}`. Values are kept in a canonical form, so two
/// descriptors are equal exactly when they denote the same set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum SetDesc {
    Empty,
    Full,
    Node {
        root: bool,
        exceptions: BTreeMap<u64, SetDesc>,
        tail: SetTail,
    },
}

/// Verticals outside the exceptions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SetTail {
    Empty,
    Full,
    /// Vertical `n` is `parts[n mod parts.len()]`.
    Periodic(Vec<SetDesc>),
}

impl SetTail {
    fn at(&self, n: u64) -> SetDesc {
        match self {
            SetTail::Empty => SetDesc::Empty,
            SetTail::Full => SetDesc::Full,
            SetTail::Periodic(parts) => parts[(n % parts.len() as u64) as usize].clone(),
        }
    }

    fn period(&self) -> u64 {
        match self {
            SetTail::Periodic(parts) => parts.len() as u64,
            _ => 1,
        }
    }

    /// Shortest period; constant `Empty`/`Full` collapse.
    fn normalized(self) -> SetTail {
        let SetTail::Periodic(parts) = self else {
            return self;
        };
        assert!(!parts.is_empty(), "periodic tail needs at least one part");
        let len = parts.len();
        let p = (1..=len)
            .find(|p| len % p == 0 && (0..len).all(|i| parts[i] == parts[i % p]))
            .expect("len is a period");
        let mut parts = parts;
        parts.truncate(p);
        match parts.as_slice() {
            [SetDesc::Empty] => SetTail::Empty,
            [SetDesc::Full] => SetTail::Full,
            _ => SetTail::Periodic(parts),
        }
    }
}

impl SetDesc {
    /// Canonicalizing constructor; the parts must already be canonical.
    pub fn node(root: bool, exceptions: BTreeMap<u64, SetDesc>, tail: SetTail) -> SetDesc {
        let tail = tail.normalized();
        let exceptions: BTreeMap<u64, SetDesc> = exceptions.into_iter().filter(|(n, v)| *v != tail.at(*n)).collect();
        match (root, exceptions.is_empty(), &tail) {
            (false, true, SetTail::Empty) => SetDesc::Empty,
            (true, true, SetTail::Full) => SetDesc::Full,
            _ => SetDesc::Node { root, exceptions, tail },
        }
    }

    /// `{⟨n⟩ : n ∈ points}`.
    pub fn finite(points: impl IntoIterator<Item = u64>) -> SetDesc {
        SetDesc::node(false, points.into_iter().map(|n| (n, SetDesc::Full)).collect(), SetTail::Empty)
    }

    /// Everything except the cones above `⟨n⟩`, `n ∈ points`.
    pub fn cofinite(points: impl IntoIterator<Item = u64>) -> SetDesc {
        SetDesc::node(true, points.into_iter().map(|n| (n, SetDesc::Empty)).collect(), SetTail::Full)
    }

    pub fn periodic(parts: Vec<SetDesc>) -> SetDesc {
        SetDesc::node(false, BTreeMap::new(), SetTail::Periodic(parts))
    }

    pub fn root(&self) -> bool {
        match self {
            SetDesc::Empty => false,
            SetDesc::Full => true,
            SetDesc::Node { root, .. } => *root,
        }
    }

    pub fn vertical(&self, n: u64) -> SetDesc {
        match self {
            SetDesc::Empty => SetDesc::Empty,
            SetDesc::Full => SetDesc::Full,
            SetDesc::Node { exceptions, tail, .. } => exceptions.get(&n).cloned().unwrap_or_else(|| tail.at(n)),
        }
    }

    fn tail_at(&self, n: u64) -> SetDesc {
        match self {
            SetDesc::Node { tail, .. } => tail.at(n),
            other => other.clone(),
        }
    }

    /// One past the largest exceptional vertical.
    pub fn exception_bound(&self) -> u64 {
        match self {
            SetDesc::Node { exceptions, .. } => exceptions.keys().next_back().map_or(0, |k| k + 1),
            _ => 0,
        }
    }

    pub fn period(&self) -> u64 {
        match self {
            SetDesc::Node { tail, .. } => tail.period(),
            _ => 1,
        }
    }

    /// Nesting depth of `Node`s.
    pub fn depth(&self) -> u64 {
        match self {
            SetDesc::Node { exceptions, tail, .. } => {
                let tail_depth = match tail {
                    SetTail::Periodic(parts) => parts.iter().map(SetDesc::depth).max().unwrap_or(0),
                    _ => 0,
                };
                1 + exceptions.values().map(SetDesc::depth).fold(tail_depth, u64::max)
            }
            _ => 0,
        }
    }

    /// Descriptor size: atoms and constant tails count 1, a node counts 1
    /// plus its parts.
    pub fn size(&self) -> usize {
        match self {
            SetDesc::Node { exceptions, tail, .. } => {
                let tail_size = match tail {
                    SetTail::Periodic(parts) => parts.iter().map(SetDesc::size).sum(),
                    _ => 1,
                };
                1 + exceptions.values().map(SetDesc::size).sum::<usize>() + tail_size
            }
            _ => 1,
        }
    }

    /// Pointwise combination; `op` must map canonical sets to canonical sets.
    fn zip(&self, other: &SetDesc, root: impl Fn(bool, bool) -> bool, op: &impl Fn(&SetDesc, &SetDesc) -> SetDesc) -> SetDesc {
        let keys: BTreeSet<u64> = [self, other]
            .into_iter()
            .filter_map(|s| match s {
                SetDesc::Node { exceptions, .. } => Some(exceptions.keys().copied()),
                _ => None,
            })
            .flatten()
            .collect();
        let exceptions = keys
            .into_iter()
            .map(|n| (n, op(&self.vertical(n), &other.vertical(n))))
            .collect();
        let period = self.period().lcm(&other.period());
        let parts = (0..period).map(|i| op(&self.tail_at(i), &other.tail_at(i))).collect();
        SetDesc::node(root(self.root(), other.root()), exceptions, SetTail::Periodic(parts))
    }

    pub fn union(&self, other: &SetDesc) -> SetDesc {
        match (self, other) {
            (SetDesc::Empty, x) | (x, SetDesc::Empty) => x.clone(),
            (SetDesc::Full, _) | (_, SetDesc::Full) => SetDesc::Full,
            _ => self.zip(other, |a, b| a || b, &|a, b| a.union(b)),
        }
    }

    pub fn intersect(&self, other: &SetDesc) -> SetDesc {
        match (self, other) {
            (SetDesc::Full, x) | (x, SetDesc::Full) => x.clone(),
            (SetDesc::Empty, _) | (_, SetDesc::Empty) => SetDesc::Empty,
            _ => self.zip(other, |a, b| a && b, &|a, b| a.intersect(b)),
        }
    }

    pub fn complement(&self) -> SetDesc {
        match self {
            SetDesc::Empty => SetDesc::Full,
            SetDesc::Full => SetDesc::Empty,
            SetDesc::Node { root, exceptions, tail } => {
                let tail = match tail {
                    SetTail::Empty => SetTail::Full,
                    SetTail::Full => SetTail::Empty,
                    SetTail::Periodic(parts) => SetTail::Periodic(parts.iter().map(SetDesc::complement).collect()),
                };
                SetDesc::node(!root, exceptions.iter().map(|(n, s)| (*n, s.complement())).collect(), tail)
            }
        }
    }

    pub fn difference(&self, other: &SetDesc) -> SetDesc {
        self.intersect(&other.complement())
    }

    pub fn symmetric_difference(&self, other: &SetDesc) -> SetDesc {
        self.difference(other).union(&other.difference(self))
    }

    /// Does the sequence `path` belong to the set?
    pub fn contains(&self, path: &[u64]) -> bool {
        match path.split_first() {
            None => self.root(),
            Some((&n, rest)) => self.vertical(n).contains(rest),
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetDesc::Empty => f.write_str("empty"),
            SetDesc::Full => f.write_str("full"),
            SetDesc::Node { root, exceptions, tail } => {
                let keys = || exceptions.keys().map(u64::to_string).collect::<Vec<_>>().join(",");
                if !root && *tail == SetTail::Empty && exceptions.values().all(|s| *s == SetDesc::Full) {
                    return write!(f, "finite[{}]", keys());
                }
                if *root && *tail == SetTail::Full && exceptions.values().all(|s| *s == SetDesc::Empty) {
                    return write!(f, "cofinite[{}]", keys());
                }
                write!(f, "set{{root:{}", u8::from(*root))?;
                for (n, s) in exceptions {
                    write!(f, "; {n}: {s}")?;
                }
                match tail {
                    SetTail::Empty => f.write_str("; tail: empty}"),
                    SetTail::Full => f.write_str("; tail: full}"),
                    SetTail::Periodic(parts) => {
                        f.write_str("; tail: periodic(")?;
                        for (i, p) in parts.iter().enumerate() {
                            if i > 0 {
                                f.write_str(", ")?;
                            }
                            write!(f, "{p}")?;
                        }
                        f.write_str(")}")
                    }
                }
            }
        }
    }

    pub(crate) fn parse_from(c: &mut Cursor<'_>) -> Result<SetDesc, TreeError> {
        if c.eat("empty") {
            return Ok(SetDesc::Empty);
        }
        if c.eat("full") {
            return Ok(SetDesc::Full);
        }
        if c.eat("finite[") {
            return Ok(SetDesc::finite(number_list(c, "]")?));
        }
        if c.eat("cofinite[") {
            return Ok(SetDesc::cofinite(number_list(c, "]")?));
        }
        c.expect("set{")?;
        Self::parse_body(c, "}")
    }

    fn parse_body(c: &mut Cursor<'_>, close: &str) -> Result<SetDesc, TreeError> {
        let mut root = false;
        let mut exceptions = BTreeMap::new();
        let mut tail = SetTail::Empty;
        loop {
            if close.is_empty() {
                c.skip_ws();
                if c.finish().is_ok() {
                    break;
                }
            } else if c.eat(close) {
                break;
            }
            if c.eat("root") {
                c.expect(":")?;
                root = match c.number()? {
                    0 => false,
                    1 => true,
                    _ => return Err(c.error("root bit must be 0 or 1")),
                };
            } else if c.eat("tail") {
                c.expect(":")?;
                tail = if c.eat("empty") {
                    SetTail::Empty
                } else if c.eat("full") {
                    SetTail::Full
                } else if c.eat("periodic(") {
                    let mut parts = vec![SetDesc::parse_from(c)?];
                    while c.eat(",") {
                        parts.push(SetDesc::parse_from(c)?);
                    }
                    c.expect(")")?;
                    SetTail::Periodic(parts)
                } else {
                    return Err(c.error("expected empty, full or periodic(…)"));
                };
            } else if c.peek_digit() {
                let n = c.number()?;
                c.expect(":")?;
                exceptions.insert(n, SetDesc::parse_from(c)?);
            } else {
                return Err(c.error("expected root:, tail: or an index"));
            }
            if !c.eat(";") {
                if close.is_empty() {
                    c.finish()?;
                } else {
                    c.expect(close)?;
                }
                break;
            }
        }
        Ok(SetDesc::node(root, exceptions, tail))
    }
}

impl fmt::Display for SetDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f)
    }
}

impl FromStr for SetDesc {
    type Err = TreeError;

    /// Also accepts a bare node body such as `root:1; tail: full`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut c = Cursor::new(s);
        let keyword = ["empty", "full", "finite[", "cofinite[", "set{"]
            .iter()
            .any(|k| s.trim_start().starts_with(k));
        let out = if keyword {
            SetDesc::parse_from(&mut c)?
        } else {
            SetDesc::parse_body(&mut c, "")?
        };
        c.finish()?;
        Ok(out)
    }
}

impl From<SetDesc> for String {
    fn from(s: SetDesc) -> String {
        s.to_string()
    }
}

impl TryFrom<String> for SetDesc {
    type Error = TreeError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

/// Every distinct set with a descriptor of size at most `max_size` whose
/// exceptional verticals are drawn from `keys`.
pub fn enumerate_sets(max_size: usize, keys: &[u64]) -> Vec<SetDesc> {
    // raw[s]: canonical sets having some descriptor of size exactly s
    let mut raw: Vec<Vec<SetDesc>> = vec![Vec::new(); max_size + 1];
    if max_size >= 1 {
        raw[1] = vec![SetDesc::Empty, SetDesc::Full];
    }
    for size in 2..=max_size {
        let mut found = BTreeSet::new();
        let budget = size - 1;
        for (exceptions, used) in exception_choices(keys, budget, &raw) {
            let left = budget - used;
            let mut tails = Vec::new();
            if left == 1 {
                tails.push(SetTail::Empty);
                tails.push(SetTail::Full);
            }
            tails.extend(sequences(left, &raw).into_iter().map(SetTail::Periodic));
            for tail in tails {
                for root in [false, true] {
                    found.insert(SetDesc::node(root, exceptions.clone(), tail.clone()));
                }
            }
        }
        raw[size] = found.into_iter().collect();
    }
    let all: BTreeSet<SetDesc> = raw.into_iter().flatten().collect();
    all.into_iter().collect()
}

fn exception_choices(keys: &[u64], budget: usize, raw: &[Vec<SetDesc>]) -> Vec<(BTreeMap<u64, SetDesc>, usize)> {
    let Some((&key, rest)) = keys.split_first() else {
        return vec![(BTreeMap::new(), 0)];
    };
    let mut out = Vec::new();
    for (map, used) in exception_choices(rest, budget, raw) {
        out.push((map.clone(), used));
        let room = budget.saturating_sub(used + 1);
        for (size, sets) in raw.iter().enumerate().take(room + 1).skip(1) {
            for s in sets {
                let mut m = map.clone();
                m.insert(key, s.clone());
                out.push((m, used + size));
            }
        }
    }
    out
}

/// Non-empty sequences of sets whose sizes sum to `total`.
fn sequences(total: usize, raw: &[Vec<SetDesc>]) -> Vec<Vec<SetDesc>> {
    let mut out = Vec::new();
    for first in 1..=total {
        for s in &raw[first] {
            if first == total {
                out.push(vec![s.clone()]);
            } else {
                for mut rest in sequences(total - first, raw) {
                    rest.insert(0, s.clone());
                    out.push(rest);
                }
            }
        }
    }
    out
}
