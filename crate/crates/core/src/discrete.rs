//! Discrete sets in simple hypergraphs over decidable vertex domains.
//!
//! A set is discrete when no subset of it is a hyperedge. The catalog
//! instances are all 2-uniform: eventual difference and finite difference on
//! eventually periodic sequences, and almost disjointness modulo a tree
//! ideal on symbolic node sets.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::trees::{ideal_member, SetDesc, TreeDesc, TreeError};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum DiscreteError {
    #[error("cannot parse `{input}`: {reason}")]
    Parse { input: String, reason: String },
    #[error("vertex {vertex} is outside the domain of {instance}: {reason}")]
    Domain { vertex: String, instance: String, reason: String },
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// An eventually periodic sequence of naturals, `prefix` followed by
/// `cycle` repeated forever. Always stored in canonical form: the cycle is
/// primitive and the prefix is as short as possible.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Sequence {
    prefix: Vec<u64>,
    cycle: Vec<u64>,
}

impl Sequence {
    pub fn new(prefix: Vec<u64>, cycle: Vec<u64>) -> Result<Sequence, DiscreteError> {
        if cycle.is_empty() {
            return Err(DiscreteError::Parse {
                input: format!("{prefix:?}; []"),
                reason: "cycle must be nonempty".into(),
            });
        }
        let mut prefix = prefix;
        let mut cycle = primitive_root(cycle);
        // Absorb trailing prefix entries that already follow the cycle.
        while let Some(&last) = prefix.last() {
            if last != *cycle.last().unwrap() {
                break;
            }
            prefix.pop();
            cycle.rotate_right(1);
        }
        Ok(Sequence { prefix, cycle })
    }

    pub fn constant(v: u64) -> Sequence {
        Sequence { prefix: Vec::new(), cycle: vec![v] }
    }

    pub fn prefix(&self) -> &[u64] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[u64] {
        &self.cycle
    }

    pub fn at(&self, i: usize) -> u64 {
        match i.checked_sub(self.prefix.len()) {
            None => self.prefix[i],
            Some(j) => self.cycle[j % self.cycle.len()],
        }
    }

    /// Indices `[start, start + lcm)` on which both sequences are periodic;
    /// every later index repeats one of these.
    fn joint_window(&self, other: &Sequence) -> std::ops::Range<usize> {
        let start = self.prefix.len().max(other.prefix.len());
        start..start + self.cycle.len().lcm(&other.cycle.len())
    }

    /// Agree at infinitely many indices.
    pub fn meets_infinitely(&self, other: &Sequence) -> bool {
        self.joint_window(other).any(|i| self.at(i) == other.at(i))
    }

    /// Disagree at only finitely many indices.
    pub fn differs_finitely(&self, other: &Sequence) -> bool {
        self.joint_window(other).all(|i| self.at(i) == other.at(i))
    }
}

fn primitive_root(cycle: Vec<u64>) -> Vec<u64> {
    let n = cycle.len();
    (1..=n)
        .filter(|p| n.is_multiple_of(*p))
        .find(|&p| (p..n).all(|i| cycle[i] == cycle[i - p]))
        .map(|p| cycle[..p].to_vec())
        .unwrap_or(cycle)
}

fn list(xs: &[u64]) -> String {
    xs.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; {})", list(&self.prefix), list(&self.cycle))
    }
}

impl FromStr for Sequence {
    type Err = DiscreteError;

    fn from_str(s: &str) -> Result<Sequence, DiscreteError> {
        let err = |reason: &str| DiscreteError::Parse { input: s.to_string(), reason: reason.to_string() };
        let body = s
            .trim()
            .strip_prefix('(')
            .and_then(|b| b.strip_suffix(')'))
            .ok_or_else(|| err("expected `(prefix; cycle)`"))?;
        let (p, c) = body.split_once(';').ok_or_else(|| err("missing `;`"))?;
        let parse = |part: &str| -> Result<Vec<u64>, DiscreteError> {
            part.split(|ch: char| ch == ',' || ch.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<u64>().map_err(|_| err(&format!("`{t}` is not a natural number"))))
                .collect()
        };
        Sequence::new(parse(p)?, parse(c)?).map_err(|_| err("cycle must be nonempty"))
    }
}

impl TryFrom<String> for Sequence {
    type Error = DiscreteError;

    fn try_from(s: String) -> Result<Sequence, DiscreteError> {
        s.parse()
    }
}

impl From<Sequence> for String {
    fn from(s: Sequence) -> String {
        s.to_string()
    }
}

/// A simple hypergraph: no loops, every hyperedge is a finite set of at
/// least two distinct vertices.
pub trait Hypergraph {
    type Vertex: Clone + Eq;

    fn validate(&self, v: &Self::Vertex) -> Result<(), DiscreteError>;

    /// Largest hyperedge size worth checking.
    fn max_edge(&self) -> usize;

    /// Edge predicate on a list of pairwise distinct vertices.
    fn is_edge(&self, vs: &[&Self::Vertex]) -> bool;
}

fn distinct<V: Eq>(d: &[V]) -> Vec<&V> {
    let mut out: Vec<&V> = Vec::new();
    for v in d {
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

fn has_edge<G: Hypergraph>(g: &G, vs: &[&G::Vertex]) -> bool {
    fn go<G: Hypergraph>(g: &G, vs: &[&G::Vertex], from: usize, k: usize, pick: &mut Vec<usize>) -> bool {
        if pick.len() == k {
            let edge: Vec<&G::Vertex> = pick.iter().map(|&i| vs[i]).collect();
            return g.is_edge(&edge);
        }
        (from..vs.len()).any(|i| {
            pick.push(i);
            let hit = go(g, vs, i + 1, k, pick);
            pick.pop();
            hit
        })
    }
    (2..=g.max_edge().min(vs.len())).any(|k| go(g, vs, 0, k, &mut Vec::new()))
}

pub fn is_discrete<G: Hypergraph>(d: &[G::Vertex], g: &G) -> Result<bool, DiscreteError> {
    d.iter().try_for_each(|v| g.validate(v))?;
    Ok(!has_edge(g, &distinct(d)))
}

/// Whether adding `x` to `c` creates a hyperedge.
pub fn caught<G: Hypergraph>(x: &G::Vertex, c: &[G::Vertex], g: &G) -> Result<bool, DiscreteError> {
    g.validate(x)?;
    c.iter().try_for_each(|v| g.validate(v))?;
    let base = distinct(c);
    if base.contains(&x) {
        return Ok(false);
    }
    // Only hyperedges through x are new, so for 2-uniform graphs this is a
    // pairwise scan.
    if g.max_edge() == 2 {
        return Ok(base.iter().any(|v| g.is_edge(&[x, v])));
    }
    let mut with = base.clone();
    with.push(x);
    Ok(has_edge(g, &with))
}

/// Scan `pool` in order and keep every vertex that is independent from the
/// vertices kept so far.
pub fn greedy_maximal<G: Hypergraph>(pool: &[G::Vertex], g: &G) -> Result<Vec<G::Vertex>, DiscreteError> {
    pool.iter().try_for_each(|v| g.validate(v))?;
    let mut kept: Vec<G::Vertex> = Vec::new();
    for v in pool {
        if kept.contains(v) {
            continue;
        }
        if !caught(v, &kept, g)? {
            kept.push(v.clone());
        }
    }
    Ok(kept)
}

/// Catalog instances.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Instance {
    /// Eventually periodic natural sequences; an edge is a pair whose
    /// graphs meet infinitely often.
    EventuallyDifferent,
    /// Eventually periodic binary sequences; an edge is a pair that differs
    /// at only finitely many places.
    EZero,
    /// Node sets of a tree; an edge is a pair whose intersection is
    /// positive for the tree ideal.
    AlmostDisjoint(TreeDesc),
}

/// A vertex of some catalog instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Vertex {
    Seq(Sequence),
    Set(SetDesc),
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::Seq(s) => s.fmt(f),
            Vertex::Set(s) => s.fmt(f),
        }
    }
}

impl Instance {
    pub fn parse_vertex(&self, s: &str) -> Result<Vertex, DiscreteError> {
        let v = match self {
            Instance::AlmostDisjoint(_) => Vertex::Set(s.parse()?),
            _ => Vertex::Seq(s.parse()?),
        };
        self.validate(&v)?;
        Ok(v)
    }

    fn domain_error(&self, v: &Vertex, reason: &str) -> DiscreteError {
        DiscreteError::Domain { vertex: v.to_string(), instance: self.to_string(), reason: reason.to_string() }
    }
}

impl Hypergraph for Instance {
    type Vertex = Vertex;

    fn validate(&self, v: &Vertex) -> Result<(), DiscreteError> {
        match (self, v) {
            (Instance::EventuallyDifferent, Vertex::Seq(_)) => Ok(()),
            (Instance::EZero, Vertex::Seq(s)) => {
                if s.prefix.iter().chain(&s.cycle).all(|&b| b <= 1) {
                    Ok(())
                } else {
                    Err(self.domain_error(v, "entries must be 0 or 1"))
                }
            }
            (Instance::AlmostDisjoint(_), Vertex::Set(_)) => Ok(()),
            (Instance::AlmostDisjoint(_), _) => Err(self.domain_error(v, "expected a node set")),
            _ => Err(self.domain_error(v, "expected an eventually periodic sequence")),
        }
    }

    fn max_edge(&self) -> usize {
        2
    }

    fn is_edge(&self, vs: &[&Vertex]) -> bool {
        let [a, b] = vs else { return false };
        match (self, a, b) {
            (Instance::EventuallyDifferent, Vertex::Seq(x), Vertex::Seq(y)) => x.meets_infinitely(y),
            (Instance::EZero, Vertex::Seq(x), Vertex::Seq(y)) => x.differs_finitely(y),
            (Instance::AlmostDisjoint(t), Vertex::Set(x), Vertex::Set(y)) => !ideal_member(&x.intersect(y), t),
            _ => false,
        }
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instance::EventuallyDifferent => f.write_str("ed"),
            Instance::EZero => f.write_str("e0"),
            Instance::AlmostDisjoint(t) => write!(f, "ad:{t}"),
        }
    }
}

impl FromStr for Instance {
    type Err = DiscreteError;

    fn from_str(s: &str) -> Result<Instance, DiscreteError> {
        match s.trim() {
            "ed" => Ok(Instance::EventuallyDifferent),
            "e0" => Ok(Instance::EZero),
            other => match other.strip_prefix("ad:") {
                Some(t) => Ok(Instance::AlmostDisjoint(t.parse()?)),
                None => Err(DiscreteError::Parse {
                    input: s.to_string(),
                    reason: "expected `ed`, `e0` or `ad:<tree>`".into(),
                }),
            },
        }
    }
}

impl TryFrom<String> for Instance {
    type Error = DiscreteError;

    fn try_from(s: String) -> Result<Instance, DiscreteError> {
        s.parse()
    }
}

impl From<Instance> for String {
    fn from(i: Instance) -> String {
        i.to_string()
    }
}
