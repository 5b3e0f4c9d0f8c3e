//! Catalog tree descriptors.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Cursor, Ordinal, TreeError};

/// A tree whose root has either no children (`Point`) or a child for every
/// natural (`Branch`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum TreeDesc {
    Point,
    Branch {
        exceptions: BTreeMap<u64, TreeDesc>,
        tail: Tail,
    },
}

/// Subtree below child `n` when `n` is not an exception.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tail {
    Const(Box<TreeDesc>),
    /// `n ↦ fin_power(n + offset)`, `offset ≥ 1`.
    Ramp(u64),
}

/// All sequences of length at most `h`.
pub fn fin_power(h: u64) -> TreeDesc {
    (0..h).fold(TreeDesc::Point, |t, _| TreeDesc::constant(t))
}

/// The catalog tree for `Fin^α`, `1 ≤ α < ω·2`.
pub fn fin_alpha(alpha: &Ordinal) -> Result<TreeDesc, TreeError> {
    let out_of_catalog = || TreeError::OutOfCatalog(alpha.to_string());
    let (omegas, finite) = match alpha.terms() {
        [(0, n)] => (0, *n),
        [(1, 1)] => (1, 0),
        [(1, 1), (0, n)] => (1, *n),
        _ => return Err(out_of_catalog()),
    };
    if omegas == 0 {
        return Ok(fin_power(finite));
    }
    let base = TreeDesc::Branch {
        exceptions: BTreeMap::new(),
        tail: Tail::Ramp(1),
    };
    Ok((0..finite).fold(base, |t, _| TreeDesc::constant(t)))
}

impl TreeDesc {
    /// The rank-1 tree: a root with infinitely many terminal children.
    pub fn leaf() -> TreeDesc {
        fin_power(1)
    }

    /// Every child carries the same subtree.
    pub fn constant(child: TreeDesc) -> TreeDesc {
        TreeDesc::Branch {
            exceptions: BTreeMap::new(),
            tail: Tail::Const(Box::new(child)),
        }
    }

    pub fn ramp(offset: u64) -> Result<TreeDesc, TreeError> {
        if offset == 0 {
            return Err(TreeError::OutOfCatalog("ramp offset must be at least 1".into()));
        }
        Ok(TreeDesc::Branch {
            exceptions: BTreeMap::new(),
            tail: Tail::Ramp(offset),
        })
    }

    pub fn is_point(&self) -> bool {
        matches!(self, TreeDesc::Point)
    }

    /// Subtree at child `n`; `None` for a point.
    pub fn child(&self, n: u64) -> Option<TreeDesc> {
        match self {
            TreeDesc::Point => None,
            TreeDesc::Branch { exceptions, tail } => Some(match exceptions.get(&n) {
                Some(t) => t.clone(),
                None => match tail {
                    Tail::Const(t) => (**t).clone(),
                    Tail::Ramp(offset) => fin_power(n + offset),
                },
            }),
        }
    }

    /// One past the largest exceptional child index.
    pub fn exception_bound(&self) -> u64 {
        match self {
            TreeDesc::Point => 0,
            TreeDesc::Branch { exceptions, .. } => exceptions.keys().next_back().map_or(0, |k| k + 1),
        }
    }

    pub fn has_ramp_tail(&self) -> bool {
        matches!(self, TreeDesc::Branch { tail: Tail::Ramp(_), .. })
    }

    /// Rank: 0 for a point, otherwise the supremum of `rank(child) + 1`.
    pub fn rank(&self) -> Ordinal {
        match self {
            TreeDesc::Point => Ordinal::zero(),
            TreeDesc::Branch { exceptions, tail } => {
                let tail_rank = match tail {
                    Tail::Const(t) => t.rank().succ(),
                    Tail::Ramp(_) => Ordinal::omega(),
                };
                exceptions.values().map(|t| t.rank().succ()).fold(tail_rank, Ord::max)
            }
        }
    }

    /// Is every node of `self` a node of `other`?
    pub fn is_subtree_of(&self, other: &TreeDesc) -> bool {
        match (self, other) {
            (TreeDesc::Point, _) => true,
            (TreeDesc::Branch { .. }, TreeDesc::Point) => false,
            (TreeDesc::Branch { tail: ts, .. }, TreeDesc::Branch { tail: tt, .. }) => {
                let start = self.exception_bound().max(other.exception_bound());
                let head = (0..start).all(|n| {
                    self.child(n).expect("branch").is_subtree_of(&other.child(n).expect("branch"))
                });
                head && match (ts, tt) {
                    (Tail::Const(a), Tail::Const(b)) => a.is_subtree_of(b),
                    // finite-rank catalog trees of rank r are exactly contained in fin_power(h), h ≥ r
                    (Tail::Const(a), Tail::Ramp(o)) => a.rank().as_nat().is_some_and(|r| r <= start + o),
                    (Tail::Ramp(a), Tail::Ramp(b)) => a <= b,
                    // a fixed well-founded tree cannot contain fin_power(h) for every h
                    (Tail::Ramp(_), Tail::Const(_)) => false,
                }
            }
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self == TreeDesc::leaf() {
            return f.write_str("leaf");
        }
        match self {
            TreeDesc::Point => f.write_str("point"),
            TreeDesc::Branch { exceptions, tail } => {
                f.write_str("branch{")?;
                for (n, t) in exceptions {
                    write!(f, "{n}: {t}; ")?;
                }
                match tail {
                    Tail::Const(t) => write!(f, "tail: const({t})}}"),
                    Tail::Ramp(o) => write!(f, "tail: ramp({o})}}"),
                }
            }
        }
    }

    pub(crate) fn parse_from(c: &mut Cursor<'_>) -> Result<TreeDesc, TreeError> {
        if c.eat("point") {
            return Ok(TreeDesc::Point);
        }
        if c.eat("leaf") {
            return Ok(TreeDesc::leaf());
        }
        if c.eat("fin^") {
            let paren = c.eat("(");
            let text = c.take_while(|ch| ch.is_ascii_alphanumeric() || "^*+ω".contains(ch));
            let alpha: Ordinal = text.parse()?;
            if paren {
                c.expect(")")?;
            }
            return fin_alpha(&alpha);
        }
        c.expect("branch{")?;
        let mut exceptions = BTreeMap::new();
        let mut tail = None;
        loop {
            if c.eat("}") {
                break;
            }
            if c.eat("tail") {
                c.expect(":")?;
                tail = Some(if c.eat("const(") {
                    let t = TreeDesc::parse_from(c)?;
                    c.expect(")")?;
                    Tail::Const(Box::new(t))
                } else if c.eat("ramp(") {
                    let o = c.number()?;
                    c.expect(")")?;
                    if o == 0 {
                        return Err(c.error("ramp offset must be at least 1"));
                    }
                    Tail::Ramp(o)
                } else {
                    return Err(c.error("expected const(…) or ramp(…)"));
                });
            } else {
                let n = c.number()?;
                c.expect(":")?;
                exceptions.insert(n, TreeDesc::parse_from(c)?);
            }
            if !c.eat(";") {
                c.expect("}")?;
                break;
            }
        }
        let tail = tail.ok_or_else(|| c.error("branch needs a tail"))?;
        Ok(TreeDesc::Branch { exceptions, tail }.normalized())
    }

    /// Drop exceptions that agree with the tail.
    fn normalized(self) -> TreeDesc {
        match self {
            TreeDesc::Point => TreeDesc::Point,
            TreeDesc::Branch { exceptions, tail } => {
                let probe = TreeDesc::Branch {
                    exceptions: BTreeMap::new(),
                    tail: tail.clone(),
                };
                let exceptions = exceptions
                    .into_iter()
                    .filter(|(n, t)| probe.child(*n).as_ref() != Some(t))
                    .collect();
                TreeDesc::Branch { exceptions, tail }
            }
        }
    }
}

impl fmt::Display for TreeDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f)
    }
}

impl FromStr for TreeDesc {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut c = Cursor::new(s);
        let t = TreeDesc::parse_from(&mut c)?;
        c.finish()?;
        Ok(t)
    }
}

impl From<TreeDesc> for String {
    fn from(t: TreeDesc) -> String {
        t.to_string()
    }
}

impl TryFrom<String> for TreeDesc {
    type Error = TreeError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}
