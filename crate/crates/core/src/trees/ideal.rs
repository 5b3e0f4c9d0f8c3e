//! Ideal membership, embeddings and the `A*`/`A_*` transfer maps.
//!
//! Every symbolic operation here reduces to finitely many verticals: the
//! exceptional ones, plus one period of the tail taken far enough out that
//! ramp children (whose height grows with `n`) no longer change the answer.

use std::collections::BTreeMap;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::{SetDesc, SetTail, Tail, TreeDesc, TreeError};

/// First child index from which everything involved is periodic with
/// period `period`, and a ramp child of height `n + offset` is taller than
/// every set descriptor involved.
#[derive(Debug, Clone, Copy)]
struct Horizon {
    start: u64,
    period: u64,
}

impl Horizon {
    fn new(sets: &[&SetDesc], trees: &[&TreeDesc]) -> Horizon {
        let mut start = sets
            .iter()
            .map(|s| s.exception_bound())
            .chain(trees.iter().map(|t| t.exception_bound()))
            .max()
            .unwrap_or(0);
        if trees.iter().any(|t| t.has_ramp_tail()) {
            let depth = sets.iter().map(|s| s.depth()).max().unwrap_or(0);
            start = start.max(depth + 2);
        }
        let period = sets.iter().fold(1u64, |p, s| p.lcm(&s.period()));
        Horizon { start, period }
    }

    fn shifted(self, by: u64) -> Horizon {
        Horizon {
            start: self.start + by,
            period: self.period,
        }
    }

    /// Representative child indices.
    fn window(self) -> std::ops::Range<u64> {
        0..self.start + self.period
    }
}

fn child(t: &TreeDesc, n: u64) -> TreeDesc {
    t.child(n).expect("child of a branch")
}

/// Build a node from its verticals: `f(n)` for `n < start` become
/// exceptions, one period beyond `start` becomes the tail. A second period
/// is computed to confirm the tail really repeats.
fn tabulate(
    op: &'static str,
    root: bool,
    horizon: Horizon,
    mut f: impl FnMut(u64) -> Result<SetDesc, TreeError>,
) -> Result<SetDesc, TreeError> {
    let Horizon { start, period } = horizon;
    let exceptions = (0..start).map(|n| Ok((n, f(n)?))).collect::<Result<BTreeMap<_, _>, TreeError>>()?;
    let mut parts = vec![SetDesc::Empty; period as usize];
    for n in start..start + period {
        parts[(n % period) as usize] = f(n)?;
    }
    for n in start + period..start + 2 * period {
        if f(n)? != parts[(n % period) as usize] {
            return Err(TreeError::NotRepresentable {
                op,
                hint: format!("vertical {n} does not repeat with period {period}; the ramp heights reach into the result"),
            });
        }
    }
    Ok(SetDesc::node(root, exceptions, SetTail::Periodic(parts)))
}

/// Is `x ∩ t` in `I(t)`? Over a point, the ideal is `{∅}`; over a branch,
/// only finitely many verticals may be positive, so only the tail matters.
pub fn ideal_member(x: &SetDesc, t: &TreeDesc) -> bool {
    match (x, t) {
        (SetDesc::Empty, _) => true,
        (SetDesc::Full, _) => false,
        (_, TreeDesc::Point) => !x.root(),
        (SetDesc::Node { .. }, TreeDesc::Branch { .. }) => {
            let h = Horizon::new(&[x], &[t]);
            (h.start..h.start + h.period).all(|n| ideal_member(&x.vertical(n), &child(t, n)))
        }
    }
}

/// Does `x` contain a node of `t`?
pub fn nonempty_in(x: &SetDesc, t: &TreeDesc) -> bool {
    match (x, t) {
        (SetDesc::Empty, _) => false,
        (SetDesc::Full, _) => true,
        (_, _) if x.root() => true,
        (_, TreeDesc::Point) => false,
        _ => Horizon::new(&[x], &[t]).window().any(|n| nonempty_in(&x.vertical(n), &child(t, n))),
    }
}

/// `x ∩ t = y ∩ t`.
pub fn equal_on(x: &SetDesc, y: &SetDesc, t: &TreeDesc) -> bool {
    !nonempty_in(&x.symmetric_difference(y), t)
}

/// Every member is `I(t)`-positive and any two meet in an `I(t)` set.
pub fn is_ad_family(family: &[SetDesc], t: &TreeDesc) -> bool {
    family.iter().all(|a| !ideal_member(a, t))
        && family
            .iter()
            .enumerate()
            .all(|(i, a)| family[i + 1..].iter().all(|b| ideal_member(&a.intersect(b), t)))
}

/// A level-preserving injection of one catalog tree into another.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TreeEmbedding {
    /// Every node maps to itself (the source is a subtree of the target).
    Identity,
    /// Child `n < start` goes to `head[n].0` with embedding `head[n].1`;
    /// child `n ≥ start` goes to `n + shift` with embedding `tail`.
    Map {
        head: BTreeMap<u64, (u64, TreeEmbedding)>,
        start: u64,
        shift: u64,
        tail: Box<TreeEmbedding>,
    },
}

impl TreeEmbedding {
    /// Image of the child index `n` and the embedding below it.
    fn step(&self, n: u64) -> (u64, &TreeEmbedding) {
        match self {
            TreeEmbedding::Identity => (n, self),
            TreeEmbedding::Map { head, start, shift, tail } => {
                if n < *start {
                    let (j, e) = &head[&n];
                    (*j, e)
                } else {
                    (n + shift, tail)
                }
            }
        }
    }

    /// Preimage of the target child index `m`, if any.
    fn preimage(&self, m: u64) -> Option<(u64, &TreeEmbedding)> {
        match self {
            TreeEmbedding::Identity => Some((m, self)),
            TreeEmbedding::Map { head, start, shift, tail } => {
                if m >= start + shift {
                    Some((m - shift, tail))
                } else {
                    head.iter().find(|(_, (j, _))| *j == m).map(|(n, (_, e))| (*n, e))
                }
            }
        }
    }

    /// Image of a node (as a sequence of child indices).
    pub fn apply(&self, path: &[u64]) -> Vec<u64> {
        let mut e = self;
        let mut out = Vec::with_capacity(path.len());
        for &n in path {
            let (j, next) = e.step(n);
            out.push(j);
            e = next;
        }
        out
    }

    fn bound(&self) -> u64 {
        match self {
            TreeEmbedding::Identity => 0,
            TreeEmbedding::Map { start, shift, .. } => start + shift,
        }
    }
}

const MAX_SHIFT: u64 = 16;

/// Find an embedding of `s` into `t`: the identity when `s ⊆ t`, otherwise a
/// recursive child matching with an eventually constant shift. `None` when
/// `rank(s) > rank(t)` or no matching of this shape exists.
pub fn embeds(s: &TreeDesc, t: &TreeDesc) -> Option<TreeEmbedding> {
    if s.rank() > t.rank() {
        return None;
    }
    if s.is_subtree_of(t) {
        return Some(TreeEmbedding::Identity);
    }
    let (TreeDesc::Branch { tail: ts, .. }, TreeDesc::Branch { tail: tt, .. }) = (s, t) else {
        return None;
    };
    for shift in 0..=MAX_SHIFT {
        let mut start = s.exception_bound().max(t.exception_bound().saturating_sub(shift));
        let tail = match (ts, tt) {
            (Tail::Const(a), Tail::Const(b)) => match embeds(a, b) {
                Some(e) => e,
                None => continue,
            },
            (Tail::Const(a), Tail::Ramp(o)) => match a.rank().as_nat() {
                Some(r) => {
                    start = start.max(r.saturating_sub(shift + o));
                    TreeEmbedding::Identity
                }
                None => continue,
            },
            (Tail::Ramp(a), Tail::Ramp(b)) if *a <= shift + b => TreeEmbedding::Identity,
            _ => continue,
        };
        if let Some(head) = match_head(s, t, start, start + shift) {
            return Some(TreeEmbedding::Map {
                head,
                start,
                shift,
                tail: Box::new(tail),
            });
        }
    }
    None
}

/// Injectively match children `0..start` of `s` into children `0..slots`
/// of `t` (augmenting paths).
fn match_head(s: &TreeDesc, t: &TreeDesc, start: u64, slots: u64) -> Option<BTreeMap<u64, (u64, TreeEmbedding)>> {
    let options: Vec<Vec<(u64, TreeEmbedding)>> = (0..start)
        .map(|n| {
            let sn = child(s, n);
            (0..slots).filter_map(|j| embeds(&sn, &child(t, j)).map(|e| (j, e))).collect()
        })
        .collect();
    let mut owner: BTreeMap<u64, usize> = BTreeMap::new();
    fn augment(
        i: usize,
        options: &[Vec<(u64, TreeEmbedding)>],
        owner: &mut BTreeMap<u64, usize>,
        seen: &mut Vec<u64>,
    ) -> bool {
        for (j, _) in &options[i] {
            if seen.contains(j) {
                continue;
            }
            seen.push(*j);
            let free = match owner.get(j) {
                None => true,
                Some(&k) => augment(k, options, owner, seen),
            };
            if free {
                owner.insert(*j, i);
                return true;
            }
        }
        false
    }
    for i in 0..options.len() {
        if !augment(i, &options, &mut owner, &mut Vec::new()) {
            return None;
        }
    }
    let mut head = BTreeMap::new();
    for (j, i) in owner {
        let e = options[i].iter().find(|(k, _)| *k == j).expect("matched option").1.clone();
        head.insert(i as u64, (j, e));
    }
    Some(head)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StarDirection {
    Up,
    Down,
}

/// `A*`: the nodes of the target lying above (the image of) a terminal node
/// of `s` in `a`. Terminal nodes carry the ideal; inner nodes of `s` are
/// always null, and closing them upward would not respect the ideal.
pub fn star_up(a: &SetDesc, s: &TreeDesc, e: &TreeEmbedding) -> Result<SetDesc, TreeError> {
    match (a, s) {
        (SetDesc::Empty, _) => Ok(SetDesc::Empty),
        (_, TreeDesc::Point) => Ok(if a.root() { SetDesc::Full } else { SetDesc::Empty }),
        (_, TreeDesc::Branch { .. }) => {
            let h = Horizon::new(&[a], &[s]).shifted(e.bound());
            tabulate("star_up", false, h, |m| match e.preimage(m) {
                None => Ok(SetDesc::Empty),
                Some((n, en)) => star_up(&a.vertical(n), &child(s, n), en),
            })
        }
    }
}

/// `A′_*`: the nodes `u` of `s` such that `a` meets `t` above the image of `u`.
pub fn star_down(a: &SetDesc, s: &TreeDesc, t: &TreeDesc, e: &TreeEmbedding) -> Result<SetDesc, TreeError> {
    match a {
        SetDesc::Empty => return Ok(SetDesc::Empty),
        SetDesc::Full => return Ok(SetDesc::Full),
        SetDesc::Node { .. } => {}
    }
    let root = nonempty_in(a, t);
    match (s, t) {
        (TreeDesc::Point, _) => Ok(SetDesc::node(root, BTreeMap::new(), SetTail::Empty)),
        (TreeDesc::Branch { .. }, TreeDesc::Point) => Err(TreeError::NotRepresentable {
            op: "star_down",
            hint: "the embedding maps a branch onto a point".into(),
        }),
        (TreeDesc::Branch { .. }, TreeDesc::Branch { .. }) => {
            let h = Horizon::new(&[a], &[s, t]).shifted(e.bound());
            tabulate("star_down", root, h, |n| {
                let (j, en) = e.step(n);
                star_down(&a.vertical(j), &child(s, n), &child(t, j), en)
            })
        }
    }
}

/// A set agreeing with the image of `s` on the nodes of `t`.
fn image_set(s: &TreeDesc, t: &TreeDesc, e: &TreeEmbedding) -> Result<SetDesc, TreeError> {
    if *e == TreeEmbedding::Identity && s == t {
        return Ok(SetDesc::Full);
    }
    match (s, t) {
        (TreeDesc::Point, _) | (_, TreeDesc::Point) => Ok(SetDesc::node(true, BTreeMap::new(), SetTail::Empty)),
        _ => {
            let h = Horizon::new(&[], &[s, t]).shifted(e.bound());
            tabulate("almost_equals", true, h, |m| match e.preimage(m) {
                None => Ok(SetDesc::Empty),
                Some((n, en)) => image_set(&child(s, n), &child(t, m), en),
            })
        }
    }
}

/// Is the part of `t` outside the image of `sub` (along `e : sub ↪ t`) in
/// `I(t)`?
pub fn almost_equals(t: &TreeDesc, sub: &TreeDesc, e: &TreeEmbedding) -> Result<bool, TreeError> {
    let image = image_set(sub, t, e)?;
    Ok(ideal_member(&image.complement(), t))
}

/// For every terminal node `u` of `s` in `a′_*`, is `a′` positive in the
/// target subtree above the image of `u`?
pub fn positive_above_leaves(a: &SetDesc, s: &TreeDesc, t: &TreeDesc, e: &TreeEmbedding) -> bool {
    match (a, s) {
        (SetDesc::Empty, _) => true,
        (_, TreeDesc::Point) => !nonempty_in(a, t) || !ideal_member(a, t),
        (_, TreeDesc::Branch { .. }) => {
            let TreeDesc::Branch { .. } = t else {
                return false;
            };
            Horizon::new(&[a], &[s, t]).shifted(e.bound()).window().all(|n| {
                let (j, en) = e.step(n);
                positive_above_leaves(&a.vertical(j), &child(s, n), &child(t, j), en)
            })
        }
    }
}
