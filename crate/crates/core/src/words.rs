//! Reduced words of the free product of a catalog ground group with the free
//! group on one generator `X`.
//!
//! A [`Word`] is stored as its reduced letter sequence, written left to right
//! (the leftmost letter is applied last). Ground letters are whole syllables
//! `g^e`; each `X^j` block is unrolled into `|j|` unit letters.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::ground::GroundGroup;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    /// A non-identity ground element `g^e`, exponent already reduced.
    Ground(i64),
    X,
    XInv,
}

impl Letter {
    pub fn inverse(self, group: GroundGroup) -> Letter {
        match self {
            Letter::Ground(e) => Letter::Ground(group.inverse(e)),
            Letter::X => Letter::XInv,
            Letter::XInv => Letter::X,
        }
    }

    pub fn is_x(self) -> bool {
        !matches!(self, Letter::Ground(_))
    }

    /// `+1` for `X`, `-1` for `X⁻¹`, `0` for ground letters.
    pub fn x_sign(self) -> i8 {
        match self {
            Letter::Ground(_) => 0,
            Letter::X => 1,
            Letter::XInv => -1,
        }
    }
}

/// One block of the `g_l X^{j_{l-1}} … g_0` presentation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Block {
    Ground(i64),
    X(i64),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("cannot parse word `{input}` at byte {at}: {reason}")]
    Parse {
        input: String,
        at: usize,
        reason: &'static str,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    group: GroundGroup,
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty(group: GroundGroup) -> Word {
        Word {
            group,
            letters: Vec::new(),
        }
    }

    pub fn x(group: GroundGroup) -> Word {
        Word::normal_form(group, [Letter::X])
    }

    pub fn ground(group: GroundGroup, exponent: i64) -> Word {
        Word::normal_form(group, [Letter::Ground(exponent)])
    }

    /// Multiply adjacent ground letters and cancel `X X⁻¹` pairs until the
    /// sequence is reduced. Ground letters are re-reduced by the group's
    /// equality rule, so identity letters vanish.
    pub fn normal_form(group: GroundGroup, letters: impl IntoIterator<Item = Letter>) -> Word {
        let mut stack: Vec<Letter> = Vec::new();
        for letter in letters {
            let letter = match letter {
                Letter::Ground(e) => {
                    let e = group.reduce(e);
                    if e == 0 {
                        continue;
                    }
                    Letter::Ground(e)
                }
                other => other,
            };
            match (stack.last().copied(), letter) {
                (Some(Letter::Ground(a)), Letter::Ground(b)) => {
                    stack.pop();
                    let e = group.reduce(a + b);
                    if e != 0 {
                        stack.push(Letter::Ground(e));
                    }
                }
                (Some(Letter::X), Letter::XInv) | (Some(Letter::XInv), Letter::X) => {
                    stack.pop();
                }
                _ => stack.push(letter),
            }
        }
        Word {
            group,
            letters: stack,
        }
    }

    pub fn from_blocks(group: GroundGroup, blocks: &[Block]) -> Word {
        let mut letters = Vec::new();
        for b in blocks {
            match *b {
                Block::Ground(e) => letters.push(Letter::Ground(e)),
                Block::X(j) => {
                    let l = if j > 0 { Letter::X } else { Letter::XInv };
                    letters.extend(std::iter::repeat_n(l, j.unsigned_abs() as usize));
                }
            }
        }
        Word::normal_form(group, letters)
    }

    pub fn group(&self) -> GroundGroup {
        self.group
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// Number of unit letters.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn contains_x(&self) -> bool {
        self.letters.iter().any(|l| l.is_x())
    }

    /// True for words in the ground group (including the empty word).
    pub fn is_ground(&self) -> bool {
        !self.contains_x()
    }

    /// `l(w)`: number of `X`-blocks.
    pub fn block_length(&self) -> usize {
        self.blocks().iter().filter(|b| matches!(b, Block::X(_))).count()
    }

    pub fn blocks(&self) -> Vec<Block> {
        let mut out: Vec<Block> = Vec::new();
        for &l in &self.letters {
            match (out.last_mut(), l) {
                (_, Letter::Ground(e)) => out.push(Block::Ground(e)),
                (Some(Block::X(j)), x) if (*j > 0) == (x == Letter::X) => {
                    *j += x.x_sign() as i64;
                }
                (_, x) => out.push(Block::X(x.x_sign() as i64)),
            }
        }
        out
    }

    /// Exponent of the leftmost ground letter if it precedes every `X`.
    pub fn g_left(&self) -> i64 {
        match self.letters.first() {
            Some(Letter::Ground(e)) if self.contains_x() => *e,
            _ => 0,
        }
    }

    /// Exponent of the rightmost ground letter if it follows every `X`.
    pub fn g_right(&self) -> i64 {
        match self.letters.last() {
            Some(Letter::Ground(e)) if self.contains_x() => *e,
            _ => 0,
        }
    }

    /// Sign of the exponent of the leftmost `X`-block.
    pub fn leftmost_x_sign(&self) -> Option<i8> {
        self.letters.iter().find(|l| l.is_x()).map(|l| l.x_sign())
    }

    /// Sign of the exponent of the rightmost `X`-block.
    pub fn rightmost_x_sign(&self) -> Option<i8> {
        self.letters.iter().rev().find(|l| l.is_x()).map(|l| l.x_sign())
    }

    pub fn concat(&self, other: &Word) -> Word {
        debug_assert_eq!(self.group, other.group);
        Word::normal_form(
            self.group,
            self.letters.iter().chain(other.letters.iter()).copied(),
        )
    }

    pub fn inverse(&self) -> Word {
        Word {
            group: self.group,
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| l.inverse(self.group))
                .collect(),
        }
    }

    pub fn pow(&self, n: usize) -> Word {
        Word::normal_form(
            self.group,
            std::iter::repeat_n(self.letters.iter().copied(), n).flatten(),
        )
    }

    /// The word with every `X` replaced by `X⁻¹` and vice versa. Evaluating it
    /// against `s⁻¹` is the same as evaluating `self` against `s`.
    pub fn swap_x(&self) -> Word {
        Word {
            group: self.group,
            letters: self
                .letters
                .iter()
                .map(|&l| match l {
                    Letter::X => Letter::XInv,
                    Letter::XInv => Letter::X,
                    g => g,
                })
                .collect(),
        }
    }

    /// Contiguous piece `letters[start..end]`.
    pub fn slice(&self, start: usize, end: usize) -> Word {
        Word {
            group: self.group,
            letters: self.letters[start..end].to_vec(),
        }
    }

    fn rotations(&self) -> impl Iterator<Item = Vec<Letter>> + '_ {
        let n = self.letters.len();
        (0..n.max(1)).map(move |r| {
            let mut v = self.letters[r.min(n)..].to_vec();
            v.extend_from_slice(&self.letters[..r.min(n)]);
            v
        })
    }

    /// All cyclic rotations of the letter sequence, each re-normalized,
    /// deduplicated.
    pub fn circular_shifts(&self) -> BTreeSet<Word> {
        self.rotations()
            .map(|v| Word::normal_form(self.group, v))
            .collect()
    }

    /// Every contiguous piece of every raw rotation, normalized. Contains the
    /// empty word.
    pub fn shift_subwords(&self) -> BTreeSet<Word> {
        let mut out = BTreeSet::new();
        out.insert(Word::empty(self.group));
        for rot in self.rotations() {
            for i in 0..rot.len() {
                for j in i + 1..=rot.len() {
                    out.insert(Word::normal_form(self.group, rot[i..j].iter().copied()));
                }
            }
        }
        out
    }

    /// Find `(w̃, w₀)` with `w̃` non-empty and `self = w̃⁻¹ w₀ w̃` as a letter
    /// concatenation, shortest `w̃` first.
    pub fn proper_conjugate_subword(&self) -> Option<(Word, Word)> {
        let n = self.letters.len();
        (1..=n.saturating_sub(1) / 2).find_map(|k| {
            let conj = self.slice(n - k, n);
            (self.letters[..k] == conj.inverse().letters[..])
                .then(|| (conj, self.slice(k, n - k)))
        })
    }

    /// Least root `r` and exponent `n ≥ 2` with `self = rⁿ`.
    pub fn proper_power(&self) -> Option<(Word, usize)> {
        let letters = &self.letters;
        let n = letters.len();
        let mut i = 0;
        while i + 1 < n - i && letters[i] == letters[n - 1 - i].inverse(self.group) {
            i += 1;
        }
        let mut core: Vec<Letter> = letters[i..n - i].to_vec();
        let mut left: Vec<Letter> = letters[..i].to_vec();
        let mut right: Vec<Letter> = letters[n - i..].to_vec();
        if core.len() >= 2 {
            if let (Letter::Ground(a), Letter::Ground(b)) = (core[0], core[core.len() - 1]) {
                // g1 M g2 = g1 (M g2 g1) g1⁻¹
                core.remove(0);
                core.pop();
                core.push(Letter::Ground(self.group.reduce(a + b)));
                left.push(Letter::Ground(a));
                right.insert(0, Letter::Ground(self.group.inverse(a)));
            }
        }
        let len = core.len();
        if len < 2 || !core.iter().any(|l| l.is_x()) {
            return None;
        }
        let period = (1..len).find(|&d| len.is_multiple_of(d) && (d..len).all(|k| core[k] == core[k - d]))?;
        let root = Word::normal_form(
            self.group,
            left.iter()
                .chain(core[..period].iter())
                .chain(right.iter())
                .copied(),
        );
        let exp = len / period;
        debug_assert_eq!(&root.pow(exp), self);
        Some((root, exp))
    }

    /// Parse the text form: letters `g`, `X` (or `x`), each with an optional
    /// `^exponent`, separated by optional `.` or whitespace. `1` or the empty
    /// string is the identity.
    pub fn parse(group: GroundGroup, input: &str) -> Result<Word, WordError> {
        let trimmed = input.trim();
        if trimmed.is_empty() || trimmed == "1" {
            return Ok(Word::empty(group));
        }
        let bytes = input.as_bytes();
        let err = |at, reason| WordError::Parse {
            input: input.to_string(),
            at,
            reason,
        };
        let mut letters = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i];
            match c {
                b'.' | b' ' | b'\t' | b'*' => {
                    i += 1;
                    continue;
                }
                b'g' | b'X' | b'x' => {}
                _ => return Err(err(i, "expected `g` or `X`")),
            }
            i += 1;
            let mut exp: i64 = 1;
            if i < bytes.len() && bytes[i] == b'^' {
                i += 1;
                let start = i;
                if i < bytes.len() && (bytes[i] == b'-' || bytes[i] == b'+') {
                    i += 1;
                }
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                exp = input[start..i]
                    .parse()
                    .map_err(|_| err(start, "bad exponent"))?;
            }
            if c == b'g' {
                letters.push(Letter::Ground(exp));
            } else {
                let l = if exp >= 0 { Letter::X } else { Letter::XInv };
                letters.extend(std::iter::repeat_n(l, exp.unsigned_abs() as usize));
            }
        }
        Ok(Word::normal_form(group, letters))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for (k, b) in self.blocks().iter().enumerate() {
            if k > 0 {
                f.write_str(".")?;
            }
            match b {
                Block::Ground(e) => write!(f, "g^{e}")?,
                Block::X(j) => write!(f, "X^{j}")?,
            }
        }
        Ok(())
    }
}

/// All reduced words with at most `max_letters` unit letters, ground
/// exponents drawn from `exponents`.
pub fn enumerate_words(group: GroundGroup, max_letters: usize, exponents: &[i64]) -> Vec<Word> {
    let mut alphabet = vec![Letter::X, Letter::XInv];
    for &e in exponents {
        let e = group.reduce(e);
        if e != 0 && !alphabet.contains(&Letter::Ground(e)) {
            alphabet.push(Letter::Ground(e));
        }
    }
    let mut out = vec![Word::empty(group)];
    let mut frontier = vec![Vec::<Letter>::new()];
    for _ in 0..max_letters {
        let mut next = Vec::new();
        for w in &frontier {
            for &l in &alphabet {
                let ok = match (w.last(), l) {
                    (Some(Letter::Ground(_)), Letter::Ground(_)) => false,
                    (Some(&a), b) if a.is_x() && b.is_x() => a == b,
                    _ => true,
                };
                if ok {
                    let mut v = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
        }
        out.extend(next.iter().map(|v| Word { group, letters: v.clone() }));
        frontier = next;
    }
    out
}
