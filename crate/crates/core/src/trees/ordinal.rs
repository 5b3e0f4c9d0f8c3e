//! Ordinals below `ω^ω` in Cantor normal form.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::TreeError;

/// `ω^{e₁}·c₁ + … + ω^{e_k}·c_k` with `e₁ > … > e_k` and every `cᵢ > 0`.
/// The derived order is the ordinal order: terms compare lexicographically
/// and a longer sum with an equal prefix is larger.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Ordinal {
    terms: Vec<(u32, u64)>,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn nat(n: u64) -> Self {
        if n == 0 {
            Self::zero()
        } else {
            Ordinal { terms: vec![(0, n)] }
        }
    }

    pub fn omega() -> Self {
        Ordinal { terms: vec![(1, 1)] }
    }

    /// Canonicalize arbitrary terms: sort, merge, drop absorbed lower terms.
    pub fn from_terms(terms: impl IntoIterator<Item = (u32, u64)>) -> Self {
        let mut out = Ordinal::zero();
        for (e, c) in terms {
            out = out.add(&Ordinal { terms: vec![(e, c)] }.canonical());
        }
        out
    }

    fn canonical(self) -> Self {
        Ordinal {
            terms: self.terms.into_iter().filter(|&(_, c)| c > 0).collect(),
        }
    }

    pub fn terms(&self) -> &[(u32, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(n)` for finite ordinals.
    pub fn as_nat(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(0, n)] => Some(*n),
            _ => None,
        }
    }

    /// Ordinal sum `self + other` (absorbs the smaller terms of `self`).
    pub fn add(&self, other: &Ordinal) -> Ordinal {
        let Some(&(lead, coef)) = other.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<(u32, u64)> = self.terms.iter().copied().filter(|&(e, _)| e >= lead).collect();
        match terms.last_mut() {
            Some((e, c)) if *e == lead => *c += coef,
            _ => terms.push((lead, coef)),
        }
        terms.extend(other.terms.iter().skip(1).copied());
        Ordinal { terms }
    }

    pub fn succ(&self) -> Ordinal {
        self.add(&Ordinal::nat(1))
    }

    pub fn is_limit(&self) -> bool {
        matches!(self.terms.last(), Some(&(e, _)) if e > 0)
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, &(e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            match (e, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => f.write_str("w")?,
                (1, c) => write!(f, "w*{c}")?,
                (e, 1) => write!(f, "w^{e}")?,
                (e, c) => write!(f, "w^{e}*{c}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for Ordinal {
    type Err = TreeError;

    /// Accepts sums of `n`, `w`, `w^e`, `w*c`, `w^e*c` (`ω` for `w`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |reason: &str| TreeError::Parse {
            input: s.to_string(),
            at: 0,
            reason: reason.to_string(),
        };
        let text = s.replace('ω', "w").replace(' ', "");
        if text.is_empty() {
            return Err(bad("empty ordinal"));
        }
        let mut out = Ordinal::zero();
        for term in text.split('+') {
            let (base, coef) = match term.split_once('*') {
                Some((b, c)) => (b, c.parse::<u64>().map_err(|_| bad("bad coefficient"))?),
                None => (term, 1),
            };
            let t = if let Some(rest) = base.strip_prefix('w') {
                let e = match rest.strip_prefix('^') {
                    Some(e) => e.parse::<u32>().map_err(|_| bad("bad exponent"))?,
                    None if rest.is_empty() => 1,
                    None => return Err(bad("unexpected text after w")),
                };
                Ordinal::from_terms([(e, coef)])
            } else {
                let n = base.parse::<u64>().map_err(|_| bad("expected a natural or w"))?;
                Ordinal::nat(n * coef)
            };
            out = out.add(&t);
        }
        Ok(out)
    }
}

impl From<Ordinal> for String {
    fn from(o: Ordinal) -> String {
        o.to_string()
    }
}

impl TryFrom<String> for Ordinal {
    type Error = TreeError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}
