//! Well-founded trees in which every node has infinitely many or no
//! children, the iterated Fubini ideals they carry, and the transfer maps
//! between almost-disjoint families along tree embeddings.
//!
//! Node sets are described symbolically. A [`SetDesc`] denotes a subset of
//! all finite sequences; against a tree it stands for its intersection with
//! the tree's nodes.

mod ideal;
mod ordinal;
mod set;
mod tree;

pub use ideal::{
    almost_equals, embeds, equal_on, ideal_member, is_ad_family, nonempty_in, positive_above_leaves, star_down,
    star_up, StarDirection, TreeEmbedding,
};
pub use ordinal::Ordinal;
pub use set::{enumerate_sets, SetDesc, SetTail};
pub use tree::{fin_alpha, fin_power, Tail, TreeDesc};

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("ordinal {0} is outside the catalog (supported: 1 ≤ α < ω·2)")]
    OutOfCatalog(String),
    #[error("{op} leaves the descriptor class: {hint}")]
    NotRepresentable { op: &'static str, hint: String },
    #[error("parse error in `{input}` at byte {at}: {reason}")]
    Parse { input: String, at: usize, reason: String },
}

/// Minimal cursor for the bracketed descriptor grammar.
pub(crate) struct Cursor<'a> {
    input: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(input: &'a str) -> Self {
        Cursor { input, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.input[self.pos..]
    }

    pub(crate) fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.input.len() - trimmed.len();
    }

    pub(crate) fn error(&self, reason: impl Into<String>) -> TreeError {
        TreeError::Parse {
            input: self.input.to_string(),
            at: self.pos,
            reason: reason.into(),
        }
    }

    /// Consume `token` (after whitespace) if present.
    pub(crate) fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, token: &str) -> Result<(), TreeError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{token}`")))
        }
    }

    pub(crate) fn peek_digit(&mut self) -> bool {
        self.skip_ws();
        self.rest().starts_with(|c: char| c.is_ascii_digit())
    }

    pub(crate) fn number(&mut self) -> Result<u64, TreeError> {
        self.skip_ws();
        let len = self.rest().find(|c: char| !c.is_ascii_digit()).unwrap_or(self.rest().len());
        if len == 0 {
            return Err(self.error("expected a number"));
        }
        let n = self.rest()[..len].parse().map_err(|_| self.error("number too large"))?;
        self.pos += len;
        Ok(n)
    }

    /// Consume characters while `pred` holds.
    pub(crate) fn take_while(&mut self, pred: impl Fn(char) -> bool) -> &'a str {
        self.skip_ws();
        let rest = self.rest();
        let len = rest.find(|c: char| !pred(c)).unwrap_or(rest.len());
        self.pos += len;
        &rest[..len]
    }

    pub(crate) fn finish(&mut self) -> Result<(), TreeError> {
        self.skip_ws();
        if self.rest().is_empty() {
            Ok(())
        } else {
            Err(self.error("trailing input"))
        }
    }
}

/// Parse a comma-separated list of naturals up to `close`.
pub(crate) fn number_list(c: &mut Cursor<'_>, close: &str) -> Result<Vec<u64>, TreeError> {
    let mut out = Vec::new();
    if c.eat(close) {
        return Ok(out);
    }
    loop {
        out.push(c.number()?);
        if c.eat(close) {
            return Ok(out);
        }
        c.expect(",")?;
    }
}
