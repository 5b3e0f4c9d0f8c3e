//! Named bit streams and target permutations used by coding and builder
//! requirements.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StreamError {
    #[error("unknown bit stream `{0}` (expected a 0/1 string, zeros, ones, alternating, champernowne)")]
    UnknownStream(String),
    #[error("unknown target permutation `{0}`")]
    UnknownTarget(String),
}

/// A bit sequence: either finite or a named infinite stream.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum BitStream {
    Finite(Vec<u8>),
    Zeros,
    Ones,
    /// `0101…`
    Alternating,
    /// Binary expansions of `1, 2, 3, …` concatenated: `1 10 11 100 …`.
    Champernowne,
}

impl BitStream {
    pub fn bit(&self, k: usize) -> Option<u8> {
        match self {
            BitStream::Finite(bits) => bits.get(k).copied(),
            BitStream::Zeros => Some(0),
            BitStream::Ones => Some(1),
            BitStream::Alternating => Some((k % 2) as u8),
            BitStream::Champernowne => {
                let mut k = k as u64;
                let mut width = 1u32;
                loop {
                    // numbers with `width` binary digits: 2^(width-1) ..< 2^width
                    let count = 1u64 << (width - 1);
                    let span = count * width as u64;
                    if k < span {
                        let n = count + k / width as u64;
                        let digit = width - 1 - (k % width as u64) as u32;
                        return Some(((n >> digit) & 1) as u8);
                    }
                    k -= span;
                    width += 1;
                }
            }
        }
    }

    /// The first `l` bits, or `None` if the stream is shorter.
    pub fn prefix(&self, l: usize) -> Option<Vec<u8>> {
        (0..l).map(|k| self.bit(k)).collect()
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, BitStream::Finite(_))
    }
}

impl fmt::Display for BitStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BitStream::Finite(bits) => {
                if bits.is_empty() {
                    return f.write_str("empty");
                }
                for b in bits {
                    write!(f, "{b}")?;
                }
                Ok(())
            }
            BitStream::Zeros => f.write_str("zeros"),
            BitStream::Ones => f.write_str("ones"),
            BitStream::Alternating => f.write_str("alternating"),
            BitStream::Champernowne => f.write_str("champernowne"),
        }
    }
}

impl FromStr for BitStream {
    type Err = StreamError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        Ok(match s {
            "zeros" => BitStream::Zeros,
            "ones" => BitStream::Ones,
            "alternating" => BitStream::Alternating,
            "champernowne" => BitStream::Champernowne,
            "empty" => BitStream::Finite(Vec::new()),
            bits if bits.bytes().all(|b| b == b'0' || b == b'1') => {
                BitStream::Finite(bits.bytes().map(|b| b - b'0').collect())
            }
            other => return Err(StreamError::UnknownStream(other.to_string())),
        })
    }
}

impl From<BitStream> for String {
    fn from(b: BitStream) -> String {
        b.to_string()
    }
}

impl TryFrom<String> for BitStream {
    type Error = StreamError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

/// Target permutations `τ` for hit requirements.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Target {
    /// `n ↦ n + 1` (injective, not onto).
    Successor,
    /// `n ↦ n xor k`.
    Xor(u64),
    /// Reverse every block `[ib, (i+1)b)`.
    Mirror(u64),
    /// Swap `2k ↔ 2k+1` exactly when bit `k` of the stream is 1
    /// (missing bits count as 0).
    PairSwaps(BitStream),
}

impl Target {
    pub fn apply(&self, n: u64) -> u64 {
        match self {
            Target::Successor => n + 1,
            Target::Xor(k) => n ^ k,
            Target::Mirror(b) => {
                let b = (*b).max(1);
                let base = n / b * b;
                base + (b - 1 - (n - base))
            }
            Target::PairSwaps(stream) => {
                if stream.bit((n / 2) as usize) == Some(1) {
                    n ^ 1
                } else {
                    n
                }
            }
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Successor => f.write_str("successor"),
            Target::Xor(k) => write!(f, "xor:{k}"),
            Target::Mirror(b) => write!(f, "mirror:{b}"),
            Target::PairSwaps(stream) => write!(f, "{stream}"),
        }
    }
}

impl FromStr for Target {
    type Err = StreamError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || StreamError::UnknownTarget(s.to_string());
        if s == "successor" {
            return Ok(Target::Successor);
        }
        if let Some(k) = s.strip_prefix("xor:") {
            return k.parse().map(Target::Xor).map_err(|_| bad());
        }
        if let Some(b) = s.strip_prefix("mirror:") {
            return match b.parse() {
                Ok(b) if b > 0 => Ok(Target::Mirror(b)),
                _ => Err(bad()),
            };
        }
        s.parse().map(Target::PairSwaps).map_err(|_| bad())
    }
}

impl From<Target> for String {
    fn from(t: Target) -> String {
        t.to_string()
    }
}

impl TryFrom<String> for Target {
    type Error = StreamError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}
