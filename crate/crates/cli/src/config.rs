//! `key = value` configuration files.
//!
//! ```text
//! # comments run to end of line
//! group = intshift            # trivial | order2 | intshift
//! embedding = zigzag          # intshift only: zigzag | parity-mixing
//! format = json               # text | json
//! code.X^1 = alternating      # one coding target per word
//! ```

use std::collections::BTreeMap;

use cofin_core::coding::CodingTarget;
use cofin_core::streams::BitStream;
use cofin_core::{Embedding, GroundGroup, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    pub group: GroundGroup,
    pub target: CodingTarget,
    pub json: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config { group: GroundGroup::PARITY_MIXING, target: CodingTarget::default(), json: false }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "config line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ConfigError {}

impl Config {
    /// Parse a config file. A `group_override` replaces the file's group
    /// before coding words are parsed against it.
    pub fn parse(text: &str, group_override: Option<GroundGroup>) -> Result<Config, ConfigError> {
        let mut group = None;
        let mut embedding = None;
        let mut json = false;
        let mut codes: Vec<(usize, String, String)> = Vec::new();
        let mut seen = BTreeMap::new();

        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |message: String| ConfigError { line, message };
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| err(format!("expected `key = value`, got `{content}`")))?;
            if let Some(first) = seen.insert(key.to_string(), line) {
                return Err(err(format!("`{key}` already set on line {first}")));
            }
            match key {
                "group" => group = Some(value.parse::<GroundGroup>().map_err(|e| err(e.to_string()))?),
                "embedding" => {
                    embedding = Some(match value {
                        "zigzag" => Embedding::Zigzag,
                        "parity-mixing" => Embedding::ParityMixing,
                        other => return Err(err(format!("unknown embedding `{other}`"))),
                    })
                }
                "format" => {
                    json = match value {
                        "json" => true,
                        "text" => false,
                        other => return Err(err(format!("unknown format `{other}`"))),
                    }
                }
                k => match k.strip_prefix("code.") {
                    Some(word) => codes.push((line, word.to_string(), value.to_string())),
                    None => return Err(err(format!("unknown key `{k}`"))),
                },
            }
        }

        let mut group = group_override.or(group).unwrap_or(GroundGroup::PARITY_MIXING);
        if let Some(emb) = embedding {
            match group {
                GroundGroup::IntShift { .. } => group = GroundGroup::IntShift { embedding: emb },
                other => {
                    let line = seen["embedding"];
                    return Err(ConfigError { line, message: format!("group {other} takes no embedding") });
                }
            }
        }

        let mut streams = Vec::new();
        for (line, word, stream) in codes {
            let err = |message: String| ConfigError { line, message };
            let w = Word::parse(group, &word).map_err(|e| err(e.to_string()))?;
            let z = stream.parse::<BitStream>().map_err(|e| err(e.to_string()))?;
            CodingTarget::new([(w.clone(), z.clone())]).map_err(|e| err(e.to_string()))?;
            streams.push((w, z));
        }
        let target = CodingTarget::new(streams).map_err(|e| ConfigError { line: 0, message: e.to_string() })?;
        Ok(Config { group, target, json })
    }
}
