//! `cofin`: command-line access to words, conditions, coding, the builder,
//! tree ideals and discrete sets.
//!
//! Output is plain text by default and a single JSON object (with `"v":1`)
//! under `--json`. Exit status is 0 on success, 1 when the library rejects
//! the input, 2 on malformed arguments.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Debug, Parser)]
#[command(name = "cofin", version, about = "Finite experiments with generic cofinitary permutations")]
pub struct Cli {
    /// Print one JSON object instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// `key = value` config file (group, embedding, format, code.<word>).
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Ground group: trivial, order2, intshift or intshift:zigzag.
    #[arg(long, global = true, value_name = "GROUP")]
    pub group: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Word algebra.
    #[command(subcommand)]
    Word(WordOp),
    /// Evaluate `w[s](m)`.
    Eval {
        word: String,
        #[arg(long, default_value = "")]
        s: String,
        #[arg(long)]
        m: u64,
    },
    /// Fixed points of `w[s]`.
    Fix {
        word: String,
        #[arg(long, default_value = "")]
        s: String,
    },
    /// Trace `m` through repeated applications of `w`.
    Path {
        word: String,
        #[arg(long, default_value = "")]
        s: String,
        #[arg(long)]
        m: u64,
        #[arg(long, default_value_t = 64)]
        budget: usize,
    },
    /// Put a point into the domain or range of a condition.
    Extend {
        direction: DirectionArg,
        #[arg(long, default_value = "")]
        s: String,
        /// Sealed words, comma separated or repeated.
        #[arg(long = "F", value_delimiter = ',')]
        words: Vec<String>,
        #[arg(long)]
        n: u64,
    },
    /// Run a requirement script and print the certificate.
    Build {
        script: PathBuf,
        /// Extra coding targets `WORD=STREAM`, added to the config's.
        #[arg(long, value_name = "WORD=STREAM")]
        code: Vec<String>,
        /// Builder options as JSON.
        #[arg(long, value_name = "FILE")]
        options: Option<PathBuf>,
        /// Also write the certificate here.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Replay a build certificate.
    Verify { certificate: PathBuf },
    /// Coding queries.
    #[command(subcommand)]
    Code(CodeOp),
    /// Tree ideals and transfer maps.
    #[command(subcommand)]
    Ideal(IdealOp),
    /// Discrete sets in catalog hypergraphs.
    #[command(subcommand)]
    Discrete(DiscreteOp),
}

#[derive(Debug, Subcommand)]
pub enum WordOp {
    /// Reduced form.
    Normalize { word: String },
    /// Distinct letter-level circular shifts.
    Shifts { word: String },
    /// Look for a proper conjugated subword `u⁻¹ v u`.
    Conjugate { word: String },
}

#[derive(Debug, Subcommand)]
pub enum CodeOp {
    /// Membership in the coding words.
    Gprime { word: String },
    /// Whether `w` codes a bit string at `m`.
    Check {
        word: String,
        #[arg(long, default_value = "")]
        s: String,
        #[arg(long)]
        m: u64,
        /// Bit string such as `0110`; `empty` for the empty string.
        #[arg(long)]
        bits: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Plain)]
        mode: ModeArg,
    },
    /// Length of the prefix of a stream coded exactly at `m`.
    Length {
        word: String,
        #[arg(long, default_value = "")]
        s: String,
        #[arg(long)]
        m: u64,
        /// Stream: a bit string or zeros, ones, alternating, champernowne. Defaults to the config target.
        #[arg(long)]
        stream: Option<String>,
    },
    /// Count parity-pattern witnesses for tuples of ground elements.
    Parity {
        #[arg(long, default_value_t = 2)]
        arity: usize,
        #[arg(long, default_value_t = 256)]
        bound: u64,
        #[arg(long, default_value_t = 4)]
        span: i64,
    },
}

#[derive(Debug, Subcommand)]
pub enum IdealOp {
    /// Whether a node set lies in the tree's ideal.
    Member {
        #[arg(long)]
        tree: String,
        #[arg(long)]
        set: String,
    },
    /// Rank of a tree.
    Rank {
        #[arg(long)]
        tree: String,
    },
    /// Find an embedding of one tree into another.
    Embed {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// `A*` (up) or `A′_*` (down) along the embedding `from → to`.
    Star {
        direction: StarArg,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long)]
        set: String,
    },
    /// Push an almost-disjoint family on `from` up to `to`.
    Transfer {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        /// Family members, repeated.
        #[arg(long = "set", required = true)]
        sets: Vec<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum DiscreteOp {
    /// Whether the vertices form a discrete set.
    Check {
        #[arg(long)]
        instance: String,
        vertices: Vec<String>,
    },
    /// Whether `--vertex` is caught by the listed set.
    Caught {
        #[arg(long)]
        instance: String,
        #[arg(long)]
        vertex: String,
        vertices: Vec<String>,
    },
    /// Greedy maximal discrete subset of the pool, in order.
    Greedy {
        #[arg(long)]
        instance: String,
        vertices: Vec<String>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DirectionArg {
    Domain,
    Range,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Plain,
    Exact,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum StarArg {
    Up,
    Down,
}

/// A command's result in both renderings.
pub struct Report {
    pub json: Value,
    pub text: String,
    /// Whether the command's question was answered in the negative in a way
    /// that should fail the process (a rejected certificate).
    pub failed: bool,
}

pub enum Failure {
    Usage { flag: String, message: String },
    Domain(String),
}

impl Failure {
    pub fn usage(flag: &str, message: impl ToString) -> Failure {
        Failure::Usage { flag: flag.to_string(), message: message.to_string() }
    }

    pub fn domain(e: impl ToString) -> Failure {
        Failure::Domain(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let settings = match commands::load_settings(&cli) {
        Ok(s) => s,
        Err(f) => return report_failure(f, cli.json),
    };
    let json = cli.json || settings.json;
    match commands::dispatch(&cli.command, &settings) {
        Ok(report) => {
            if json {
                println!("{}", report.json);
            } else {
                println!("{}", report.text);
            }
            if report.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(f) => report_failure(f, json),
    }
}

fn report_failure(f: Failure, json: bool) -> ExitCode {
    let (code, kind, message) = match f {
        Failure::Usage { flag, message } => (2, "usage", format!("invalid value for {flag}: {message}")),
        Failure::Domain(message) => (1, "domain", message),
    };
    if json {
        println!("{}", json!({"v": 1, "error": {"kind": kind, "message": message}}));
    }
    eprintln!("error: {message}");
    ExitCode::from(code)
}
