//! Certified finite approximations of the generic permutation.
//!
//! A build discharges a finite list of requirements (domain and range
//! points, sealed words, target agreements, codings) one extension at a
//! time and records every step, so that [`verify_certificate`] can replay
//! the whole run.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::coding::{
    codes, coding_leq, extend_coding, in_gprime, paths_separated, CodingCondition, CodingConditionJson, CodingPolicy,
    CodingTarget, Mode, SearchLimits,
};
use crate::ground::GroundGroup;
use crate::injection::{fix_set, FixSet, PartialInjection};
use crate::streams::Target;
use crate::words::{enumerate_words, Word};
use crate::zhang::{
    directed_exclusion_set, domain_extend_filtered, hit_target_filtered, leq, seal_word, Condition, Direction,
    Order,
};

pub const CERTIFICATE_VERSION: u32 = 1;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BuildError {
    #[error("line {line}: {message}")]
    Script { line: usize, message: String },
    #[error("invalid coding target: {0}")]
    Target(String),
}

/// One density requirement.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Requirement {
    DomainAt(u64),
    RangeAt(u64),
    Seal(Word),
    /// Agree with `target` at some `n ≥ threshold`.
    Hit { target: Target, threshold: u64 },
    /// Code `z̄(word)` to length at least `length`.
    Code { word: Word, length: usize },
}

impl Requirement {
    /// Scheduling class: seals first, then domain and range points, then
    /// codings, then hits.
    fn priority(&self) -> u8 {
        match self {
            Requirement::Seal(_) => 0,
            Requirement::DomainAt(_) | Requirement::RangeAt(_) => 1,
            Requirement::Code { .. } => 2,
            Requirement::Hit { .. } => 3,
        }
    }
}

/// Script-line form, which is also the form stored in certificates.
impl fmt::Display for Requirement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Requirement::DomainAt(n) => write!(f, "domain {n}"),
            Requirement::RangeAt(n) => write!(f, "range {n}"),
            Requirement::Seal(w) => write!(f, "seal {w}"),
            Requirement::Hit { target, threshold } => write!(f, "hit {target} {threshold}"),
            Requirement::Code { word, length } => write!(f, "code {word} {length}"),
        }
    }
}

fn parse_range(arg: &str) -> Result<std::ops::Range<u64>, String> {
    let bad = || format!("expected N or A..B, found `{arg}`");
    match arg.split_once("..") {
        Some((a, b)) => {
            let a: u64 = a.trim().parse().map_err(|_| bad())?;
            let b: u64 = b.trim().parse().map_err(|_| bad())?;
            Ok(a..b)
        }
        None => {
            let n: u64 = arg.trim().parse().map_err(|_| bad())?;
            Ok(n..n + 1)
        }
    }
}

/// Every 𝒢′ word with at most `max_letters` unit letters and ground letters
/// `g^{±1}`.
pub fn gprime_words(group: GroundGroup, max_letters: usize) -> Vec<Word> {
    enumerate_words(group, max_letters, &[1, -1])
        .into_iter()
        .filter(in_gprime)
        .collect()
}

fn parse_line(group: GroundGroup, line: &str) -> Result<Vec<Requirement>, String> {
    let (head, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
    let rest = rest.trim();
    let word = |s: &str| Word::parse(group, s).map_err(|e| e.to_string());
    Ok(match head {
        "domain" => parse_range(rest)?.map(Requirement::DomainAt).collect(),
        "range" => parse_range(rest)?.map(Requirement::RangeAt).collect(),
        "seal" => vec![Requirement::Seal(word(rest)?)],
        "seal-gprime" => {
            let n: usize = rest.parse().map_err(|_| format!("expected a letter count, found `{rest}`"))?;
            gprime_words(group, n).into_iter().map(Requirement::Seal).collect()
        }
        "code" | "hit" => {
            let (a, b) = rest
                .rsplit_once(char::is_whitespace)
                .ok_or_else(|| format!("`{head}` needs two arguments"))?;
            let b = b.trim();
            if head == "code" {
                let length = b.parse().map_err(|_| format!("expected a length, found `{b}`"))?;
                vec![Requirement::Code { word: word(a.trim())?, length }]
            } else {
                let target = a.trim().parse().map_err(|e: crate::streams::StreamError| e.to_string())?;
                let threshold = b.parse().map_err(|_| format!("expected a threshold, found `{b}`"))?;
                vec![Requirement::Hit { target, threshold }]
            }
        }
        other => return Err(format!("unknown directive `{other}`")),
    })
}

/// Parse a requirement script: one directive per line, `#` comments.
///
/// ```text
/// domain 0..50
/// range 7
/// seal gX
/// seal-gprime 3
/// code X 3
/// hit champernowne 0
/// ```
pub fn parse_script(group: GroundGroup, text: &str) -> Result<Vec<Requirement>, BuildError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let reqs = parse_line(group, line).map_err(|message| BuildError::Script { line: i + 1, message })?;
        out.extend(reqs);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct BuildOptions {
    /// Attempts per requirement before it is given up.
    pub max_attempts: usize,
    /// Total attempts across all requirements.
    pub step_budget: usize,
    /// Candidates scanned beyond the exclusion set for domain and range points.
    pub extend_slack: u64,
    /// Points `n ∈ [k, k + hit_window)` tried for a hit.
    pub hit_window: u64,
    pub search: SearchLimits,
    pub policy: CodingPolicy,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            max_attempts: 3,
            step_budget: 100_000,
            extend_slack: 256,
            hit_window: 10_000,
            search: SearchLimits::default(),
            policy: CodingPolicy::default(),
        }
    }
}

/// What a step did.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Outcome {
    /// A single pair was added to `s`.
    Extended { pair: (u64, u64) },
    /// The word joined `F`; its fixed points at that moment.
    Sealed { fix: FixSet },
    Hit { n: u64, image: u64 },
    Coded { m: u64, length: usize, added: Vec<(u64, u64)> },
    AlreadySatisfied,
    Failed { attempt: usize, error: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub requirement: String,
    pub outcome: Outcome,
    /// SHA-256 of the canonical JSON of the condition after the step.
    pub digest: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeRecord {
    pub m: u64,
    pub length: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HitRecord {
    pub target: String,
    pub n: u64,
    pub image: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildCertificate {
    pub v: u32,
    pub group: GroundGroup,
    pub zbar: BTreeMap<String, String>,
    pub options: BuildOptions,
    pub initial: CodingConditionJson,
    pub steps: Vec<Step>,
    pub final_s: PartialInjection,
    pub sealed: BTreeMap<String, FixSet>,
    pub codes: BTreeMap<String, CodeRecord>,
    pub hits: Vec<HitRecord>,
    /// Requirements given up on.
    pub failed: Vec<String>,
}

pub fn digest(p: &CodingCondition) -> String {
    let text = serde_json::to_string(&p.to_json()).expect("condition serializes");
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// Coded words keep an exact coding and their paths stay apart.
fn coding_intact(q: &CodingCondition, target: &CodingTarget, policy: &CodingPolicy) -> bool {
    paths_separated(q, target, policy)
}

/// Execute one requirement against `p`.
fn execute(
    p: &CodingCondition,
    req: &Requirement,
    target: &CodingTarget,
    opts: &BuildOptions,
    attempt: usize,
) -> (CodingCondition, Outcome) {
    let failed = |error: String| Outcome::Failed { attempt, error };
    let policy = &opts.policy;
    match req {
        Requirement::DomainAt(n) | Requirement::RangeAt(n) => {
            let direction = match req {
                Requirement::DomainAt(_) => Direction::Domain,
                _ => Direction::Range,
            };
            let done = match direction {
                Direction::Domain => p.base.s.in_domain(*n),
                Direction::Range => p.base.s.in_range(*n),
            };
            if done {
                return (p.clone(), Outcome::AlreadySatisfied);
            }
            let limit = directed_exclusion_set(&p.base, *n, direction).len() as u64 + opts.extend_slack;
            let accept = |q: &Condition, _| {
                coding_intact(
                    &CodingCondition {
                        base: q.clone(),
                        params: p.params.clone(),
                    },
                    target,
                    policy,
                )
            };
            match domain_extend_filtered(&p.base, *n, direction, limit, accept) {
                Ok((base, partner)) => {
                    let pair = match direction {
                        Direction::Domain => (*n, partner),
                        Direction::Range => (partner, *n),
                    };
                    let q = CodingCondition {
                        base,
                        params: p.params.clone(),
                    };
                    (q, Outcome::Extended { pair })
                }
                Err(e) => (p.clone(), failed(e.to_string())),
            }
        }
        Requirement::Seal(w) => {
            if p.base.words.contains(w) {
                return (p.clone(), Outcome::AlreadySatisfied);
            }
            match seal_word(&p.base, w) {
                Ok(base) => {
                    let fix = fix_set(w, &base.s);
                    let q = CodingCondition {
                        base,
                        params: p.params.clone(),
                    };
                    (q, Outcome::Sealed { fix })
                }
                Err(e) => (p.clone(), failed(e.to_string())),
            }
        }
        Requirement::Hit { target: tau, threshold } => {
            let accept = |q: &Condition| {
                coding_intact(
                    &CodingCondition {
                        base: q.clone(),
                        params: p.params.clone(),
                    },
                    target,
                    policy,
                )
            };
            let end = threshold.saturating_add(opts.hit_window);
            match hit_target_filtered(&p.base, tau, *threshold, end, accept) {
                Ok((base, n)) => {
                    let image = tau.apply(n);
                    let q = CodingCondition {
                        base,
                        params: p.params.clone(),
                    };
                    (q, Outcome::Hit { n, image })
                }
                Err(e) => (p.clone(), failed(e.to_string())),
            }
        }
        Requirement::Code { word, length } => match extend_coding(p, target, word, *length, opts.search, policy) {
            Ok(q) => {
                if q == *p {
                    return (q, Outcome::AlreadySatisfied);
                }
                let added = q.base.s.pairs().filter(|&(a, _)| !p.base.s.in_domain(a)).collect();
                let m = q.params[word];
                let length = q.lengths(target, policy).map(|l| l[word]).unwrap_or(0);
                (q, Outcome::Coded { m, length, added })
            }
            Err(e) => (p.clone(), failed(e.to_string())),
        },
    }
}

#[derive(Debug, Clone)]
pub struct BuildResult {
    pub sigma: PartialInjection,
    pub condition: CodingCondition,
    pub certificate: BuildCertificate,
}

/// Discharge `requirements` starting from the empty condition.
///
/// Each round walks the pending queue in priority order (seals, domain and
/// range points, codings, hits; script order within a class). A failed
/// requirement goes back into the queue for the next round until it has
/// used `max_attempts`.
pub fn run(
    group: GroundGroup,
    target: &CodingTarget,
    requirements: &[Requirement],
    opts: &BuildOptions,
) -> BuildResult {
    let initial = CodingCondition::new(Condition::empty());
    let mut p = initial.clone();
    let mut steps = Vec::new();
    let mut failed = Vec::new();

    let mut seen = std::collections::HashSet::new();
    let mut ordered: Vec<(usize, &Requirement)> =
        requirements.iter().enumerate().filter(|(_, r)| seen.insert(*r)).collect();
    ordered.sort_by_key(|(i, r)| (r.priority(), *i));
    let mut queue: VecDeque<(&Requirement, usize)> = ordered.into_iter().map(|(_, r)| (r, 1)).collect();
    let mut spent = 0;

    while let Some((req, attempt)) = queue.pop_front() {
        if spent >= opts.step_budget {
            failed.push(req.to_string());
            failed.extend(queue.drain(..).map(|(r, _)| r.to_string()));
            break;
        }
        spent += 1;
        let (q, outcome) = execute(&p, req, target, opts, attempt);
        if matches!(outcome, Outcome::Failed { .. }) {
            if attempt < opts.max_attempts {
                queue.push_back((req, attempt + 1));
            } else {
                failed.push(req.to_string());
            }
        }
        steps.push(Step {
            requirement: req.to_string(),
            outcome,
            digest: digest(&q),
        });
        p = q;
    }

    let certificate = summarize(group, target, opts, &initial, steps, &p, failed);
    BuildResult {
        sigma: p.base.s.clone(),
        condition: p,
        certificate,
    }
}

fn summarize(
    group: GroundGroup,
    target: &CodingTarget,
    opts: &BuildOptions,
    initial: &CodingCondition,
    steps: Vec<Step>,
    last: &CodingCondition,
    failed: Vec<String>,
) -> BuildCertificate {
    let mut sealed = BTreeMap::new();
    let mut hits = Vec::new();
    for step in &steps {
        match &step.outcome {
            Outcome::Sealed { fix } => {
                let word = step.requirement.trim_start_matches("seal ").to_string();
                sealed.insert(word, fix.clone());
            }
            Outcome::Hit { n, image } => {
                let target = step.requirement.split_whitespace().nth(1).unwrap_or("").to_string();
                hits.push(HitRecord {
                    target,
                    n: *n,
                    image: *image,
                });
            }
            _ => {}
        }
    }
    let lengths = last.lengths(target, &opts.policy).unwrap_or_default();
    let codes = last
        .params
        .iter()
        .map(|(w, &m)| {
            let length = lengths.get(w).copied().unwrap_or(0);
            (w.to_string(), CodeRecord { m, length })
        })
        .collect();
    BuildCertificate {
        v: CERTIFICATE_VERSION,
        group,
        zbar: target.to_json(),
        options: *opts,
        initial: initial.to_json(),
        steps,
        final_s: last.base.s.clone(),
        sealed,
        codes,
        hits,
        failed,
    }
}

/// Result of replaying a certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub ok: bool,
    /// Index of the first step that did not re-validate; `steps.len()` for
    /// a failure in the final summary.
    pub failed_step: Option<usize>,
    pub reason: Option<String>,
}

impl Verification {
    fn pass() -> Self {
        Verification {
            ok: true,
            failed_step: None,
            reason: None,
        }
    }

    fn fail(step: usize, reason: impl Into<String>) -> Self {
        Verification {
            ok: false,
            failed_step: Some(step),
            reason: Some(reason.into()),
        }
    }
}

/// Re-execute every step of `cert` and re-check both order relations,
/// sealed fix sets, codings and agreement points.
pub fn verify_certificate(cert: &BuildCertificate) -> Verification {
    let end = cert.steps.len();
    if cert.v != CERTIFICATE_VERSION {
        return Verification::fail(0, format!("unsupported certificate version {}", cert.v));
    }
    let group = cert.group;
    let target = match CodingTarget::from_json(&cert.zbar, group) {
        Ok(t) => t,
        Err(e) => return Verification::fail(0, format!("bad coding target: {e}")),
    };
    let mut p = match CodingCondition::from_json(&cert.initial, group) {
        Ok(p) => p,
        Err(e) => return Verification::fail(0, format!("bad initial condition: {e}")),
    };
    let mut attempts: BTreeMap<String, usize> = BTreeMap::new();

    for (i, step) in cert.steps.iter().enumerate() {
        let req = match parse_line(group, &step.requirement) {
            Ok(mut reqs) if reqs.len() == 1 => reqs.remove(0),
            _ => return Verification::fail(i, format!("unreadable requirement `{}`", step.requirement)),
        };
        let attempt = attempts.entry(step.requirement.clone()).or_insert(0);
        *attempt += 1;
        let (q, outcome) = execute(&p, &req, &target, &cert.options, *attempt);
        if outcome != step.outcome {
            return Verification::fail(i, format!("outcome differs on replay: recorded {:?}, got {outcome:?}", step.outcome));
        }
        if digest(&q) != step.digest {
            return Verification::fail(i, "condition digest differs");
        }
        if !coding_leq(&q, &p) {
            return Verification::fail(i, "step is not an extension in the coding order");
        }
        if !leq(&q.base, &p.base, Order::Subword) {
            return Verification::fail(i, "step is not an extension in the subword order");
        }
        if let Outcome::Coded { m, length, .. } = &step.outcome {
            let Requirement::Code { word, length: wanted } = &req else {
                return Verification::fail(i, "coding outcome for a non-coding requirement");
            };
            let chi = target.get(word).and_then(|z| z.prefix(*length));
            let exact = chi.is_some_and(|chi| cert.options.policy.codes(word, &q.base.s, &chi, *m, Mode::Exact));
            if !exact || length < wanted {
                return Verification::fail(i, format!("{word} does not code its stream to length {wanted}"));
            }
        }
        p = q;
    }

    if p.base.s != cert.final_s {
        return Verification::fail(end, "final injection differs");
    }
    for (word, fix) in &cert.sealed {
        let w = match Word::parse(group, word) {
            Ok(w) => w,
            Err(e) => return Verification::fail(end, e.to_string()),
        };
        if fix_set(&w, &cert.final_s) != *fix {
            return Verification::fail(end, format!("fixed points of {word} not frozen"));
        }
    }
    for (word, rec) in &cert.codes {
        let w = match Word::parse(group, word) {
            Ok(w) => w,
            Err(e) => return Verification::fail(end, e.to_string()),
        };
        let chi = target.get(&w).and_then(|z| z.prefix(rec.length));
        if p.params.get(&w) != Some(&rec.m) || !chi.is_some_and(|chi| codes(&w, &cert.final_s, &chi, rec.m, Mode::Plain)) {
            return Verification::fail(end, format!("coding of {word} does not re-verify"));
        }
    }
    for hit in &cert.hits {
        let tau: Target = match hit.target.parse() {
            Ok(t) => t,
            Err(e) => return Verification::fail(end, format!("{e}")),
        };
        if tau.apply(hit.n) != hit.image || cert.final_s.get(hit.n) != Some(hit.image) {
            return Verification::fail(end, format!("no agreement with {} at {}", hit.target, hit.n));
        }
    }
    Verification::pass()
}
