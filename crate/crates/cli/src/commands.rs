use std::path::Path;

use cofin_core::builder::{self, BuildCertificate, BuildOptions};
use cofin_core::coding::{gprime_violation, CodingPolicy, CodingTarget, Mode};
use cofin_core::discrete::{self, Instance, Vertex};
use cofin_core::injection::{eval_word, fix_set, path};
use cofin_core::streams::BitStream;
use cofin_core::trees::{self, SetDesc, TreeDesc};
use cofin_core::zhang::{domain_extend, Condition, Direction};
use cofin_core::{FixSet, GroundGroup, PartialInjection, Word};
use serde_json::{json, Value};

use crate::config::Config;
use crate::{
    CodeOp, Command, DirectionArg, DiscreteOp, Failure, IdealOp, ModeArg, Report, StarArg, WordOp,
};
use crate::Cli;

type Res<T> = Result<T, Failure>;

pub fn load_settings(cli: &Cli) -> Res<Config> {
    let group = cli
        .group
        .as_deref()
        .map(|g| g.parse::<GroundGroup>().map_err(|e| Failure::usage("--group", e)))
        .transpose()?;
    match &cli.config {
        None => Ok(Config { group: group.unwrap_or(Config::default().group), ..Config::default() }),
        Some(file) => {
            let text = read(file, "--config")?;
            Config::parse(&text, group).map_err(|e| Failure::usage("--config", e))
        }
    }
}

fn read(file: &Path, flag: &str) -> Res<String> {
    std::fs::read_to_string(file).map_err(|e| Failure::usage(flag, format!("{}: {e}", file.display())))
}

fn word(cfg: &Config, flag: &str, s: &str) -> Res<Word> {
    Word::parse(cfg.group, s).map_err(|e| Failure::usage(flag, e))
}

fn injection(s: &str) -> Res<PartialInjection> {
    s.parse().map_err(|e| Failure::usage("--s", e))
}

fn tree(flag: &str, s: &str) -> Res<TreeDesc> {
    s.parse().map_err(|e| Failure::usage(flag, e))
}

fn set(flag: &str, s: &str) -> Res<SetDesc> {
    s.parse().map_err(|e| Failure::usage(flag, e))
}

fn ok(json: Value, text: impl Into<String>) -> Res<Report> {
    Ok(Report { json, text: text.into(), failed: false })
}

fn with_v(mut value: Value) -> Value {
    if let Value::Object(map) = &mut value {
        map.insert("v".into(), json!(1));
    }
    value
}

fn fix_text(f: &FixSet) -> String {
    match f {
        FixSet::All => "all".into(),
        FixSet::Finite(set) => format!("{{{}}}", set.iter().map(u64::to_string).collect::<Vec<_>>().join(",")),
    }
}

fn opt_text<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or("undefined".into(), T::to_string)
}

pub fn dispatch(command: &Command, cfg: &Config) -> Res<Report> {
    match command {
        Command::Word(op) => word_op(op, cfg),
        Command::Eval { word: w, s, m } => {
            let w = word(cfg, "WORD", w)?;
            let value = eval_word(&w, &injection(s)?, *m);
            ok(json!({"v": 1, "word": w.to_string(), "m": m, "value": value}), opt_text(&value))
        }
        Command::Fix { word: w, s } => {
            let w = word(cfg, "WORD", w)?;
            let fix = fix_set(&w, &injection(s)?);
            ok(json!({"v": 1, "word": w.to_string(), "fix": fix}), fix_text(&fix))
        }
        Command::Path { word: w, s, m, budget } => {
            let w = word(cfg, "WORD", w)?;
            let p = path(&w, &injection(s)?, *m, *budget);
            let text = format!(
                "{} ({:?})",
                p.values.iter().map(u64::to_string).collect::<Vec<_>>().join(" -> "),
                p.end
            );
            ok(with_v(serde_json::to_value(&p).expect("path serializes")), text)
        }
        Command::Extend { direction, s, words, n } => {
            let words = words
                .iter()
                .filter(|w| !w.trim().is_empty())
                .map(|w| word(cfg, "--F", w))
                .collect::<Res<Vec<_>>>()?;
            let p = Condition::new(injection(s)?, words).map_err(Failure::domain)?;
            let dir = match direction {
                DirectionArg::Domain => Direction::Domain,
                DirectionArg::Range => Direction::Range,
            };
            let (q, nprime) = domain_extend(&p, *n, dir).map_err(Failure::domain)?;
            let text = format!("n' = {nprime}\ns = {}", q.s);
            ok(json!({"v": 1, "nprime": nprime, "condition": q.to_json()}), text)
        }
        Command::Build { script, code, options, out } => {
            let text = read(script, "SCRIPT")?;
            let reqs = builder::parse_script(cfg.group, &text).map_err(|e| Failure::usage("SCRIPT", e))?;
            let mut streams: Vec<(Word, BitStream)> = cfg.target.iter().map(|(w, z)| (w.clone(), z.clone())).collect();
            for entry in code {
                let (w, z) = entry
                    .split_once('=')
                    .ok_or_else(|| Failure::usage("--code", format!("expected WORD=STREAM, got `{entry}`")))?;
                let z = z.parse::<BitStream>().map_err(|e| Failure::usage("--code", e))?;
                streams.push((word(cfg, "--code", w)?, z));
            }
            let target = CodingTarget::new(streams).map_err(|e| Failure::usage("--code", e))?;
            let opts: BuildOptions = match options {
                None => BuildOptions::default(),
                Some(f) => serde_json::from_str(&read(f, "--options")?).map_err(|e| Failure::usage("--options", e))?,
            };
            let result = builder::run(cfg.group, &target, &reqs, &opts);
            let cert = serde_json::to_string(&result.certificate).expect("certificate serializes");
            if let Some(out) = out {
                std::fs::write(out, &cert).map_err(|e| Failure::usage("--out", e))?;
            }
            let c = &result.certificate;
            let text = format!(
                "{} steps, {} failed requirement(s)\nsigma = {}\nsealed: {}\ncodes: {}\nhits: {}",
                c.steps.len(),
                c.failed.len(),
                result.sigma,
                c.sealed.len(),
                c.codes.len(),
                c.hits.len()
            );
            Ok(Report { json: serde_json::from_str(&cert).expect("round trip"), text, failed: false })
        }
        Command::Verify { certificate } => {
            let cert: BuildCertificate = serde_json::from_str(&read(certificate, "CERTIFICATE")?)
                .map_err(|e| Failure::usage("CERTIFICATE", e))?;
            let v = builder::verify_certificate(&cert);
            let text = match (&v.failed_step, &v.reason) {
                _ if v.ok => "certificate ok".to_string(),
                (step, reason) => format!("rejected at step {}: {}", opt_text(step), opt_text(reason)),
            };
            Ok(Report { json: with_v(serde_json::to_value(&v).expect("verification serializes")), text, failed: !v.ok })
        }
        Command::Code(op) => code_op(op, cfg),
        Command::Ideal(op) => ideal_op(op),
        Command::Discrete(op) => discrete_op(op),
    }
}

fn word_op(op: &WordOp, cfg: &Config) -> Res<Report> {
    match op {
        WordOp::Normalize { word: w } => {
            let w = word(cfg, "WORD", w)?;
            let text = if w.is_empty() { "1 (empty word)".to_string() } else { w.to_string() };
            ok(
                json!({"v": 1, "word": w.to_string(), "letters": w.len(), "blocks": w.block_length(), "empty": w.is_empty()}),
                text,
            )
        }
        WordOp::Shifts { word: w } => {
            let w = word(cfg, "WORD", w)?;
            let shifts: Vec<String> = w.circular_shifts().iter().map(Word::to_string).collect();
            let text = shifts.join("\n");
            ok(json!({"v": 1, "word": w.to_string(), "shifts": shifts}), text)
        }
        WordOp::Conjugate { word: w } => {
            let w = word(cfg, "WORD", w)?;
            match w.proper_conjugate_subword() {
                None => ok(
                    json!({"v": 1, "word": w.to_string(), "conjugated": false}),
                    "no proper conjugated subword",
                ),
                Some((conj, core)) => ok(
                    json!({"v": 1, "word": w.to_string(), "conjugated": true, "conjugator": conj.to_string(), "core": core.to_string()}),
                    format!("conjugator {conj}, core {core}"),
                ),
            }
        }
    }
}

fn code_op(op: &CodeOp, cfg: &Config) -> Res<Report> {
    let policy = CodingPolicy::default();
    match op {
        CodeOp::Gprime { word: w } => {
            let w = word(cfg, "WORD", w)?;
            let reason = gprime_violation(&w);
            let text = match &reason {
                None => "coding word".to_string(),
                Some(r) => format!("not a coding word: {r}"),
            };
            ok(json!({"v": 1, "word": w.to_string(), "gprime": reason.is_none(), "reason": reason}), text)
        }
        CodeOp::Check { word: w, s, m, bits, mode } => {
            let w = word(cfg, "WORD", w)?;
            let chi = match bits.parse::<BitStream>().map_err(|e| Failure::usage("--bits", e))? {
                BitStream::Finite(b) => b,
                other => return Err(Failure::usage("--bits", format!("`{other}` is not a finite bit string"))),
            };
            let mode = match mode {
                ModeArg::Plain => Mode::Plain,
                ModeArg::Exact => Mode::Exact,
            };
            let codes = policy.codes(&w, &injection(s)?, &chi, *m, mode);
            ok(json!({"v": 1, "word": w.to_string(), "m": m, "mode": mode, "codes": codes}), codes.to_string())
        }
        CodeOp::Length { word: w, s, m, stream } => {
            let w = word(cfg, "WORD", w)?;
            let z = match stream {
                Some(z) => z.parse::<BitStream>().map_err(|e| Failure::usage("--stream", e))?,
                None => cfg
                    .target
                    .get(&w)
                    .cloned()
                    .ok_or_else(|| Failure::usage("--stream", format!("no stream given and no config target for {w}")))?,
            };
            let length = policy.exact_code_length(&w, &injection(s)?, *m, &z);
            ok(json!({"v": 1, "word": w.to_string(), "m": m, "stream": z.to_string(), "length": length}), opt_text(&length))
        }
        CodeOp::Parity { arity, bound, span } => {
            if *arity == 0 || *arity > 8 {
                return Err(Failure::usage("--arity", "expected 1..=8"));
            }
            let report = cofin_core::coding::check_parity_hypothesis(cfg.group, *arity, *bound, *span);
            let failures = report.failures().count();
            let text = format!(
                "{} patterns over {} for m < {}, {} without a witness",
                report.patterns.len(),
                report.group,
                report.bound,
                failures
            );
            ok(with_v(serde_json::to_value(&report).expect("report serializes")), text)
        }
    }
}

fn ideal_op(op: &IdealOp) -> Res<Report> {
    match op {
        IdealOp::Member { tree: t, set: x } => {
            let (t, x) = (tree("--tree", t)?, set("--set", x)?);
            let member = trees::ideal_member(&x, &t);
            ok(json!({"v": 1, "tree": t.to_string(), "set": x.to_string(), "member": member}), member.to_string())
        }
        IdealOp::Rank { tree: t } => {
            let t = tree("--tree", t)?;
            let rank = t.rank();
            ok(json!({"v": 1, "tree": t.to_string(), "rank": rank}), rank.to_string())
        }
        IdealOp::Embed { from, to } => {
            let (s, t) = (tree("--from", from)?, tree("--to", to)?);
            let e = trees::embeds(&s, &t);
            let text = match &e {
                None => "no embedding found".to_string(),
                Some(e) => serde_json::to_string(e).expect("embedding serializes"),
            };
            ok(json!({"v": 1, "from": s.to_string(), "to": t.to_string(), "embedding": e}), text)
        }
        IdealOp::Star { direction, from, to, set: a } => {
            let (s, t, a) = (tree("--from", from)?, tree("--to", to)?, set("--set", a)?);
            let e = trees::embeds(&s, &t).ok_or_else(|| Failure::domain(format!("{s} does not embed into {t}")))?;
            let image = match direction {
                StarArg::Up => trees::star_up(&a, &s, &e),
                StarArg::Down => trees::star_down(&a, &s, &t, &e),
            }
            .map_err(Failure::domain)?;
            ok(json!({"v": 1, "set": a.to_string(), "image": image.to_string()}), image.to_string())
        }
        IdealOp::Transfer { from, to, sets } => {
            let (s, t) = (tree("--from", from)?, tree("--to", to)?);
            let family = sets.iter().map(|x| set("--set", x)).collect::<Res<Vec<_>>>()?;
            let e = trees::embeds(&s, &t).ok_or_else(|| Failure::domain(format!("{s} does not embed into {t}")))?;
            let images = family
                .iter()
                .map(|a| trees::star_up(a, &s, &e))
                .collect::<Result<Vec<_>, _>>()
                .map_err(Failure::domain)?;
            let ad_source = trees::is_ad_family(&family, &s);
            let ad_target = trees::is_ad_family(&images, &t);
            let names: Vec<String> = images.iter().map(SetDesc::to_string).collect();
            let text = format!("{}\nalmost disjoint: source {ad_source}, image {ad_target}", names.join("\n"));
            ok(json!({"v": 1, "images": names, "ad_source": ad_source, "ad_target": ad_target}), text)
        }
    }
}

fn vertices(g: &Instance, raw: &[String]) -> Res<Vec<Vertex>> {
    raw.iter().map(|v| g.parse_vertex(v).map_err(|e| Failure::usage("VERTICES", e))).collect()
}

fn instance(s: &str) -> Res<Instance> {
    s.parse().map_err(|e| Failure::usage("--instance", e))
}

fn discrete_op(op: &DiscreteOp) -> Res<Report> {
    match op {
        DiscreteOp::Check { instance: g, vertices: vs } => {
            let g = instance(g)?;
            let d = vertices(&g, vs)?;
            let r = discrete::is_discrete(&d, &g).map_err(Failure::domain)?;
            ok(json!({"v": 1, "instance": g, "discrete": r}), r.to_string())
        }
        DiscreteOp::Caught { instance: g, vertex, vertices: vs } => {
            let g = instance(g)?;
            let x = g.parse_vertex(vertex).map_err(|e| Failure::usage("--vertex", e))?;
            let c = vertices(&g, vs)?;
            let r = discrete::caught(&x, &c, &g).map_err(Failure::domain)?;
            ok(json!({"v": 1, "instance": g, "caught": r}), r.to_string())
        }
        DiscreteOp::Greedy { instance: g, vertices: vs } => {
            let g = instance(g)?;
            let pool = vertices(&g, vs)?;
            let kept = discrete::greedy_maximal(&pool, &g).map_err(Failure::domain)?;
            let text = kept.iter().map(Vertex::to_string).collect::<Vec<_>>().join("\n");
            ok(json!({"v": 1, "instance": g, "kept": kept}), text)
        }
    }
}
