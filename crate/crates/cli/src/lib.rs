//! Command-line front end for `groupgeom`.
//!
//! Every verb builds its whole report in memory, so a failure never
//! leaves a partial report behind. Exit codes: 0 success, 1 mathematical
//! negative, 2 usage or parse error, 3 budget exceeded.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::Context;
use clap::{Parser, ValueEnum};
use groupgeom::finite_groups::format::{parse_group_file_with, GroupFile};
use groupgeom::finite_groups::{ElemId, FiniteGroup, GEmbedding};
use groupgeom::geometry::{
    coordinate_group, geometric_compare, parse_system_file, radical_member_finite, solve_finite, AlgebraicSet,
    SystemFile,
};
use groupgeom::nullstellensatz::{
    consistency_check, containment_sample_check, nsatz_finite_discrepancy, witness_construct, KPresentation,
    VClosure,
};
use groupgeom::words::{parse_word, parse_word_inferring, Word, WordContext};
use groupgeom::{Error, Limits};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Verb {
    Reduce,
    Eval,
    Solve,
    Radical,
    Coordgroup,
    Vclosure,
    Consistency,
    Witness,
    VerifyContainment,
    Compare,
    Discrepancy,
}

#[derive(Clone, Debug, Parser)]
#[command(name = "groupgeom", version, about = "Equations over groups with coefficients in a finite group")]
pub struct RunConfig {
    #[arg(value_enum)]
    pub verb: Verb,
    /// Group file: the model H, and the coefficient group G if named there.
    #[arg(long)]
    pub group: Option<PathBuf>,
    /// Second model for `compare`.
    #[arg(long)]
    pub group2: Option<PathBuf>,
    #[arg(long)]
    pub system: Option<PathBuf>,
    /// A word, or the inequation `f` for `witness`.
    #[arg(long)]
    pub word: Option<String>,
    /// Comma-separated element identifiers or names, for `eval`.
    #[arg(long)]
    pub point: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Sampled closure elements for `verify-containment`.
    #[arg(long, default_value_t = 50)]
    pub budget: usize,
    /// Word-ball radius for `compare` and `discrepancy`.
    #[arg(long, default_value_t = 3)]
    pub max_len: usize,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    /// Enumeration cap on |H|^n.
    #[arg(long)]
    pub cap: Option<u64>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// A finished report and its exit code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub report: String,
    pub code: u8,
}

impl Outcome {
    pub fn emit(&self, path: Option<&Path>) -> anyhow::Result<()> {
        match path {
            Some(p) => std::fs::write(p, &self.report).with_context(|| format!("writing {}", p.display())),
            None => {
                print!("{}", self.report);
                Ok(())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError { code: 2, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded(_) | Error::TooLarge { .. } => 3,
            _ => 2,
        };
        CliError { code, message: e.to_string() }
    }
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::usage(format!("{e:#}"))
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

pub fn run(cfg: &RunConfig) -> CliResult<Outcome> {
    let limits = limits(cfg);
    match cfg.verb {
        Verb::Reduce => cmd_reduce(cfg, &limits),
        Verb::Eval => cmd_eval(cfg, &limits),
        Verb::Solve => cmd_solve(cfg, &limits),
        Verb::Radical => cmd_radical(cfg, &limits),
        Verb::Coordgroup => cmd_coordgroup(cfg, &limits),
        Verb::Vclosure => cmd_vclosure(cfg, &limits),
        Verb::Consistency => cmd_consistency(cfg, &limits),
        Verb::Witness => cmd_witness(cfg, &limits),
        Verb::VerifyContainment => cmd_verify_containment(cfg, &limits),
        Verb::Compare => cmd_compare(cfg, &limits),
        Verb::Discrepancy => cmd_discrepancy(cfg, &limits),
    }
}

fn limits(cfg: &RunConfig) -> Limits {
    let mut limits = Limits::default();
    if let Some(cap) = cfg.cap {
        limits.enumeration_cap = cap;
    }
    limits
}

fn require<'a, T>(value: &'a Option<T>, flag: &str, verb: Verb) -> CliResult<&'a T> {
    value.as_ref().ok_or_else(|| {
        let name = verb.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
        CliError::usage(format!("`{name}` needs --{flag}"))
    })
}

fn file_label(path: &Path) -> String {
    path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned())
}

fn read(path: &Path) -> CliResult<String> {
    Ok(std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?)
}

fn with_file(path: &Path, e: Error) -> CliError {
    let mut err = CliError::from(e);
    err.message = format!("{}: {}", file_label(path), err.message);
    err
}

fn load_groups(path: &Path, limits: &Limits) -> CliResult<GroupFile> {
    let groups = parse_group_file_with(&read(path)?, limits).map_err(|e| with_file(path, e))?;
    if groups.groups.is_empty() {
        return Err(CliError::usage(format!("{}: no groups declared", file_label(path))));
    }
    Ok(groups)
}

fn load_system(path: &Path, groups: Option<&GroupFile>) -> CliResult<SystemFile> {
    let text = read(path)?;
    parse_system_file(&text, |name| groups.and_then(|g| g.group(name)).cloned()).map_err(|e| with_file(path, e))
}

fn parse_cli_word(text: &str, ctx: &WordContext) -> CliResult<Word> {
    parse_word(text, ctx).map_err(|e| CliError::usage(format!("--word {e}")))
}

/// The model `(H, λ)`: the target of an embedding declared from the
/// coefficient group, else the coefficient group itself, else the first
/// group of the file.
struct Model {
    h: Arc<FiniteGroup>,
    lambda: GEmbedding,
    label: String,
}

fn resolve_model(groups: &GroupFile, system: &SystemFile, path: &Path) -> CliResult<Model> {
    let file = file_label(path);
    match &system.coeff_name {
        None => {
            let h = groups.primary().expect("checked nonempty").clone();
            let label = format!("{} (order {}) from {file}; embedding trivial", h.name(), h.order());
            Ok(Model { lambda: GEmbedding::trivial(&h), h, label })
        }
        Some(g) => {
            let target = groups.embeddings.iter().find(|e| &e.source == g).map_or(g.as_str(), |e| e.target.as_str());
            let h = groups
                .group(target)
                .ok_or_else(|| CliError::usage(format!("{file}: no group named {target}")))?
                .clone();
            let lambda = groups.embedding(g, target).map_err(|e| with_file(path, e))?;
            let how = if target == g { "identity".to_string() } else { format!("{g} -> {target}") };
            let label = format!("{} (order {}) from {file}; embedding {how}", h.name(), h.order());
            Ok(Model { h, lambda, label })
        }
    }
}

struct Header<'a> {
    title: &'a str,
    cfg: &'a RunConfig,
    limits: &'a Limits,
    system: Option<&'a SystemFile>,
    lines: Vec<(&'static str, String)>,
}

impl Header<'_> {
    fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "== {} ==", self.title).unwrap();
        if let (Some(sys), Some(path)) = (self.system, &self.cfg.system) {
            writeln!(out, "system-file: {}", file_label(path)).unwrap();
            writeln!(out, "system: {}", sys.system).unwrap();
            writeln!(out, "vars: {}", sys.system.var_count()).unwrap();
            writeln!(out, "coeff: {}", sys.coeff_name.as_deref().unwrap_or("none")).unwrap();
            writeln!(out, "variety: {}", sys.variety).unwrap();
        }
        for (k, v) in &self.lines {
            writeln!(out, "{k}: {v}").unwrap();
        }
        writeln!(out, "seed: {}", self.cfg.seed).unwrap();
        writeln!(
            out,
            "caps: order {}, enumeration {}, ball {}",
            self.limits.order_cap, self.limits.enumeration_cap, self.limits.ball_cap
        )
        .unwrap();
        out.push_str("--\n");
        out
    }
}

fn format_tuple(h: &FiniteGroup, t: &[ElemId]) -> String {
    let parts: Vec<String> = t.iter().map(|&a| h.element_name(a)).collect();
    format!("({})", parts.join(", "))
}

fn cmd_reduce(cfg: &RunConfig, limits: &Limits) -> CliResult<Outcome> {
    let text = require(&cfg.word, "word", cfg.verb)?;
    let coeff = match &cfg.group {
        Some(p) => Some(load_groups(p, limits)?.primary().expect("nonempty").clone()),
        None => None,
    };
    let w = parse_word_inferring(text, coeff).map_err(|e| CliError::usage(format!("--word {e}")))?;
    Ok(Outcome { report: format!("{w}\n"), code: 0 })
}

fn parse_point(text: &str, h: &FiniteGroup) -> CliResult<Vec<ElemId>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|tok| {
            let tok = tok.trim();
            if let Some(names) = h.names() {
                if let Some(i) = names.iter().position(|n| n == tok) {
                    return Ok(i as ElemId);
                }
            }
            match tok.parse::<ElemId>() {
                Ok(a) if (a as usize) < h.order() => Ok(a),
                _ => Err(CliError::usage(format!("--point: `{tok}` is not an element of {}", h.name()))),
            }
        })
        .collect()
}

fn cmd_eval(cfg: &RunConfig, limits: &Limits) -> CliResult<Outcome> {
    let text = require(&cfg.word, "word", cfg.verb)?;
    let path = require(&cfg.group, "group", cfg.verb)?;
    let point_text = require(&cfg.point, "point", cfg.verb)?;
    let h = load_groups(path, limits)?.primary().expect("nonempty").clone();
    let point = parse_point(point_text, &h)?;
    let ctx = WordContext::new(point.len(), Some(h.clone()));
    let w = parse_cli_word(text, &ctx)?;
    let value = w.evaluate(&point, &h, &GEmbedding::identity(&h))?;
    Ok(Outcome { report: format!("{}\n", h.element_name(value)), code: 0 })
}

struct Loaded {
    system: SystemFile,
    model: Option<Model>,
}

fn load(cfg: &RunConfig, limits: &Limits, need_model: bool) -> CliResult<Loaded> {
    let sys_path = require(&cfg.system, "system", cfg.verb)?;
    let groups = match &cfg.group {
        Some(p) => Some(load_groups(p, limits)?),
        None if need_model => return Err(require(&cfg.group, "group", cfg.verb).unwrap_err()),
        None => None,
    };
    let system = load_system(sys_path, groups.as_ref())?;
    let model = match (&groups, &cfg.group) {
        (Some(g), Some(p)) if need_model => Some(resolve_model(g, &system, p)?),
        _ => None,
    };
    Ok(Loaded { system, model })
}

fn solve(loaded: &Loaded, cfg: &RunConfig, limits: &Limits) -> CliResult<AlgebraicSet> {
    let m = loaded.model.as_ref().expect("model loaded");
    Ok(solve_finite(&loaded.system.system, &m.h, &m.lambda, limits, cfg.workers)?)
}

fn cmd_solve(cfg: &RunConfig, limits: &Limits) -> CliResult<Outcome> {
    let loaded = load(cfg, limits, true)?;
    let set = solve(&loaded, cfg, limits)?;
    let m = loaded.model.as_ref().unwrap();
    let header = Header {
        title: "V_H(S): algebraic set",
        cfg,
        limits,
        system: Some(&loaded.system),
        lines: vec![("model", m.label.clone()), ("workers", cfg.workers.to_string())],
    };
    let mut out = header.render();
    for p in set.points() {
        writeln!(out, "point {}", format_tuple(&m.h, p)).unwrap();
    }
    writeln!(out, "count {}", set.len()).unwrap();
    Ok(Outcome { report: out, code: 0 })
}

fn cmd_radical(cfg: &RunConfig, limits: &Limits) -> CliResult<Outcome> {
    let text = require(&cfg.word, "word", cfg.verb)?;
    let loaded = load(cfg, limits, true)?;
    let w = parse_cli_word(text, loaded.system.system.context())?;
    let set = solve(&loaded, cfg, limits)?;
    let verdict = radical_member_finite(&w, &set)?;
    let m = loaded.model.as_ref().unwrap();
    let header = Header {
        title: "Rad_H(S): radical membership",
        cfg,
        limits,
        system: Some(&loaded.system),
        lines: vec![("model", m.label.clone()), ("word", w.to_string())],
    };
    let mut out = header.render();
    writeln!(out, "solutions {}", set.len()).unwrap();
    if verdict.degenerate {
        out.push_str("degenerate V_H(S) is empty, so Rad_H(S) is all of G[X]\n");
    }
    if let Some(p) = &verdict.violating_point {
        let value = w.evaluate(p, &m.h, &m.lambda)?;
        writeln!(out, "violated-at {} value {}", format_tuple(&m.h, p), m.h.element_name(value)).unwrap();
    }
    writeln!(out, "verdict {}", if verdict.member { "MEMBER" } else { "NOT-MEMBER" }).unwrap();
    Ok(Outcome { report: out, code: if verdict.member { 0 } else { 1 } })
}

fn cmd_coordgroup(cfg: &RunConfig, limits: &Limits) -> CliResult<Outcome> {
    let loaded = load(cfg, limits, true)?;
    let set = solve(&loaded, cfg, limits)?;
    let m = loaded.model.as_ref().unwrap();
    let header = Header {
        title: "Γ_H(S) = G[X]/Rad_H(S): coordinate group",
        cfg,
        limits,
        system: Some(&loaded.system),
        lines: vec![("model", m.label.clone())],
    };
    let mut out = header.render();
    writeln!(out, "solutions {}", set.len()).unwrap();
    let gamma = match coordinate_group(&set, limits) {
        Err(Error::EmptyAlgebraicSet) => {
            out.push_str("verdict DEGENERATE V_H(S) is empty and Γ_H(S) is undefined\n");
            return Ok(Outcome { report: out, code: 1 });
        }
        other => other?,
    };
    for (label, t) in gamma.generator_labels.iter().zip(&gamma.generators) {
        writeln!(out, "generator {label} = {}", format_tuple(&m.h, t)).unwrap();
    }
    writeln!(out, "order {}", gamma.order()).unwrap();
    writeln!(out, "structure {}", gamma.closure.group.fingerprint_summary()).unwrap();
    Ok(Outcome { report: out, code: 0 })
}

fn closure_header<'a>(cfg: &'a RunConfig, limits: &'a Limits, loaded: &'a Loaded, title: &'a str) -> Header<'a> {
    Header { title, cfg, limits, system: Some(&loaded.system), lines: Vec::new() }
}

fn cmd_vclosure(cfg: &RunConfig, limits: &Limits) -> CliResult<Outcome> {
    let text = require(&cfg.word, "word", cfg.verb)?;
    let loaded = load(cfg, limits, false)?;
    let sys = &loaded.system;
    let w = parse_cli_word(text, sys.system.context())?;
    let closure = VClosure::new(&sys.system, &sys.variety)?;
    let cert = closure.decide(&w)?;
    let mut header = closure_header(cfg, limits, &loaded, "⟨S^{G[X]}⟩·Id_V(X): verbal closure membership");
    header.lines.push(("word", w.to_string()));
    let mut out = header.render();
    match cert {
        Some(cert) => {
            out.push_str("verdict MEMBER\n");
            for line in cert.lines() {
                writeln!(out, "{line}").unwrap();
            }
            let ok = cert.verify(&w, &sys.system, &sys.variety)?;
            writeln!(out, "certificate {}", if ok { "verified" } else { "FAILED" }).unwrap();
            Ok(Outcome { report: out, code: if ok { 0 } else { 2 } })
        }
        None => {
            out.push_str("verdict NOT-MEMBER\n");
            Ok(Outcome { report: out, code: 1 })
        }
    }
}

fn cmd_consistency(cfg: &RunConfig, limits: &Limits) -> CliResult<Outcome> {
    let loaded = load(cfg, limits, false)?;
    let consistent = consistency_check(&loaded.system.system, &loaded.system.variety)?;
    let header = closure_header(cfg, limits, &loaded, "⟨S^{G[X]}⟩·Id_V(X) ∩ G = 1: consistency");
    let mut out = header.render();
    writeln!(out, "verdict {}", if consistent { "CONSISTENT" } else { "INCONSISTENT" }).unwrap();
    Ok(Outcome { report: out, code: if consistent { 0 } else { 1 } })
}

fn cmd_witness(cfg: &RunConfig, limits: &Limits) -> CliResult<Outcome> {
    let text = require(&cfg.word, "word", cfg.verb)?;
    let loaded = load(cfg, limits, false)?;
    let sys = &loaded.system;
    let f = parse_cli_word(text, sys.system.context())?;
    let mut header = closure_header(cfg, limits, &loaded, "witness: b solving S with f(b) != 1 in K = F_V(X)/Q");
    header.lines.push(("f", f.to_string()));
    let mut out = header.render();
    let report = match witness_construct(&sys.system, &f, &sys.variety) {
        Err(Error::NotOutsideClosure) => {
            out.push_str("verdict NO-WITNESS f lies in ⟨S^{G[X]}⟩·Id_V(X)\n");
            return Ok(Outcome { report: out, code: 1 });
        }
        Err(Error::Inconsistent) => {
            out.push_str("verdict NO-WITNESS S is inconsistent in V\n");
            return Ok(Outcome { report: out, code: 1 });
        }
        other => other?,
    };
    // class-2 values are Mal'cev representatives of their cosets
    let (trivial, mark) = match &report.presentation {
        KPresentation::Abelian { .. } => ("0", ""),
        KPresentation::Class2 { .. } => ("1", " = 1 in K"),
    };
    writeln!(out, "K = {}", report.presentation.describe()).unwrap();
    writeln!(out, "b = ({})", report.presentation.solution_strings().join(", ")).unwrap();
    for (i, v) in report.equation_values.iter().enumerate() {
        writeln!(out, "w{}(b) = {v}{mark}", i + 1).unwrap();
    }
    writeln!(out, "f(b) = {} != {trivial}", report.inequation_value).unwrap();
    let ok = report.validate()?;
    writeln!(out, "validated {}", if ok { "yes" } else { "NO" }).unwrap();
    Ok(Outcome { report: out, code: if ok { 0 } else { 2 } })
}

fn cmd_verify_containment(cfg: &RunConfig, limits: &Limits) -> CliResult<Outcome> {
    let loaded = load(cfg, limits, true)?;
    let m = loaded.model.as_ref().unwrap();
    let sys = &loaded.system;
    let r = containment_sample_check(&sys.system, &sys.variety, &m.h, &m.lambda, cfg.budget, cfg.seed, limits)?;
    let header = Header {
        title: "⟨S^{G[X]}⟩·Id_V(X) ⊆ Rad_H(S): sampled containment",
        cfg,
        limits,
        system: Some(sys),
        lines: vec![("model", m.label.clone()), ("budget", cfg.budget.to_string())],
    };
    let mut out = header.render();
    writeln!(out, "solutions {}", r.points).unwrap();
    writeln!(out, "cases {}", r.cases_run).unwrap();
    for f in &r.failures {
        writeln!(out, "failure {} at {} value {}", f.word, format_tuple(&m.h, &f.point), m.h.element_name(f.value))
            .unwrap();
    }
    writeln!(out, "failures {}", r.failures.len()).unwrap();
    writeln!(out, "verdict {}", if r.passed() { "CONTAINED" } else { "VIOLATED" }).unwrap();
    Ok(Outcome { report: out, code: if r.passed() { 0 } else { 1 } })
}

fn cmd_compare(cfg: &RunConfig, limits: &Limits) -> CliResult<Outcome> {
    let loaded = load(cfg, limits, true)?;
    let path2 = require(&cfg.group2, "group2", cfg.verb)?;
    let groups2 = load_groups(path2, limits)?;
    let m2 = resolve_model(&groups2, &loaded.system, path2)?;
    let m = loaded.model.as_ref().unwrap();
    let a = solve(&loaded, cfg, limits)?;
    let b = solve_finite(&loaded.system.system, &m2.h, &m2.lambda, limits, cfg.workers)?;
    let r = geometric_compare(&a, &b, cfg.max_len, limits)?;
    let header = Header {
        title: "Rad_H(S) vs Rad_H'(S): radical comparison on a word ball",
        cfg,
        limits,
        system: Some(&loaded.system),
        lines: vec![
            ("model H", m.label.clone()),
            ("model H'", m2.label.clone()),
            ("max-len", cfg.max_len.to_string()),
            ("note", "agreement on the ball does not prove geometric equivalence".into()),
        ],
    };
    let mut out = header.render();
    let yn = |b: bool| if b { "in" } else { "out" };
    for d in &r.disagreements {
        writeln!(out, "disagree {} H:{} H':{}", d.word, yn(d.in_first), yn(d.in_second)).unwrap();
    }
    writeln!(out, "words-tested {}", r.words_tested).unwrap();
    writeln!(out, "disagreements {}", r.disagreements.len()).unwrap();
    let agree = r.disagreements.is_empty();
    writeln!(out, "verdict {}", if agree { "AGREE-ON-BALL" } else { "DIFFERENT" }).unwrap();
    Ok(Outcome { report: out, code: if agree { 0 } else { 1 } })
}

fn cmd_discrepancy(cfg: &RunConfig, limits: &Limits) -> CliResult<Outcome> {
    let loaded = load(cfg, limits, true)?;
    let m = loaded.model.as_ref().unwrap();
    let sys = &loaded.system;
    let list = nsatz_finite_discrepancy(&sys.system, &sys.variety, &m.h, &m.lambda, cfg.max_len, limits)?;
    let header = Header {
        title: "Rad_H(S) vs ⟨S^{G[X]}⟩·Id_V(X): finite-model discrepancy",
        cfg,
        limits,
        system: Some(sys),
        lines: vec![("model", m.label.clone()), ("max-len", cfg.max_len.to_string())],
    };
    let mut out = header.render();
    let yn = |b: bool| if b { "yes" } else { "no" };
    for d in &list {
        writeln!(out, "word {} radical {} closure {}", d.word, yn(d.in_radical), yn(d.in_closure)).unwrap();
    }
    writeln!(out, "discrepancies {}", list.len()).unwrap();
    Ok(Outcome { report: out, code: 0 })
}
