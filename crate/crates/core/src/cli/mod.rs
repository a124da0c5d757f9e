//! Config-driven runs: declared fields, extensions, characters and
//! embeddings, a list of tasks, and JSON or markdown reports.

pub mod config;
pub mod literal;
pub mod tasks;

use std::fmt::Write as _;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

pub use config::{Context, RunConfig, TaskDecl, TaskKind};
pub use tasks::{Check, TaskOptions, TaskResult};

use crate::additive::a1_from_subgroup;
use crate::error::{Error, Result};
use crate::series_arith::ResidueField;

pub const BUILTIN_CORPUS: &str = include_str!("corpus.toml");

pub fn builtin_corpus() -> RunConfig {
    RunConfig::from_toml(BUILTIN_CORPUS).expect("built-in corpus parses")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TaskReport {
    pub index: usize,
    pub kind: String,
    pub subject: String,
    pub status: Status,
    pub precision: i64,
    pub retried: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error_kind: Option<String>,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<TaskResult>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub precision: i64,
    pub passed: bool,
    pub tasks: Vec<TaskReport>,
}

#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    pub precision: Option<i64>,
    /// Retry a task once at twice the precision when it runs out.
    pub retry: bool,
    pub task: TaskOptions,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { precision: None, retry: true, task: TaskOptions::default() }
    }
}

pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Field(_) => "field",
        Error::NotIrreducible(_) => "not-irreducible",
        Error::ZeroDenominator => "zero-denominator",
        Error::DivisionByZero => "division-by-zero",
        Error::InsufficientPrecision(_) => "insufficient-precision",
        Error::HenselFails(_) => "hensel-fails",
        Error::NotEisenstein(_) => "not-eisenstein",
        Error::NotSplit(_) => "not-split",
        Error::NotAGroup(_) => "not-a-group",
        Error::NotAbelian => "not-abelian",
        Error::TameExtension => "tame-extension",
        Error::NotAdditive(_) => "not-additive",
        Error::SingularMoore => "singular-moore",
        Error::NotSingleBreak => "not-single-break",
        Error::DiagramMismatch(_) => "diagram-mismatch",
        Error::NoSolution(_) => "no-solution",
        Error::UnramifiedCharacter => "unramified-character",
        Error::FierceCharacter => "fierce-character",
        Error::Mismatch(_) => "mismatch",
        Error::RamifiedEmbedding(_) => "ramified-embedding",
        Error::UnsupportedResiduePresentation(_) => "unsupported-residue-presentation",
        Error::NotInBase(_) => "not-in-base",
        Error::Parse(_) => "parse",
        Error::Config(_) => "config",
    }
}

fn task_report(index: usize, t: &TaskDecl, precision: i64, retried: bool, out: Result<(TaskResult, Vec<Check>)>) -> TaskReport {
    let (status, error, error_kind, checks, result) = match out {
        Ok((r, checks)) => {
            let status = if checks.iter().all(|c| c.passed) { Status::Pass } else { Status::Fail };
            (status, None, None, checks, Some(r))
        }
        Err(e) => (Status::Error, Some(e.to_string()), Some(error_kind(&e).to_string()), Vec::new(), None),
    };
    TaskReport { index, kind: t.kind.name().into(), subject: t.subject(), status, precision, retried, error, error_kind, checks, result }
}

/// Runs every task. Tasks run in parallel; the report lists them in
/// declaration order. Only configuration problems are returned as errors.
pub fn run(cfg: &RunConfig, opts: &RunOptions) -> Result<Report> {
    let ctx = Context::build(cfg, opts.precision)?;
    let doubled: OnceLock<Result<Context>> = OnceLock::new();
    let tasks: Vec<TaskReport> = cfg
        .tasks
        .par_iter()
        .enumerate()
        .map(|(i, t)| {
            let out = tasks::run_task(&ctx, t, opts.task);
            match out {
                Err(e) if e.is_precision() && opts.retry => {
                    let ctx2 = doubled.get_or_init(|| Context::build(cfg, Some(2 * ctx.precision)));
                    match ctx2 {
                        Ok(c2) => task_report(i, t, c2.precision, true, tasks::run_task(c2, t, opts.task)),
                        Err(e2) => task_report(i, t, 2 * ctx.precision, true, Err(e2.clone())),
                    }
                }
                out => task_report(i, t, ctx.precision, false, out),
            }
        })
        .collect();
    let passed = tasks.iter().all(|t| t.status == Status::Pass);
    Ok(Report { precision: ctx.precision, passed, tasks })
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let verdict = if self.passed { "pass" } else { "FAIL" };
        let _ = writeln!(out, "# ramify report\n\nprecision: {}, overall: {verdict}\n", self.precision);
        for t in &self.tasks {
            let _ = writeln!(out, "## {}. {} {}\n", t.index + 1, t.kind, t.subject);
            let _ = writeln!(out, "- status: {}", t.status.name());
            let _ = writeln!(out, "- precision: {}{}", t.precision, if t.retried { " (retried)" } else { "" });
            if let Some(e) = &t.error {
                let _ = writeln!(out, "- error: {e}");
            }
            if !t.checks.is_empty() {
                let _ = writeln!(out, "\n| check | result | detail |\n|---|---|---|");
                for c in &t.checks {
                    let mark = if c.passed { "pass" } else { "FAIL" };
                    let _ = writeln!(out, "| {} | {mark} | {} |", c.name, c.detail.as_deref().unwrap_or(""));
                }
            }
            if let Some(r) = &t.result {
                out.push('\n');
                let value = serde_json::to_value(r).expect("results serialize");
                render_value(&mut out, &value, 0);
            }
            out.push('\n');
        }
        out
    }

    /// The Herbrand function of every breaks task as rows
    /// task,subject,x,phi,slope_right.
    pub fn herbrand_csv(&self) -> String {
        let mut out = String::from("task,subject,x,phi,slope_right\n");
        for t in &self.tasks {
            let breaks = match &t.result {
                Some(TaskResult::Breaks(b)) => b,
                Some(TaskResult::Verify(v)) => match &v.breaks {
                    Some(b) => b,
                    None => continue,
                },
                _ => continue,
            };
            for s in &breaks.herbrand {
                let _ = writeln!(out, "{},{},{},{},{}", t.index, t.subject, s.from, s.phi, s.slope);
            }
        }
        out
    }
}

fn render_value(out: &mut String, v: &serde_json::Value, depth: usize) {
    use serde_json::Value;
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match x {
                    Value::Object(_) => {
                        let _ = writeln!(out, "{pad}- {k}:");
                        render_value(out, x, depth + 1);
                    }
                    Value::Array(items) if items.iter().any(|i| i.is_object() || i.is_array()) => {
                        let _ = writeln!(out, "{pad}- {k}:");
                        for item in items {
                            render_value(out, item, depth + 1);
                        }
                    }
                    _ => {
                        let _ = writeln!(out, "{pad}- {k}: {}", inline(x));
                    }
                }
            }
        }
        _ => {
            let _ = writeln!(out, "{pad}- {}", inline(v));
        }
    }
}

fn inline(v: &serde_json::Value) -> String {
    use serde_json::Value;
    match v {
        Value::String(s) => format!("`{s}`"),
        Value::Array(items) => format!("[{}]", items.iter().map(inline).collect::<Vec<_>>().join(", ")),
        Value::Object(map) => {
            let parts: Vec<String> = map.iter().map(|(k, x)| format!("{k}: {}", inline(x))).collect();
            format!("{{{}}}", parts.join(", "))
        }
        other => other.to_string(),
    }
}

/// Every invariant task for the objects a config declares: one verify task
/// per extension, character and embedding, and one base-change task per
/// embedding and object over its source.
pub fn verification_tasks(cfg: &RunConfig) -> Result<RunConfig> {
    let ctx = Context::build(&RunConfig { tasks: Vec::new(), extensions: Vec::new(), ..cfg.clone() }, None)?;
    let mut out = RunConfig { tasks: Vec::new(), ..cfg.clone() };
    let verify = |extension: Option<&String>, character: Option<&String>, embedding: Option<&String>| TaskDecl {
        kind: TaskKind::Verify,
        extension: extension.cloned(),
        character: character.cloned(),
        embedding: embedding.cloned(),
    };
    for d in &cfg.extensions {
        out.tasks.push(verify(Some(&d.name), None, None));
    }
    for d in &cfg.characters {
        out.tasks.push(verify(None, Some(&d.name), None));
    }
    for d in &cfg.embeddings {
        out.tasks.push(verify(None, None, Some(&d.name)));
    }
    for emb in &cfg.embeddings {
        let unramified = ctx.embeddings[&emb.name].ramification_index() == 1;
        let mut base = |extension: Option<&String>, character: Option<&String>| {
            out.tasks.push(TaskDecl {
                kind: TaskKind::BaseChange,
                extension: extension.cloned(),
                character: character.cloned(),
                embedding: Some(emb.name.clone()),
            })
        };
        for d in cfg.extensions.iter().filter(|d| d.field == emb.source && unramified) {
            base(Some(&d.name), None);
        }
        for d in cfg.characters.iter().filter(|d| d.field == emb.source) {
            base(None, Some(&d.name));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyOutcome {
    pub report: Report,
    /// Checks that span several tasks.
    pub suite_checks: Vec<Check>,
    pub passed: bool,
    /// A config reproducing the first failing task.
    #[serde(skip)]
    pub reproducer: Option<RunConfig>,
}

impl VerifyOutcome {
    /// Names of every failing check, or of the error of a failing task.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        for t in &self.report.tasks {
            for c in t.checks.iter().filter(|c| !c.passed) {
                out.push(format!("task {} ({} {}): {}", t.index, t.kind, t.subject, c.name));
            }
            if let Some(e) = &t.error {
                out.push(format!("task {} ({} {}): {e}", t.index, t.kind, t.subject));
            }
        }
        for c in self.suite_checks.iter().filter(|c| !c.passed) {
            out.push(format!("suite: {}", c.name));
        }
        out
    }
}

fn builtin_checks(report: &Report) -> Vec<Check> {
    let mut checks = Vec::new();
    for p in [2u32, 3, 5] {
        let res = ResidueField::prime(p).expect("prime field");
        let elems: Vec<_> = (0..p as i64).map(|c| res.from_int(c)).collect();
        let ok = a1_from_subgroup(&res, &elems).is_ok_and(|a| {
            let minus_one = res.from_int(-1);
            a.coeffs == vec![res.one(), minus_one] && elems.iter().all(|g| a.eval(&res, g).is_zero())
        });
        checks.push(Check::with_detail("a1_of_prime_field", ok, format!("p = {p}: X - X^p")));
    }
    let drops = report.tasks.iter().any(|t| match &t.result {
        Some(TaskResult::BaseChange(b)) => {
            !b.embedding.tangentially_dominant
                && matches!(&b.subject, tasks::BaseChangeSubject::Character { source, target, .. } if target.j < source.j)
        }
        _ => false,
    });
    checks.push(Check::new("non_dominant_embedding_drops_conductor", drops));
    checks
}

/// Runs every invariant on the objects of `cfg`, or of the built-in corpus
/// when `cfg` is `None`.
pub fn verify_suite(cfg: Option<&RunConfig>, opts: &RunOptions) -> Result<VerifyOutcome> {
    let builtin = cfg.is_none();
    let base = cfg.cloned().unwrap_or_else(builtin_corpus);
    let mut full = verification_tasks(&base)?;
    full.tasks.extend(base.tasks.iter().cloned());
    let report = run(&full, opts)?;
    let suite_checks = if builtin { builtin_checks(&report) } else { Vec::new() };
    let passed = report.passed && suite_checks.iter().all(|c| c.passed);
    let reproducer = report
        .tasks
        .iter()
        .find(|t| t.status != Status::Pass)
        .map(|t| {
            let mut r = full.reproducer(&full.tasks[t.index]);
            if let Some(p) = opts.precision {
                r.precision = Some(p);
            }
            r
        })
        .or_else(|| (!passed).then(|| base.clone()));
    Ok(VerifyOutcome { report, suite_checks, passed, reproducer })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_task_list() {
        let cfg = RunConfig::from_toml("").unwrap();
        let r = run(&cfg, &RunOptions::default()).unwrap();
        assert!(r.passed);
        assert!(r.tasks.is_empty());
    }

    #[test]
    fn breaks_task_reports_fractions() {
        let cfg = RunConfig::from_toml(
            r#"
[[field]]
name = "K"
p = 2

[[extension]]
name = "L"
field = "K"
artin_schreier = ["t^-1"]

[[task]]
kind = "breaks"
extension = "L"
"#,
        )
        .unwrap();
        let r = run(&cfg, &RunOptions::default()).unwrap();
        assert!(r.passed, "{}", r.to_json());
        let json = r.to_json();
        assert!(json.contains("\"r\": \"2/1\""), "{json}");
        assert!(r.herbrand_csv().lines().count() >= 2);
        assert!(r.to_markdown().contains("largest_break_eqri"));
    }
}
