//! Executes the tasks of parsed structure files and collects a report.

use std::time::Instant;

use sectional_core::bundles::ring_algebra;
use sectional_core::rings::{parse_ring_spec, Ring, RingSpec};
use sectional_core::theorems::{
    crossed_theorem, germ_corollary, quotient_map_and_kernel, sample_associativity, smash_theorem, tensor_theorem,
    Check, Verdict,
};
use sectional_core::{Error, Result};

use crate::build::run_construction;
use crate::materialize::Resolver;
use crate::report::{Report, Status, TaskReport};
use crate::workspace::{parse_workspace, ParseError, TaskKind, TaskStanza, WorkspaceFile};

pub const DEFAULT_SAMPLES: usize = 200;

/// Which tasks of each file to run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Selection {
    /// Every task in the file.
    All,
    /// Verify tasks of one theorem.
    Theorem(String),
    /// One validate pass over every structure, ignoring the file's tasks.
    ValidateEverything,
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub selection: Selection,
    pub seed: u64,
    pub ring: Option<String>,
    pub timestamp: bool,
    pub parallel: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { selection: Selection::All, seed: 0, ring: None, timestamp: false, parallel: false }
    }
}

/// A named input; `Err` holds a read failure.
pub struct Source {
    pub path: String,
    pub text: std::result::Result<String, String>,
}

fn error_code(e: &Error) -> (Status, &'static str) {
    match e.root() {
        Error::Structural(_) => (Status::Error, "structural"),
        Error::Invalid(_) => (Status::Fail, "invalid"),
        Error::Refused(_) => (Status::Fail, "refused"),
        Error::Capability(_) => (Status::Fail, "capability"),
        Error::Internal(_) => (Status::Fail, "internal"),
        Error::Certification(_) => (Status::Fail, "certification"),
        Error::Stage { .. } => unreachable!("root strips stages"),
    }
}

fn parse_code(e: &ParseError) -> &'static str {
    match e {
        ParseError::Syntax { .. } => "parse",
        ParseError::Dangling { .. } => "dangling",
        ParseError::Duplicate { .. } => "duplicate",
        ParseError::Shape(_) => "shape",
    }
}

fn file_entry(path: &str, status: Status, code: &str, message: String) -> TaskReport {
    TaskReport {
        file: path.to_string(),
        index: None,
        id: "file".into(),
        kind: "load".into(),
        theorem: None,
        targets: Vec::new(),
        status,
        code: code.into(),
        seed: None,
        verdict: None,
        message: Some(message),
        rule: None,
        witness: None,
        wall_ms: None,
    }
}

/// Checks every structure named in `targets`, or all of them when it is empty.
fn validate(r: &Resolver, ws: &WorkspaceFile, targets: &[String]) -> Result<Verdict> {
    let all: Vec<String>;
    let targets = if targets.is_empty() {
        all = ws
            .semigroupoids
            .iter()
            .map(|s| &s.id)
            .chain(ws.homomorphisms.iter().map(|s| &s.id))
            .chain(ws.bundles.iter().map(|s| &s.id))
            .chain(ws.actions.iter().map(|s| &s.id))
            .chain(ws.congruences.iter().map(|s| &s.id))
            .chain(ws.algebras.iter().map(|s| &s.id))
            .cloned()
            .collect();
        &all
    } else {
        targets
    };
    let mut v = Verdict::new("validate", targets.join(", "));
    for id in targets {
        match ws.kind_of(id) {
            Some("semigroupoid") => {
                r.semigroupoid(id)?;
                if ws.semigroupoids.iter().any(|s| &s.id == id && s.inv.is_some()) {
                    r.inverse(id)?;
                }
            }
            Some("homomorphism") => drop(r.homomorphism(id)?),
            Some("bundle") => drop(r.bundle(id)?),
            Some("action") => drop(r.action(id)?),
            Some("congruence") => drop(r.congruence(id)?),
            Some("algebra") => {
                let a = r.algebra(id)?;
                a.check_associativity().into_result()?;
                a.check_graded_closure().into_result()?;
            }
            _ => return Err(Error::structural(format!("no structure named {id:?}"))),
        }
        v = v.check(Check::pass(id));
    }
    Ok(v)
}

fn verify(r: &Resolver, task: &TaskStanza, seed: u64) -> Result<Verdict> {
    let target = |k: usize| task.targets.get(k).map(String::as_str).ok_or_else(|| Error::structural("missing target"));
    match task.what().unwrap_or_default() {
        "tensor" => Ok(tensor_theorem(&r.bundle(target(0)?)?, r.semigroupoid(target(1)?)?)?.verdict),
        "crossed" => Ok(crossed_theorem(&r.bundle_action(target(0)?)?)?.verdict),
        "smash" => Ok(smash_theorem(&r.bundle(target(0)?)?, &r.homomorphism(target(1)?)?)?.verdict),
        "quotient" => Ok(quotient_map_and_kernel(&r.congruence(target(0)?)?)?.verdict),
        "germ" => {
            let theta = r.preaction_named(target(0)?)?;
            let a = match task.targets.get(1) {
                Some(id) => r.algebra(id)?,
                None => ring_algebra(r.ring()),
            };
            Ok(germ_corollary(&theta, &a)?.verdict)
        }
        "associativity" => sample_associativity(&r.bundle(target(0)?)?, task.samples.unwrap_or(DEFAULT_SAMPLES), seed),
        other => Err(Error::structural(format!("unknown theorem {other:?}"))),
    }
}

fn execute(r: &Resolver, ws: &WorkspaceFile, index: Option<usize>, seed: u64) -> Result<Verdict> {
    match index {
        None => validate(r, ws, &[]),
        Some(i) => {
            let task = &ws.tasks[i];
            match task.kind {
                TaskKind::Validate => validate(r, ws, &task.targets),
                TaskKind::Verify => verify(r, task, seed).map(|v| expectations(v, task)),
                TaskKind::Build => run_construction(r, ws, i).map(|doc| {
                    let built: Vec<String> = doc
                        .semigroupoids
                        .iter()
                        .map(|s| &s.id)
                        .chain(doc.bundles.iter().map(|s| &s.id))
                        .chain(doc.homomorphisms.iter().map(|s| &s.id))
                        .chain(doc.algebras.iter().map(|s| &s.id))
                        .cloned()
                        .collect();
                    Verdict::new(task.what().unwrap_or_default(), built.join(", ")).check(Check::pass("built"))
                }),
            }
        }
    }
}

/// Adds one check per expected rank.
fn expectations(mut v: Verdict, task: &TaskStanza) -> Verdict {
    if let Some(expect) = &task.expect {
        for (key, want) in &expect.ranks {
            let got = v.ranks.get(key).copied();
            let check = if got == Some(*want) {
                Check::pass(&format!("expected-{key}"))
            } else {
                Check::fail(&format!("expected-{key}"), Vec::new(), format!("expected {want}, got {got:?}"))
            };
            v = v.check(check);
        }
    }
    v
}

struct Job<'a> {
    path: &'a str,
    ws: &'a WorkspaceFile,
    ring: &'a Ring,
    /// `None` is a whole-file validation.
    index: Option<usize>,
}

fn run_job(job: &Job, default_seed: u64, timed: bool) -> TaskReport {
    let start = Instant::now();
    let task = job.index.map(|i| &job.ws.tasks[i]);
    let seed = task.and_then(|t| t.seed).unwrap_or(default_seed);
    let resolver = Resolver::new(job.ws, job.ring.clone());
    let outcome = execute(&resolver, job.ws, job.index, seed);
    let mut rep = TaskReport {
        file: job.path.to_string(),
        index: job.index,
        id: job.index.map_or_else(|| "validate".to_string(), |i| job.ws.task_name(i)),
        kind: task.map_or("validate", |t| t.kind.as_str()).to_string(),
        theorem: task.and_then(|t| t.what()).map(str::to_string),
        targets: task.map(|t| t.targets.clone()).unwrap_or_default(),
        status: Status::Pass,
        code: "ok".into(),
        seed: task.filter(|t| t.what() == Some("associativity")).map(|_| seed),
        verdict: None,
        message: None,
        rule: None,
        witness: None,
        wall_ms: timed.then(|| start.elapsed().as_millis() as u64),
    };
    match outcome {
        Ok(v) => {
            if !v.passed {
                rep.status = Status::Fail;
                rep.code = "certification".into();
                if let Some(c) = v.first_failure() {
                    rep.message = Some(format!("{}: {}", c.name, c.detail));
                    rep.rule = Some(c.name.clone());
                    rep.witness = c.witness.clone();
                }
            }
            rep.verdict = Some(v);
        }
        Err(e) => {
            let (status, code) = error_code(&e);
            rep.status = status;
            rep.code = code.into();
            rep.message = Some(e.to_string());
            if let Some(first) = e.report().and_then(|r| r.first()) {
                rep.rule = Some(first.rule.to_string());
                rep.witness = Some(first.witness.clone());
            }
        }
    }
    rep
}

fn selected(ws: &WorkspaceFile, selection: &Selection) -> Vec<Option<usize>> {
    match selection {
        Selection::ValidateEverything => vec![None],
        Selection::All => (0..ws.tasks.len()).map(Some).collect(),
        Selection::Theorem(th) => (0..ws.tasks.len())
            .filter(|&i| ws.tasks[i].kind == TaskKind::Verify && ws.tasks[i].what() == Some(th.as_str()))
            .map(Some)
            .collect(),
    }
}

/// Loads each source, runs the selected tasks and returns the finished report.
pub fn run(command: &str, sources: &[Source], opts: &RunOptions) -> Report {
    let timestamp = opts.timestamp.then(|| humantime::format_rfc3339_seconds(std::time::SystemTime::now()).to_string());
    let mut report = Report::new(
        command.to_string(),
        opts.seed,
        opts.ring.clone(),
        timestamp,
        sources.iter().map(|s| s.path.clone()).collect(),
    );
    let override_spec: Option<std::result::Result<RingSpec, Error>> =
        opts.ring.as_deref().map(sectional_core::rings::parse_ring_override);

    // load everything first so that jobs can borrow it
    let mut loaded: Vec<(usize, WorkspaceFile, Ring)> = Vec::new();
    let mut file_errors: Vec<(usize, TaskReport)> = Vec::new();
    for (k, src) in sources.iter().enumerate() {
        let text = match &src.text {
            Ok(t) => t,
            Err(e) => {
                file_errors.push((k, file_entry(&src.path, Status::Error, "io", e.clone())));
                continue;
            }
        };
        let ws = match parse_workspace(text) {
            Ok(ws) => ws,
            Err(e) => {
                file_errors.push((k, file_entry(&src.path, Status::Error, parse_code(&e), e.to_string())));
                continue;
            }
        };
        let spec = match &override_spec {
            Some(s) => s.as_ref().cloned().map_err(|e| Error::structural(e.to_string())),
            None => parse_ring_spec(&ws.ring),
        };
        match spec.and_then(|s| Ring::from_spec(&s)) {
            Ok(ring) => loaded.push((k, ws, ring)),
            Err(e) => {
                let (status, code) = error_code(&e);
                let mut entry = file_entry(&src.path, status, code, format!("ring: {e}"));
                if let Some(first) = e.report().and_then(|r| r.first()) {
                    entry.rule = Some(first.rule.to_string());
                    entry.witness = Some(first.witness.clone());
                }
                file_errors.push((k, entry));
            }
        }
    }

    let mut jobs: Vec<(usize, Job)> = Vec::new();
    for (k, ws, ring) in &loaded {
        for index in selected(ws, &opts.selection) {
            jobs.push((*k, Job { path: &sources[*k].path, ws, ring, index }));
        }
    }
    let results: Vec<TaskReport> = if opts.parallel && jobs.len() > 1 {
        let workers = std::thread::available_parallelism().map_or(2, |n| n.get()).min(jobs.len());
        let jobs = &jobs;
        let mut slots: Vec<Option<TaskReport>> = vec![None; jobs.len()];
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    scope.spawn(move || {
                        (w..jobs.len())
                            .step_by(workers)
                            .map(|j| (j, run_job(&jobs[j].1, opts.seed, opts.timestamp)))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            for h in handles {
                for (j, rep) in h.join().expect("worker panicked") {
                    slots[j] = Some(rep);
                }
            }
        });
        slots.into_iter().map(|s| s.expect("every job ran")).collect()
    } else {
        jobs.iter().map(|(_, job)| run_job(job, opts.seed, opts.timestamp)).collect()
    };

    // file-level entries go before the tasks of later files, in input order
    let mut by_file: Vec<(usize, usize, TaskReport)> = file_errors
        .into_iter()
        .map(|(k, t)| (k, 0, t))
        .chain(jobs.iter().zip(results).map(|((k, _), t)| (*k, 1, t)))
        .collect();
    by_file.sort_by_key(|(k, phase, t)| (*k, *phase, t.index));
    report.tasks = by_file.into_iter().map(|(_, _, t)| t).collect();
    report.finish()
}

/// Parses `text` and reads the ring, applying an override when given.
pub fn load(text: &str, ring: Option<&str>) -> std::result::Result<(WorkspaceFile, Ring), String> {
    let ws = parse_workspace(text).map_err(|e| e.to_string())?;
    let spec = match ring {
        Some(r) => sectional_core::rings::parse_ring_override(r),
        None => parse_ring_spec(&ws.ring),
    }
    .map_err(|e| e.to_string())?;
    let ring = Ring::from_spec(&spec).map_err(|e| e.to_string())?;
    Ok((ws, ring))
}

#[cfg(test)]
mod tests {
    use super::*;
    use sectional_core::{Rule, ValidationReport, Violation};

    #[test]
    fn codes_follow_the_root_error() {
        assert_eq!(error_code(&Error::structural("x")), (Status::Error, "structural"));
        assert_eq!(error_code(&Error::capability("x").in_stage("s")), (Status::Fail, "capability"));
        let mut rep = ValidationReport::new("t");
        rep.push(Violation::new(Rule::Associativity, vec!["a".into()], "d"));
        assert_eq!(error_code(&Error::Invalid(rep)), (Status::Fail, "invalid"));
        assert_eq!(error_code(&Error::internal("x")), (Status::Fail, "internal"));
    }
}
