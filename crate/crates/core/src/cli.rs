//! Command-line front end: argument definitions and verb dispatch.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::algebra::FinSemigroup;
use crate::error::{Error, Result};
use crate::filter::PrincipalFilter;
use crate::io::{bound_records_csv, filter_from_json, parse_element_list, parse_instance, table_to_json, Sink};
use crate::mask::SubsetMask;
use crate::partition::{run_sweep, BoundRecord, CoverMode, SweepConfig, SweepProgress, SweepState};
use crate::size::{classify, Predicate, SizeVerdict};
use crate::theorems::{hunt_counterexample, parse_catalog, small_groups, verify, Check, TheoremReport};

/// Environment variable giving the default worker count.
pub const THREADS_ENV: &str = "SEMISIZE_THREADS";

#[derive(Debug, Parser)]
#[command(name = "semisize", version, about = "Relative size notions on finite semigroups")]
pub struct RunConfig {
    /// Emit diagnostics on stderr as JSON objects.
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = THREADS_ENV)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub verb: Verb,
}

#[derive(Debug, Subcommand)]
pub enum Verb {
    /// Write the Cayley table of a named family as JSON.
    Gen(GenArgs),
    /// Decide every size predicate for one set.
    Classify(ClassifyArgs),
    /// Check theorems over a catalog of instances.
    Verify(VerifyArgs),
    /// Worst-case covering numbers over all partitions.
    Search(SearchArgs),
    /// Look for counterexamples to weakened theorem variants.
    Hunt(HuntArgs),
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Family spec, e.g. `cyclic:6` or `rightzero:3`.
    #[arg(long)]
    pub family: String,
    /// Output file; standard output if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    /// Family spec or Cayley-table JSON file.
    #[arg(long)]
    pub instance: String,
    /// Filter base as an element list; defaults to the whole semigroup.
    #[arg(long, conflicts_with = "filter")]
    pub base: Option<String>,
    /// Filter JSON file (`{"base": [..]}`).
    #[arg(long)]
    pub filter: Option<PathBuf>,
    /// The set to classify, as an element list.
    #[arg(long, allow_hyphen_values = true)]
    pub set: String,
    /// Restrict to these predicates (repeatable).
    #[arg(long = "predicate")]
    pub predicates: Vec<String>,
    /// JSONL verdicts; standard output if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Theorem ids separated by commas, or `all`.
    #[arg(long)]
    pub theorem: String,
    /// Catalog terms separated by `;` (`default`, `order<=3`, `groups<=12`,
    /// or family specs with optional `@base` suffixes).
    #[arg(long, default_value = "default")]
    pub catalog: String,
    /// JSONL reports; standard output if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Include wall time in the reports.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Args)]
pub struct HuntArgs {
    /// Variant names separated by commas, or `all`.
    #[arg(long)]
    pub variant: String,
    /// Catalog terms, as for `verify`.
    #[arg(long, default_value = "default")]
    pub catalog: String,
    /// JSONL reports; standard output if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Include wall time in the reports.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Group (or semigroup for quotient/delta covers): a family spec, a
    /// table file, or `groups<=k`. Repeatable.
    #[arg(long, required = true)]
    pub group: Vec<String>,
    /// `full`, `subgroups`, or an element list.
    #[arg(long, default_value = "full")]
    pub base: String,
    /// Number of cells `n`.
    #[arg(long, default_value_t = 2)]
    pub cells: usize,
    /// `quotient`, `translate` or `delta`.
    #[arg(long, default_value = "translate")]
    pub mode: String,
    /// Witness pool `V`: `full`, `base`, or an element list.
    #[arg(long = "witness-pool", default_value = "full")]
    pub witness_pool: String,
    /// Partition every `U ⊇ U₀`, not just `U₀` (orders ≤ 6).
    #[arg(long = "widen-U")]
    pub widen_u: bool,
    /// Sweep every labeling instead of one per automorphism orbit.
    #[arg(long)]
    pub no_symmetry: bool,
    /// Allow empty cells.
    #[arg(long)]
    pub allow_empty: bool,
    /// Override the default order limit for this cell count.
    #[arg(long)]
    pub max_order: Option<usize>,
    /// JSONL bound records.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// CSV bound table.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Seconds before the sweep checkpoints and stops.
    #[arg(long)]
    pub time_budget: Option<f64>,
    /// Checkpoint file, read on start and written on interruption.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
}

impl RunConfig {
    /// Argument checks that need no computation.
    pub fn validate(&self) -> Result<()> {
        if self.threads == Some(0) {
            return Err(Error::InvalidArgument("--threads must be positive".into()));
        }
        if let Verb::Search(a) = &self.verb {
            if a.cells == 0 {
                return Err(Error::InvalidArgument("--cells must be positive".into()));
            }
            if a.max_order == Some(0) {
                return Err(Error::InvalidArgument("--max-order must be positive".into()));
            }
            if let Some(t) = a.time_budget {
                if !(t > 0.0 && t.is_finite()) {
                    return Err(Error::InvalidArgument("--time-budget must be a positive number of seconds".into()));
                }
            }
            if a.time_budget.is_some() && a.checkpoint.is_none() {
                return Err(Error::InvalidArgument("--time-budget needs --checkpoint to save progress".into()));
            }
        }
        Ok(())
    }
}

/// How a run ended, mapped to the process exit status.
#[derive(Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// Counterexample to a proved statement, or a bound violation.
    Failure(String),
    /// Time budget exhausted; progress is in the checkpoint.
    Interrupted(String),
}

impl Status {
    pub fn exit_code(&self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Failure(_) => 1,
            Status::Interrupted(_) => 3,
        }
    }
}

/// Writes a diagnostic to stderr.
pub fn report_diagnostic(json: bool, level: &str, kind: &str, message: &str, exit_code: i32) {
    if json {
        let v = serde_json::json!({ "level": level, "kind": kind, "message": message, "exit_code": exit_code });
        eprintln!("{v}");
    } else {
        eprintln!("semisize: {level}: {message}");
    }
}

/// Validates, dispatches and returns the exit status.
pub fn run(config: RunConfig) -> i32 {
    let json = config.json;
    let result = config.validate().and_then(|()| {
        if let Some(n) = config.threads {
            // a global pool can only be installed once per process
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
        dispatch(&config)
    });
    match result {
        Ok(Status::Ok) => 0,
        Ok(status) => {
            let (level, kind, msg) = match &status {
                Status::Failure(m) => ("error", "Counterexample", m.as_str()),
                Status::Interrupted(m) => ("warning", "Interrupted", m.as_str()),
                Status::Ok => unreachable!(),
            };
            report_diagnostic(json, level, kind, msg, status.exit_code());
            status.exit_code()
        }
        Err(e) => {
            report_diagnostic(json, "error", e.kind(), &e.to_string(), e.exit_code());
            e.exit_code()
        }
    }
}

fn dispatch(config: &RunConfig) -> Result<Status> {
    match &config.verb {
        Verb::Gen(a) => gen(a),
        Verb::Classify(a) => classify_verb(a),
        Verb::Verify(a) => verify_verb(a, config.json),
        Verb::Hunt(a) => hunt_verb(a, config.json),
        Verb::Search(a) => search_verb(a, config.json),
    }
}

fn gen(a: &GenArgs) -> Result<Status> {
    let s = parse_instance(&a.family)?;
    let mut sink = Sink::open(a.out.as_deref())?;
    sink.raw(&table_to_json(&s))?;
    sink.flush()?;
    Ok(Status::Ok)
}

#[derive(Serialize)]
struct ClassifyRecord<'a> {
    instance: &'a str,
    base: SubsetMask,
    set: SubsetMask,
    #[serde(flatten)]
    verdict: SizeVerdict,
}

fn load_filter(s: &FinSemigroup, base: Option<&str>, file: Option<&Path>) -> Result<PrincipalFilter> {
    match (base, file) {
        (_, Some(path)) => filter_from_json(s, &fs::read_to_string(path)?),
        (Some(b), None) => PrincipalFilter::new(s, parse_element_list(s, b)?),
        (None, None) => Ok(PrincipalFilter::trivial(s)),
    }
}

fn classify_verb(a: &ClassifyArgs) -> Result<Status> {
    let s = parse_instance(&a.instance)?;
    let tau = load_filter(&s, a.base.as_deref(), a.filter.as_deref())?;
    let set = parse_element_list(&s, &a.set)?;
    let predicates = if a.predicates.is_empty() {
        Predicate::ALL.to_vec()
    } else {
        a.predicates.iter().map(|p| p.parse()).collect::<Result<Vec<Predicate>>>()?
    };
    let verdicts = predicates
        .into_iter()
        .map(|p| classify(&s, &tau, p, set))
        .collect::<Result<Vec<_>>>()?;
    let mut sink = Sink::open(a.out.as_deref())?;
    for verdict in verdicts {
        sink.json_line(&ClassifyRecord {
            instance: s.name(),
            base: tau.base(),
            set,
            verdict,
        })?;
    }
    sink.flush()?;
    Ok(Status::Ok)
}

fn parse_checks(list: &str, pool: &[Check]) -> Result<Vec<Check>> {
    if list.trim() == "all" {
        return Ok(pool.to_vec());
    }
    list.split(',')
        .map(|t| {
            let c: Check = t.trim().parse()?;
            if pool.contains(&c) {
                Ok(c)
            } else {
                Err(Error::InvalidArgument(format!("`{c}` is not valid here")))
            }
        })
        .collect()
}

fn emit_reports(reports: &[TheoremReport], out: Option<&Path>, json: bool) -> Result<()> {
    let mut sink = Sink::open(out)?;
    for r in reports {
        sink.json_line(r)?;
        for w in &r.warnings {
            report_diagnostic(json, "warning", "Vacuity", &format!("{}: {w}", r.theorem), 0);
        }
    }
    sink.flush()
}

fn verify_verb(a: &VerifyArgs, json: bool) -> Result<Status> {
    let checks = parse_checks(&a.theorem, &Check::THEOREMS)?;
    let catalog = parse_catalog(&a.catalog)?;
    let mut reports = Vec::new();
    for c in checks {
        let r = verify(c, &catalog, a.timing)?;
        let stop = r.is_failure();
        reports.push(r);
        // a counterexample to a proved theorem halts the suite
        if stop {
            break;
        }
    }
    emit_reports(&reports, a.out.as_deref(), json)?;
    Ok(verify_status(&reports))
}

/// Failure if any report holds a counterexample to a proved statement.
pub fn verify_status(reports: &[TheoremReport]) -> Status {
    match reports.iter().find(|r| r.is_failure()) {
        Some(r) => Status::Failure(format!(
            "counterexample to {} on {} (replay it from the report)",
            r.theorem,
            r.counterexample.as_ref().map_or("?", |c| c.semigroup.as_str())
        )),
        None => Status::Ok,
    }
}

fn hunt_verb(a: &HuntArgs, json: bool) -> Result<Status> {
    let checks = parse_checks(&a.variant, &Check::VARIANTS)?;
    let catalog = parse_catalog(&a.catalog)?;
    let reports = checks
        .into_iter()
        .map(|c| hunt_counterexample(c, &catalog, a.timing))
        .collect::<Result<Vec<_>>>()?;
    emit_reports(&reports, a.out.as_deref(), json)?;
    Ok(Status::Ok)
}

/// Saved progress of a multi-group search.
#[derive(Serialize, Deserialize)]
struct SearchCheckpoint {
    fingerprint: String,
    /// Records of the finished jobs, in job order.
    records: Vec<BoundRecord>,
    next_job: usize,
    current: Option<SweepState>,
}

fn search_jobs(a: &SearchArgs) -> Result<Vec<SweepConfig>> {
    let mode: CoverMode = a.mode.parse()?;
    let mut groups = Vec::new();
    for g in &a.group {
        match g.trim().strip_prefix("groups<=") {
            Some(k) => {
                let k = k
                    .parse()
                    .map_err(|_| Error::InvalidArgument(format!("bad bound in `{g}`")))?;
                groups.extend(small_groups(k)?);
            }
            None => groups.push(parse_instance(g.trim())?),
        }
    }
    let mut jobs = Vec::new();
    for s in groups {
        let bases = match a.base.trim() {
            "full" => vec![s.full()],
            "subgroups" => {
                let mut subs = s.subgroups()?;
                subs.sort_by_key(|m| m.bits());
                subs
            }
            list => vec![parse_element_list(&s, list)?],
        };
        for base in bases {
            let tau = PrincipalFilter::new(&s, base)?;
            let pool = match a.witness_pool.trim() {
                "full" => s.full(),
                "base" => base,
                list => parse_element_list(&s, list)?,
            };
            let mut cfg = SweepConfig::new(s.clone(), tau, a.cells, mode, pool);
            cfg.widen = a.widen_u;
            cfg.symmetry = !a.no_symmetry;
            cfg.allow_empty = a.allow_empty;
            cfg.max_order = a.max_order;
            jobs.push(cfg);
        }
    }
    Ok(jobs)
}

fn search_fingerprint(a: &SearchArgs) -> String {
    format!(
        "{:?}|{}|{}|{}|{}|{}|{}|{}|{:?}",
        a.group, a.base, a.cells, a.mode, a.witness_pool, a.widen_u, a.no_symmetry, a.allow_empty, a.max_order
    )
}

fn save_checkpoint(a: &SearchArgs, cp: &SearchCheckpoint, total: usize) -> Result<Status> {
    let path = a.checkpoint.as_deref().expect("validated: budget implies checkpoint");
    let text = serde_json::to_string(cp).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    fs::write(path, text)?;
    Ok(Status::Interrupted(format!(
        "time budget exhausted after {} of {total} sweeps; rerun the same command to resume from {}",
        cp.next_job,
        path.display()
    )))
}

fn search_verb(a: &SearchArgs, json: bool) -> Result<Status> {
    let jobs = search_jobs(a)?;
    let fingerprint = search_fingerprint(a);
    let mut cp = match a.checkpoint.as_deref().filter(|p| p.exists()) {
        Some(path) => {
            let cp: SearchCheckpoint = serde_json::from_str(&fs::read_to_string(path)?)
                .map_err(|e| Error::schema(path.display().to_string(), e.to_string()))?;
            if cp.fingerprint != fingerprint || cp.next_job > jobs.len() {
                return Err(Error::InvalidArgument(format!(
                    "checkpoint {} was written by a different search",
                    path.display()
                )));
            }
            let records = cp
                .records
                .into_iter()
                .zip(&jobs)
                .map(|(r, job)| r.with_width(job.semigroup.order()))
                .collect::<Result<_>>()?;
            SearchCheckpoint { records, ..cp }
        }
        None => SearchCheckpoint {
            fingerprint,
            records: Vec::new(),
            next_job: 0,
            current: None,
        },
    };
    let deadline = a.time_budget.map(|t| Instant::now() + Duration::from_secs_f64(t));
    while cp.next_job < jobs.len() {
        let cfg = &jobs[cp.next_job];
        match run_sweep(cfg, cp.current.take(), deadline)? {
            SweepProgress::Done(rec) => {
                cp.records.push(*rec);
                cp.next_job += 1;
            }
            SweepProgress::Interrupted(state) => {
                cp.current = Some(state);
                return save_checkpoint(a, &cp, jobs.len());
            }
        }
        // each invocation finishes at least one sweep chunk, so resuming terminates
        if deadline.is_some_and(|d| Instant::now() >= d) && cp.next_job < jobs.len() {
            return save_checkpoint(a, &cp, jobs.len());
        }
    }
    let mut sink = Sink::open(a.out.as_deref())?;
    for r in &cp.records {
        sink.json_line(r)?;
    }
    sink.flush()?;
    if let Some(path) = &a.csv {
        fs::write(path, bound_records_csv(&cp.records)?)?;
    }
    if let Some(path) = a.checkpoint.as_deref().filter(|p| p.exists()) {
        fs::remove_file(path)?;
    }
    for r in cp.records.iter().filter(|r| r.exceeds_conjecture) {
        report_diagnostic(
            json,
            "note",
            "ConjectureExceeded",
            &format!(
                "{} base {} (n = {}): worst {:?} exceeds the conjectured {:?}",
                r.group, r.base, r.cells, r.worst_min_f, r.conjecture_bound
            ),
            0,
        );
    }
    Ok(bound_status(&cp.records))
}

/// Failure if any sweep needed more translates than the proven bound allows.
pub fn bound_status(records: &[BoundRecord]) -> Status {
    match records.iter().find(|r| r.proven_bound_violated) {
        Some(r) => Status::Failure(format!(
            "{} base {} (n = {}) needs {:?} translates, above the proven bound {:?}",
            r.group, r.base, r.cells, r.worst_min_f, r.proven_bound
        )),
        None => Status::Ok,
    }
}
