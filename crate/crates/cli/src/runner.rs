//! Executes resolved jobs and writes one CSV per task plus `summary.csv`.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use gfa_core::complete::{extract_moduli, verify_convergence};
use gfa_core::embed::{check_scale_admissible, check_unbounded};
use gfa_core::props::run_suite;
use gfa_core::scalefam::{family_ideal_check, family_membership, FamilyVerdict, IdealOutcome, Membership};
use gfa_core::seqspace::{classify, distance, equal_in_quotient, Budget, Equality, UltranormEstimate, Verdict, Witness};
use gfa_core::Error;
use rayon::prelude::*;

use crate::ast::{ExperimentSpec, TaskKind};
use crate::resolve::{lower, Job, Op, Program};

/// First line of every CSV this tool writes.
pub const CSV_HEADER: &str = "# gfa-kit v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunConfig {
    /// Seed for property suites that do not set their own.
    pub seed: u64,
    /// Sampling limit for tasks that do not set `nmax`.
    pub n_max: u64,
    /// Run tasks concurrently; outputs are identical either way.
    pub parallel: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { seed: 42, n_max: Budget::default().n_max, parallel: false }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Conclusive,
    Inconclusive,
    Falsified,
    Error,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Conclusive => "ok",
            Status::Inconclusive => "inconclusive",
            Status::Falsified => "falsified",
            Status::Error => "error",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TaskOutcome {
    pub index: usize,
    pub kind: TaskKind,
    pub subject: String,
    pub status: Status,
    pub outcome: String,
    pub detail: String,
    /// File name of the task's CSV inside the output directory.
    pub file: String,
    pub csv: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunReport {
    pub outcomes: Vec<TaskOutcome>,
    pub summary: Vec<u8>,
    pub exit_code: i32,
}

/// 1 if anything was falsified or failed, else 2 if anything was inconclusive, else 0.
pub fn exit_code(outcomes: &[TaskOutcome]) -> i32 {
    match outcomes.iter().map(|o| o.status).max() {
        Some(Status::Error | Status::Falsified) => 1,
        Some(Status::Inconclusive) => 2,
        _ => 0,
    }
}

/// Resolves and runs `spec`, writing the reports under `out_dir`.
pub fn run_spec(spec: &ExperimentSpec, out_dir: &Path, cfg: &RunConfig) -> anyhow::Result<RunReport> {
    let (program, diags) = lower(spec, None);
    let Some(program) = program else {
        let msgs: Vec<String> = diags.iter().filter(|d| d.is_error()).map(|d| d.to_string()).collect();
        bail!("invalid spec:\n{}", msgs.join("\n"));
    };
    let report = run_program(&program, cfg);
    write_report(&report, out_dir)?;
    Ok(report)
}

pub fn write_report(report: &RunReport, out_dir: &Path) -> anyhow::Result<()> {
    fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    let write = |name: &str, bytes: &[u8]| -> anyhow::Result<PathBuf> {
        let path = out_dir.join(name);
        fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    };
    for o in &report.outcomes {
        write(&o.file, &o.csv)?;
    }
    write("summary.csv", &report.summary)?;
    Ok(())
}

/// Runs every job in memory.
pub fn run_program(program: &Program, cfg: &RunConfig) -> RunReport {
    let outcomes: Vec<TaskOutcome> = if cfg.parallel {
        program.jobs.par_iter().map(|j| execute(j, cfg)).collect()
    } else {
        program.jobs.iter().map(|j| execute(j, cfg)).collect()
    };
    let rows = outcomes
        .iter()
        .map(|o| {
            vec![
                o.index.to_string(),
                o.kind.to_string(),
                o.subject.clone(),
                o.status.to_string(),
                o.outcome.clone(),
                o.detail.clone(),
                o.file.clone(),
            ]
        })
        .collect();
    let summary = csv_bytes(&["task", "kind", "subject", "status", "outcome", "detail", "file"], rows);
    RunReport { exit_code: exit_code(&outcomes), outcomes, summary }
}

fn csv_bytes(columns: &[&str], rows: Vec<Vec<String>>) -> Vec<u8> {
    let mut out = format!("{CSV_HEADER}\n").into_bytes();
    {
        let mut w = csv::Writer::from_writer(&mut out);
        // writing to memory cannot fail
        w.write_record(columns).expect("in-memory csv");
        for r in rows {
            w.write_record(&r).expect("in-memory csv");
        }
        w.flush().expect("in-memory csv");
    }
    out
}

/// Shortest round-trip form, so output bytes depend only on the values.
fn num(v: f64) -> String {
    v.to_string()
}

struct Done {
    status: Status,
    outcome: String,
    detail: String,
    rows: Vec<Vec<String>>,
}

const CLASSIFY_COLS: &[&str] = &["label", "mode", "mu", "nu", "method", "exponent", "value", "residual", "verdict"];
const DISTANCE_COLS: &[&str] = &["f", "g", "mu", "nu", "method", "exponent", "value", "residual", "confident"];
const EQUAL_COLS: &[&str] = &["f", "g", "mode", "result"];
const EMBED_COLS: &[&str] =
    &["label", "mode", "mu", "nu", "method", "exponent", "value", "residual", "verdict", "admissible"];
const FAMILY_COLS: &[&str] =
    &["role", "label", "family", "case", "m", "method", "exponent", "value", "residual", "confident"];
const CAUCHY_COLS: &[&str] =
    &["row", "mu", "nu", "member", "n", "required", "method", "exponent", "value", "residual", "confident"];
const PROPS_COLS: &[&str] = &["suite", "seed", "instances", "vacuous", "violations", "passed", "first_violation"];

fn columns(kind: TaskKind) -> &'static [&'static str] {
    match kind {
        TaskKind::Classify => CLASSIFY_COLS,
        TaskKind::Distance => DISTANCE_COLS,
        TaskKind::Equal => EQUAL_COLS,
        TaskKind::EmbedCheck => EMBED_COLS,
        TaskKind::Family => FAMILY_COLS,
        TaskKind::Cauchy => CAUCHY_COLS,
        TaskKind::VerifyProperties => PROPS_COLS,
    }
}

fn execute(job: &Job, cfg: &RunConfig) -> TaskOutcome {
    let file = format!("{:02}-{}.csv", job.index, job.kind);
    let (status, outcome, detail, rows) = match run_job(job, cfg) {
        Ok(d) => (d.status, d.outcome, d.detail, d.rows),
        Err(e) => (Status::Error, "error".to_string(), e.to_string(), Vec::new()),
    };
    TaskOutcome {
        index: job.index,
        kind: job.kind,
        subject: job.subject.clone(),
        status,
        outcome,
        detail,
        csv: csv_bytes(columns(job.kind), rows),
        file,
    }
}

fn estimate_cells(e: &UltranormEstimate) -> [String; 4] {
    [e.method.to_string(), num(e.exponent), num(e.value), num(e.residual)]
}

fn witness_rows(label: &str, mode: &str, ws: &[Witness], tail: &[String]) -> Vec<Vec<String>> {
    ws.iter()
        .map(|w| {
            let mut row = vec![label.to_string(), mode.to_string(), w.mu.to_string(), w.nu.to_string()];
            row.extend(estimate_cells(&w.estimate));
            row.extend(tail.iter().cloned());
            row
        })
        .collect()
}

fn verdict_status(v: Verdict) -> Status {
    if v == Verdict::Inconclusive {
        Status::Inconclusive
    } else {
        Status::Conclusive
    }
}

fn largest(ws: &[Witness]) -> f64 {
    ws.iter().map(|w| w.estimate.value).fold(0.0, f64::max)
}

fn family_rows(role: &str, label: &str, fam: &str, v: &FamilyVerdict) -> Vec<Vec<String>> {
    v.levels
        .iter()
        .map(|(m, e)| {
            let mut row = vec![role.into(), label.into(), fam.into(), v.case.to_string(), m.to_string()];
            row.extend(estimate_cells(e));
            row.push(e.confident.to_string());
            row
        })
        .collect()
}

/// `true(m=2)`: the truth value with its witness or falsifier level.
fn membership(m: Membership) -> String {
    match m.level() {
        Some(l) => format!("{m}(m={l})"),
        None => m.to_string(),
    }
}

fn membership_status(ms: &[Membership]) -> Status {
    if ms.iter().any(|m| m.holds().is_none()) {
        Status::Inconclusive
    } else {
        Status::Conclusive
    }
}

fn run_job(job: &Job, cfg: &RunConfig) -> gfa_core::Result<Done> {
    let base = Budget::default().with_n_max(job.n_max.unwrap_or(cfg.n_max));
    Ok(match &job.op {
        Op::Classify { f, p, r, mode, mu_max, nu_max } => {
            let c = classify(f, p, r, *mode, &base.with_indices(*mu_max, *nu_max))?;
            let rows = witness_rows(f.label(), &mode.to_string(), &c.witnesses, &[c.verdict.to_string()]);
            Done {
                status: verdict_status(c.verdict),
                outcome: c.verdict.to_string(),
                detail: format!("largest={}", num(largest(&c.witnesses))),
                rows,
            }
        }
        Op::Distance { f, g, p, r, mu, nu } => {
            let e = distance(f, g, p, *mu, *nu, r, &base)?;
            let mut row = vec![f.label().to_string(), g.label().to_string(), mu.to_string(), nu.to_string()];
            row.extend(estimate_cells(&e));
            row.push(e.confident.to_string());
            Done {
                status: if e.confident { Status::Conclusive } else { Status::Inconclusive },
                outcome: num(e.value),
                detail: format!("method={}", e.method),
                rows: vec![row],
            }
        }
        Op::Equal { f, g, p, r, mode, mu_max, nu_max } => {
            let eq = equal_in_quotient(f, g, p, r, *mode, &base.with_indices(*mu_max, *nu_max))?;
            let row = vec![f.label().to_string(), g.label().to_string(), mode.to_string(), eq.to_string()];
            Done {
                status: if eq == Equality::Inconclusive { Status::Inconclusive } else { Status::Conclusive },
                outcome: eq.to_string(),
                detail: String::new(),
                rows: vec![row],
            }
        }
        Op::EmbedCheck { f, p, r, mode, mu_max, nu_max } => {
            let b = base.with_indices(*mu_max, *nu_max);
            let a = check_scale_admissible(f, p, r, *mode, &b)?;
            let u = check_unbounded(f, p, 1, &b)?;
            let tail = [a.verdict.to_string(), a.admissible.to_string()];
            let rows = witness_rows(f.label(), &mode.to_string(), &a.table, &tail);
            let witness = a.nonzero_witness.map_or("none".to_string(), |(_, _, v)| num(v));
            Done {
                status: verdict_status(a.verdict),
                outcome: if a.admissible { "admissible" } else { "not-admissible" }.into(),
                detail: format!(
                    "admissible={} witness={witness} verdict={} unbounded={}",
                    a.admissible, a.verdict, u.monotone_growth
                ),
                rows,
            }
        }
        Op::Family { f, fam, p, mu, nu, m_budget, ideal } => {
            let fam_name = fam.to_string();
            match ideal {
                None => {
                    let v = family_membership(f, fam, p, *mu, *nu, *m_budget, &base)?;
                    Done {
                        status: membership_status(&[v.in_f, v.in_k]),
                        outcome: format!("in_f={} in_k={}", membership(v.in_f), membership(v.in_k)),
                        detail: format!("case={} levels={}", v.case, v.m_budget),
                        rows: family_rows("f", f.label(), &fam_name, &v),
                    }
                }
                Some(k) => {
                    let ic = family_ideal_check(k, f, fam, p, *mu, *nu, *m_budget, &base)?;
                    let mut rows = family_rows("k", k.label(), &fam_name, &ic.k);
                    rows.extend(family_rows("f", f.label(), &fam_name, &ic.f));
                    rows.extend(family_rows("product", "k*f", &fam_name, &ic.product));
                    let status = match ic.outcome {
                        IdealOutcome::Violated => Status::Falsified,
                        IdealOutcome::Inconclusive => Status::Inconclusive,
                        IdealOutcome::Holds => membership_status(&[ic.f.in_f, ic.f.in_k]),
                    };
                    let outcome = match ic.outcome {
                        IdealOutcome::Holds if ic.flagged => "ideal=vacuous",
                        IdealOutcome::Holds => "ideal=holds",
                        IdealOutcome::Violated => "ideal=violated",
                        IdealOutcome::Inconclusive => "ideal=inconclusive",
                    };
                    let levels: Vec<String> = ic.levels.iter().map(u32::to_string).collect();
                    Done {
                        status,
                        outcome: outcome.into(),
                        detail: format!(
                            "k_in_k={} f_in_f={} f_in_k={} product_in_k={} levels={}",
                            membership(ic.k.in_k),
                            membership(ic.f.in_f),
                            membership(ic.f.in_k),
                            membership(ic.product.in_k),
                            levels.join(" ")
                        ),
                        rows,
                    }
                }
            }
        }
        Op::Cauchy { members, p, r, mode, mu_max, nu_max } => {
            let b = base.with_indices(*mu_max, *nu_max);
            let cd = match extract_moduli(members.clone(), p, r, *mode, *mu_max, &b) {
                Ok(cd) => cd,
                Err(Error::NotCauchy { mu, k, l }) => {
                    return Ok(Done {
                        status: Status::Conclusive,
                        outcome: "not-cauchy".into(),
                        detail: format!("level {mu}: members {k} and {l} too far apart"),
                        rows: Vec::new(),
                    })
                }
                Err(e) => return Err(e),
            };
            let rep = verify_convergence(&cd, &b)?;
            let blank = String::new;
            let mut rows: Vec<Vec<String>> = cd
                .levels
                .iter()
                .map(|l| {
                    let mut row = vec!["level".into(), l.mu.to_string(), l.nu.to_string(), l.member.to_string()];
                    row.extend([l.n.to_string(), l.required.to_string()]);
                    row.extend([blank(), blank(), blank(), blank(), blank()]);
                    row
                })
                .collect();
            for (m, d) in rep.distances.iter().enumerate() {
                let mut row = vec!["distance".into(), blank(), blank(), m.to_string(), blank(), blank()];
                row.extend(estimate_cells(d));
                row.push(d.confident.to_string());
                rows.push(row);
            }
            let status = if rep.distances.iter().any(|d| !d.confident) {
                Status::Inconclusive
            } else if !rep.decreasing || !rep.bound_chain.holds() {
                Status::Falsified
            } else {
                Status::Conclusive
            };
            let last = rep.distances.last().map_or(f64::NAN, |d| d.value);
            Done {
                status,
                outcome: if status == Status::Conclusive { "converges" } else { "unverified" }.into(),
                detail: format!(
                    "levels={} monotone={} final={} final_below_bound={} bound_chain_checks={} violations={}",
                    cd.levels.len(),
                    rep.monotone,
                    num(last),
                    rep.final_below_bound,
                    rep.bound_chain.checks,
                    rep.bound_chain.violations.len()
                ),
                rows,
            }
        }
        Op::Props { suites, instances, seed } => {
            let seed = seed.unwrap_or(cfg.seed);
            let mut rows = Vec::new();
            let mut failed = Vec::new();
            for &s in suites {
                let rep = run_suite(s, seed, instances.unwrap_or_else(|| s.default_instances()), &base)?;
                if !rep.passed() {
                    failed.push(s.name());
                }
                rows.push(vec![
                    s.name().to_string(),
                    seed.to_string(),
                    rep.instances.to_string(),
                    rep.vacuous.to_string(),
                    rep.violations.len().to_string(),
                    rep.passed().to_string(),
                    rep.violations.first().cloned().unwrap_or_default(),
                ]);
            }
            Done {
                status: if failed.is_empty() { Status::Conclusive } else { Status::Falsified },
                outcome: if failed.is_empty() { "passed".into() } else { format!("failed: {}", failed.join(" ")) },
                detail: format!("suites={} seed={seed}", suites.len()),
                rows,
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn outcome(status: Status) -> TaskOutcome {
        TaskOutcome {
            index: 1,
            kind: TaskKind::Classify,
            subject: String::new(),
            status,
            outcome: String::new(),
            detail: String::new(),
            file: String::new(),
            csv: Vec::new(),
        }
    }

    #[test]
    fn exit_code_priority() {
        use Status::*;
        assert_eq!(exit_code(&[]), 0);
        assert_eq!(exit_code(&[outcome(Conclusive)]), 0);
        assert_eq!(exit_code(&[outcome(Conclusive), outcome(Inconclusive)]), 2);
        assert_eq!(exit_code(&[outcome(Inconclusive), outcome(Falsified)]), 1);
        assert_eq!(exit_code(&[outcome(Error), outcome(Inconclusive)]), 1);
    }

    #[test]
    fn csv_has_version_header() {
        let b = csv_bytes(&["a", "b"], vec![vec!["1".into(), "x,y".into()]]);
        assert_eq!(String::from_utf8(b).unwrap(), "# gfa-kit v1\na,b\n1,\"x,y\"\n");
    }

    #[test]
    fn floats_format_deterministically() {
        assert_eq!(num(std::f64::consts::E), "2.718281828459045");
        assert_eq!(num(f64::INFINITY), "inf");
        assert_eq!(num(0.1 + 0.2), "0.30000000000000004");
    }
}
