//! Command implementations behind the `ipaths` binary.
//!
//! Every command returns a [`Report`]; the binary prints it and exits with
//! [`Outcome::exit_code`]. Failures that prevent a verdict are [`CliError`]s,
//! which map to the sysexits range.

mod report;
pub mod verify;

use std::fs;
use std::io;
use std::path::Path;
use std::time::Instant;

use ipaths_core::format::{parse_witness, FormatError, InstanceFile};
use ipaths_core::reductions::{
    cubic_vc_to_setcover, normalize_cnf, parse_cubic, parse_dimacs, parse_setcover, sat3_to_ip,
    setcover_to_kip, write_setcover, ReductionError,
};
use ipaths_core::solvers::{
    decide_ip, decide_kip, exact_ip, exact_kip, greedy_kip, max_ip_dag, SolverBudget, SolverError,
    Verdict,
};
use ipaths_core::{score_of_collection, validate_collection, validate_partition, PathCollection};
use thiserror::Error;

pub use report::{Outcome, Report};
pub use verify::{cmd_verify, verify_cnf, verify_cubic, verify_setcover, SourceKind, VerifyOptions};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Parse { path: String, source: FormatError },
    #[error("{0}")]
    Data(String),
    #[error("cannot read {path}: {source}")]
    NoInput { path: String, source: io::Error },
    #[error("cannot write {path}: {source}")]
    Output { path: String, source: io::Error },
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 64,
            CliError::Parse { .. } | CliError::Data(_) => 65,
            CliError::NoInput { .. } => 66,
            CliError::Internal(_) => 70,
            CliError::Output { .. } => 73,
        }
    }
}

impl From<ReductionError> for CliError {
    fn from(e: ReductionError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        CliError::Data(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Problem {
    MaxIp,
    Ip,
    Kip,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Exact,
    Greedy,
}

/// Presentation knobs shared by all commands.
#[derive(Debug, Clone, Copy, Default)]
pub struct ReportOptions {
    pub decimal_digits: Option<usize>,
    /// Drops wall-clock fields so reports are byte-identical across runs.
    pub deterministic: bool,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SolveOptions {
    /// Inferred from the instance when absent: `kip` if it declares `k`, else `ip`.
    pub problem: Option<Problem>,
    pub mode: Mode,
    pub k: Option<usize>,
    pub budget: SolverBudget,
    pub report: ReportOptions,
}

pub(crate) fn read_input(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::NoInput {
        path: path.display().to_string(),
        source,
    })
}

fn write_output(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Output {
        path: path.display().to_string(),
        source,
    })
}

pub(crate) fn parse_with<T>(
    path: &Path,
    text: &str,
    parse: impl FnOnce(&str) -> Result<T, FormatError>,
) -> Result<T, CliError> {
    parse(text).map_err(|source| CliError::Parse {
        path: path.display().to_string(),
        source,
    })
}

pub(crate) fn push_elapsed(r: &mut Report, start: Instant, opts: ReportOptions) {
    if !opts.deterministic {
        r.push("time_ms", start.elapsed().as_millis());
    }
}

pub fn cmd_gen_ip(cnf_path: &Path, out_path: &Path, opts: ReportOptions) -> Result<Report, CliError> {
    let text = read_input(cnf_path)?;
    let raw = parse_with(cnf_path, &text, parse_dimacs)?;
    let mut r = Report::new("gen-ip");
    r.push("input", cnf_path.display());
    let f = match normalize_cnf(&raw) {
        Ok(f) => f,
        Err(ReductionError::TriviallySatisfiable) => {
            r.push("notice", "trivially satisfiable: every clause is a tautology; no instance written");
            return Ok(r);
        }
        Err(e) => return Err(e.into()),
    };
    let inst = sat3_to_ip(&f);
    write_output(out_path, &inst.to_instance_file().write())?;
    let (n, m) = (f.variable_count(), f.clause_count());
    r.push("output", out_path.display());
    r.push("variables", n);
    r.push("clauses", m);
    r.push_graph_stats(&inst.graph);
    r.push("expected_vertices", 21 * m + 2 * n);
    r.push("expected_edges", 29 * m);
    r.push_score("target", &inst.target_t, opts.decimal_digits);
    Ok(r)
}

pub fn cmd_gen_kip(sc_path: &Path, k: usize, out_path: &Path, opts: ReportOptions) -> Result<Report, CliError> {
    let text = read_input(sc_path)?;
    let sc = parse_with(sc_path, &text, parse_setcover)?;
    let inst = setcover_to_kip(&sc, k)?;
    write_output(out_path, &inst.to_instance_file().write())?;
    let (n, m) = (sc.element_count(), sc.set_count());
    let mut r = Report::new("gen-kip");
    r.push("input", sc_path.display());
    r.push("output", out_path.display());
    r.push("elements", n);
    r.push("sets", m);
    r.push("tau", sc.tau());
    r.push("k", k);
    r.push_graph_stats(&inst.graph);
    r.push("expected_edges", 3 * m + 5 * n + (k - 3) * (2 * n + m));
    r.push_score("target", &inst.target_t, opts.decimal_digits);
    Ok(r)
}

pub fn cmd_gen_setcover(cubic_path: &Path, tau: usize, out_path: &Path) -> Result<Report, CliError> {
    let text = read_input(cubic_path)?;
    let g = parse_with(cubic_path, &text, parse_cubic)?;
    let sc = cubic_vc_to_setcover(&g, tau)?;
    write_output(out_path, &write_setcover(&sc))?;
    let mut r = Report::new("gen-setcover");
    r.push("input", cubic_path.display());
    r.push("output", out_path.display());
    r.push("graph_vertices", g.vertex_count());
    r.push("graph_edges", g.edges().len());
    r.push("elements", sc.element_count());
    r.push("sets", sc.set_count());
    r.push("tau", sc.tau());
    Ok(r)
}

fn load_instance(path: &Path) -> Result<InstanceFile, CliError> {
    let text = read_input(path)?;
    parse_with(path, &text, InstanceFile::parse)
}

fn resolve_k(file: &InstanceFile, flag: Option<usize>) -> Result<Option<usize>, CliError> {
    match (file.k, flag) {
        (Some(a), Some(b)) if a != b => Err(CliError::Usage(format!(
            "instance declares k = {a} but --k {b} was given"
        ))),
        (a, b) => Ok(a.or(b)),
    }
}

pub fn cmd_solve(instance_path: &Path, opts: SolveOptions) -> Result<Report, CliError> {
    let file = load_instance(instance_path)?;
    let k = resolve_k(&file, opts.k)?;
    let problem = opts
        .problem
        .unwrap_or(if k.is_some() { Problem::Kip } else { Problem::Ip });
    if opts.mode == Mode::Greedy && problem != Problem::Kip {
        return Err(CliError::Usage("greedy mode is only available for kip".into()));
    }
    let g = &file.graph;
    let digits = opts.report.decimal_digits;
    let mut r = Report::new("solve");
    r.push("input", instance_path.display());
    r.push_graph_stats(g);
    let start = Instant::now();
    match problem {
        Problem::MaxIp => {
            r.push("problem", "max-ip");
            r.push("mode", "exact");
            let best = max_ip_dag(g)?;
            push_elapsed(&mut r, start, opts.report);
            r.push("optimal", true);
            r.push_score("score", &best.score, digits);
            r.push_paths([&best.best_path]);
        }
        Problem::Ip => {
            r.push("problem", "ip");
            r.push("mode", "exact");
            match &file.target {
                Some(t) => {
                    r.push_score("target", t, digits);
                    let d = decide_ip(g, t, opts.budget)?;
                    push_elapsed(&mut r, start, opts.report);
                    r.push("nodes", d.nodes_explored);
                    match d.verdict {
                        Verdict::Yes(p) => {
                            decision_witness(&mut r, g, p.collection(), digits)?;
                        }
                        Verdict::No => no(&mut r),
                        Verdict::Unknown => unknown(&mut r),
                    }
                }
                None => {
                    let res = exact_ip(g, opts.budget)?;
                    push_elapsed(&mut r, start, opts.report);
                    optimum(&mut r, &res, digits);
                }
            }
        }
        Problem::Kip => {
            let k = k.ok_or_else(|| CliError::Usage("kip needs k from the instance or --k".into()))?;
            r.push("problem", "kip");
            r.push("k", k);
            match opts.mode {
                Mode::Exact => {
                    r.push("mode", "exact");
                    match &file.target {
                        Some(t) => {
                            r.push_score("target", t, digits);
                            let d = decide_kip(g, k, t, opts.budget)?;
                            push_elapsed(&mut r, start, opts.report);
                            r.push("nodes", d.nodes_explored);
                            match d.verdict {
                                Verdict::Yes(c) => decision_witness(&mut r, g, &c, digits)?,
                                Verdict::No => no(&mut r),
                                Verdict::Unknown => unknown(&mut r),
                            }
                        }
                        None => {
                            let res = exact_kip(g, k, opts.budget)?;
                            push_elapsed(&mut r, start, opts.report);
                            optimum(&mut r, &res, digits);
                        }
                    }
                }
                Mode::Greedy => {
                    r.push("mode", "greedy");
                    let res = greedy_kip(g, k)?;
                    push_elapsed(&mut r, start, opts.report);
                    r.push("nodes", res.nodes_explored);
                    r.push("optimal", false);
                    match &file.target {
                        // greedy can certify yes but never no
                        Some(t) => {
                            r.push_score("target", t, digits);
                            if res.score >= *t {
                                r.push("verdict", "yes");
                            } else {
                                unknown(&mut r);
                            }
                        }
                        None => r.outcome = Outcome::Undetermined,
                    }
                    r.push_score("score", &res.score, digits);
                    r.push_paths(res.collection.paths());
                }
            }
        }
    }
    Ok(r)
}

fn decision_witness(
    r: &mut Report,
    g: &ipaths_core::WeightedDigraph,
    c: &PathCollection,
    digits: Option<usize>,
) -> Result<(), CliError> {
    let score = score_of_collection(g, c).map_err(|e| CliError::Internal(format!("solver witness invalid: {e}")))?;
    r.push("verdict", "yes");
    r.push_score("score", &score, digits);
    r.push_paths(c.paths());
    Ok(())
}

fn no(r: &mut Report) {
    r.push("verdict", "no");
    r.outcome = Outcome::Negative;
}

fn unknown(r: &mut Report) {
    r.push("verdict", "unknown");
    r.outcome = Outcome::Undetermined;
}

fn optimum(r: &mut Report, res: &ipaths_core::solvers::PackingResult, digits: Option<usize>) {
    r.push("nodes", res.nodes_explored);
    r.push("optimal", res.optimal);
    if !res.optimal {
        r.outcome = Outcome::Undetermined;
    }
    r.push_score("score", &res.score, digits);
    r.push_paths(res.collection.paths());
}

pub fn cmd_score(instance_path: &Path, witness_path: &Path, opts: ReportOptions) -> Result<Report, CliError> {
    let file = load_instance(instance_path)?;
    let text = read_input(witness_path)?;
    let c = parse_with(witness_path, &text, parse_witness)?;
    let g = &file.graph;
    let mut r = Report::new("score");
    r.push("input", instance_path.display());
    r.push("witness", witness_path.display());
    r.push_graph_stats(g);
    r.push("paths", c.len());
    let problem = match file.k {
        Some(k) => format!("kip k={k}"),
        None if file.target.is_some() => "ip".to_string(),
        None => "collection".to_string(),
    };
    r.push("problem", &problem);

    let invalid = match (file.k, &file.target) {
        (Some(k), _) => validate_collection(g, &c).err().map(|e| e.to_string()).or_else(|| {
            c.paths()
                .iter()
                .position(|p| p.len() != k)
                .map(|i| format!("path {i} has {} edges, expected {k}", c.paths()[i].len()))
        }),
        (None, Some(_)) => validate_partition(g, &c).err().map(|e| e.to_string()),
        (None, None) => validate_collection(g, &c).err().map(|e| e.to_string()),
    };
    if let Some(msg) = invalid {
        r.push("valid", false);
        r.push("error", msg);
        r.push("verdict", "FAIL");
        r.outcome = Outcome::Negative;
        return Ok(r);
    }
    r.push("valid", true);
    let score = score_of_collection(g, &c).map_err(|e| CliError::Internal(e.to_string()))?;
    r.push_score("score", &score, opts.decimal_digits);
    if let Some(t) = &file.target {
        r.push_score("target", t, opts.decimal_digits);
        let relation = match score.cmp(t) {
            std::cmp::Ordering::Equal => "equal to target",
            std::cmp::Ordering::Greater => "above target",
            std::cmp::Ordering::Less => "below target",
        };
        r.push("comparison", relation);
        if score >= *t {
            r.push("verdict", "yes");
        } else {
            no(&mut r);
        }
    }
    Ok(r)
}
