//! Round-trip certification: source oracle, generated instance, decision
//! solver, and witness translation in both directions.

use std::path::Path;
use std::time::Instant;

use ipaths_core::oracles::{brute_force_sat, brute_force_set_cover, brute_force_vertex_cover, OracleLimit};
use ipaths_core::reductions::labels::EdgeRole;
use ipaths_core::reductions::{
    assignment_to_partition, cover_to_kpaths, cubic_vc_to_setcover, kpaths_to_cover, normalize_cnf,
    parse_cubic, parse_dimacs, parse_setcover, partition_to_assignment, sat3_to_ip, setcover_to_kip, Cover,
    CubicGraph, RawCnf, ReductionError, SetCoverInstance,
};
use ipaths_core::solvers::{decide_ip, decide_kip, SolverBudget, Verdict};
use ipaths_core::{score_of_collection, validate_collection};

use crate::{parse_with, push_elapsed, read_input, CliError, Outcome, Report, ReportOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceKind {
    Cnf,
    SetCover,
    Cubic,
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub k: usize,
    /// Overrides the set-cover file's τ; restricts a cubic run to one τ.
    pub tau: Option<usize>,
    pub budget: SolverBudget,
    pub oracle_limit: OracleLimit,
    pub report: ReportOptions,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            k: 3,
            tau: None,
            budget: SolverBudget::unlimited(),
            oracle_limit: OracleLimit::default(),
            report: ReportOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Check {
    Pass,
    Fail(String),
    Inconclusive(String),
    NotApplicable,
}

impl Check {
    fn from_bool(ok: bool, why: impl FnOnce() -> String) -> Self {
        if ok {
            Check::Pass
        } else {
            Check::Fail(why())
        }
    }

    fn render(&self) -> String {
        match self {
            Check::Pass => "PASS".into(),
            Check::Fail(m) => format!("FAIL ({m})"),
            Check::Inconclusive(m) => format!("INCONCLUSIVE ({m})"),
            Check::NotApplicable => "n/a".into(),
        }
    }
}

/// Collects checks in report order and folds them into one result.
struct Checks<'a> {
    report: &'a mut Report,
    failed: bool,
    inconclusive: bool,
}

impl<'a> Checks<'a> {
    fn new(report: &'a mut Report) -> Self {
        Self {
            report,
            failed: false,
            inconclusive: false,
        }
    }

    fn record(&mut self, name: &str, c: Check) {
        match c {
            Check::Fail(_) => self.failed = true,
            Check::Inconclusive(_) => self.inconclusive = true,
            _ => {}
        }
        self.report.push(&format!("check.{name}"), c.render());
    }

    fn finish(self) {
        let (text, outcome) = if self.failed {
            ("FAIL", Outcome::Negative)
        } else if self.inconclusive {
            ("INCONCLUSIVE", Outcome::Undetermined)
        } else {
            ("PASS", Outcome::Positive)
        };
        self.report.push("result", text);
        self.report.outcome = outcome;
    }
}

fn oracle_error(e: impl std::fmt::Display) -> CliError {
    CliError::Data(format!("oracle: {e}"))
}

fn agreement(oracle_yes: bool, solver: &Verdict<impl Sized>) -> Check {
    match (oracle_yes, solver) {
        (_, Verdict::Unknown) => Check::Inconclusive("solver budget exhausted".into()),
        (true, Verdict::Yes(_)) | (false, Verdict::No) => Check::Pass,
        (true, Verdict::No) => Check::Fail("oracle yes, solver no".into()),
        (false, Verdict::Yes(_)) => Check::Fail("oracle no, solver yes".into()),
    }
}

fn verdict_name<W>(v: &Verdict<W>) -> &'static str {
    match v {
        Verdict::Yes(_) => "yes",
        Verdict::No => "no",
        Verdict::Unknown => "unknown",
    }
}

pub fn verify_cnf(raw: &RawCnf, opts: VerifyOptions) -> Result<Report, CliError> {
    let mut r = Report::new("verify");
    r.push("kind", "cnf");
    let f = match normalize_cnf(raw) {
        Ok(f) => f,
        Err(ReductionError::TriviallySatisfiable) => {
            r.push("notice", "trivially satisfiable: every clause is a tautology; no instance generated");
            r.push("result", "PASS");
            return Ok(r);
        }
        Err(e) => return Err(e.into()),
    };
    let (n, m) = (f.variable_count(), f.clause_count());
    r.push("variables", n);
    r.push("clauses", m);
    let inst = sat3_to_ip(&f);
    let g = &inst.graph;
    r.push_graph_stats(g);
    r.push_score("target", &inst.target_t, opts.report.decimal_digits);

    let oracle = brute_force_sat(&f, opts.oracle_limit).map_err(oracle_error)?;
    r.push("oracle", if oracle.is_some() { "satisfiable" } else { "unsatisfiable" });
    if let Some(a) = &oracle {
        r.push("assignment", a);
    }
    let start = Instant::now();
    let d = decide_ip(g, &inst.target_t, opts.budget)?;
    r.push("solver", verdict_name(&d.verdict));
    r.push("nodes", d.nodes_explored);
    push_elapsed(&mut r, start, opts.report);
    if let Verdict::Yes(p) = &d.verdict {
        r.push_paths(p.paths());
    }

    let type_t = inst.edges_with_role(EdgeRole::TypeT);
    let structure = Check::from_bool(
        g.edge_count() == 29 * m
            && g.vertex_count() == 21 * m + 2 * n
            && type_t.len() == 3 * m
            && type_t.iter().all(|&e| g.edge(e).weight == 29 * m as u64)
            && g.is_acyclic(),
        || "census differs from the closed form".into(),
    );
    let agree = agreement(oracle.is_some(), &d.verdict);
    let forward = match &oracle {
        None => Check::NotApplicable,
        Some(a) => match assignment_to_partition(&f, &inst, a) {
            Err(e) => Check::Fail(e.to_string()),
            Ok(p) => match score_of_collection(g, p.collection()) {
                Ok(s) => Check::from_bool(s >= inst.target_t, || "score below target".into()),
                Err(e) => Check::Fail(e.to_string()),
            },
        },
    };
    let backward = match &d.verdict {
        Verdict::Yes(p) => match partition_to_assignment(&f, &inst, p) {
            Ok(a) => Check::from_bool(f.is_satisfied_by(&a), || "recovered assignment fails".into()),
            Err(e) => Check::Fail(e.to_string()),
        },
        _ => Check::NotApplicable,
    };
    let mut checks = Checks::new(&mut r);
    checks.record("structure", structure);
    checks.record("agreement", agree);
    checks.record("forward_witness", forward);
    checks.record("backward_witness", backward);
    checks.finish();
    Ok(r)
}

pub fn verify_setcover(sc: &SetCoverInstance, opts: VerifyOptions) -> Result<Report, CliError> {
    let sc = match opts.tau {
        Some(t) => sc.with_tau(t)?,
        None => sc.clone(),
    };
    let mut r = Report::new("verify");
    r.push("kind", "setcover");
    let mut checks = Checks::new(&mut r);
    setcover_pipeline(&sc, opts, "", &mut checks)?;
    checks.finish();
    Ok(r)
}

fn setcover_pipeline(
    sc: &SetCoverInstance,
    opts: VerifyOptions,
    prefix: &str,
    checks: &mut Checks<'_>,
) -> Result<(), CliError> {
    let key = |s: &str| format!("{prefix}{s}");
    let (n, m, k) = (sc.element_count(), sc.set_count(), opts.k);
    let inst = setcover_to_kip(sc, k)?;
    let g = &inst.graph;
    let r = &mut *checks.report;
    r.push(&key("elements"), n);
    r.push(&key("sets"), m);
    r.push(&key("tau"), sc.tau());
    r.push(&key("k"), k);
    r.push(&key("vertices"), g.vertex_count());
    r.push(&key("edges"), g.edge_count());
    r.push(&key("target"), &inst.target_t);

    let oracle = brute_force_set_cover(sc, opts.oracle_limit).map_err(oracle_error)?;
    match &oracle {
        Some(c) => r.push(&key("oracle"), format!("cover {c}")),
        None => r.push(&key("oracle"), "no cover"),
    }
    let start = Instant::now();
    let d = decide_kip(g, k, &inst.target_t, opts.budget)?;
    r.push(&key("solver"), verdict_name(&d.verdict));
    r.push(&key("nodes"), d.nodes_explored);
    if !opts.report.deterministic {
        r.push(&key("time_ms"), start.elapsed().as_millis());
    }

    let structure = Check::from_bool(
        g.edge_count() == 3 * m + 5 * n + (k - 3) * (2 * n + m)
            && g.edges().all(|(_, e)| e.weight == 1)
            && g.is_acyclic(),
        || "census differs from the closed form".into(),
    );
    let agree = agreement(oracle.is_some(), &d.verdict);
    let forward = match &oracle {
        None => Check::NotApplicable,
        Some(c) => match cover_to_kpaths(sc, &inst, c) {
            Err(e) => Check::Fail(e.to_string()),
            Ok(pc) => match validate_collection(g, &pc) {
                Err(e) => Check::Fail(e.to_string()),
                Ok(()) => {
                    let s = score_of_collection(g, &pc).map_err(|e| CliError::Internal(e.to_string()))?;
                    Check::from_bool(
                        pc.paths().iter().all(|p| p.len() == k) && s >= inst.target_t,
                        || "packing too small or wrong path length".into(),
                    )
                }
            },
        },
    };
    let backward = match &d.verdict {
        Verdict::Yes(pc) => match kpaths_to_cover(sc, &inst, pc) {
            Ok(c) => {
                checks.report.push(&key("recovered_cover"), &c);
                Check::from_bool(sc.check_cover(&c).is_ok(), || "recovered cover invalid".into())
            }
            Err(e) => Check::Fail(e.to_string()),
        },
        _ => Check::NotApplicable,
    };
    checks.record(&key("structure"), structure);
    checks.record(&key("agreement"), agree);
    checks.record(&key("forward_witness"), forward);
    checks.record(&key("backward_witness"), backward);
    Ok(())
}

pub fn verify_cubic(g: &CubicGraph, opts: VerifyOptions) -> Result<Report, CliError> {
    let mut r = Report::new("verify");
    r.push("kind", "cubic");
    r.push("graph_vertices", g.vertex_count());
    r.push("graph_edges", g.edges().len());
    let taus: Vec<usize> = match opts.tau {
        Some(t) => vec![t],
        None => (1..=g.vertex_count()).collect(),
    };
    let mut checks = Checks::new(&mut r);
    for tau in taus {
        let prefix = format!("tau{tau}.");
        let vc = brute_force_vertex_cover(g, tau, opts.oracle_limit).map_err(oracle_error)?;
        let sc = cubic_vc_to_setcover(g, tau)?;
        let sc_oracle = brute_force_set_cover(&sc, opts.oracle_limit).map_err(oracle_error)?;
        let translated = match &vc {
            Some(vs) => sc.check_cover(&Cover::new(vs.iter().copied())).is_ok(),
            None => true,
        };
        checks.record(
            &format!("{prefix}vertex_cover_vs_set_cover"),
            Check::from_bool(vc.is_some() == sc_oracle.is_some() && translated, || {
                format!("vertex cover {:?}, set cover {:?}", vc, sc_oracle.map(|c| c.to_string()))
            }),
        );
        setcover_pipeline(&sc, opts, &prefix, &mut checks)?;
    }
    checks.finish();
    Ok(r)
}

pub fn cmd_verify(source: &Path, kind: SourceKind, opts: VerifyOptions) -> Result<Report, CliError> {
    let text = read_input(source)?;
    let mut r = match kind {
        SourceKind::Cnf => verify_cnf(&parse_with(source, &text, parse_dimacs)?, opts)?,
        SourceKind::SetCover => verify_setcover(&parse_with(source, &text, parse_setcover)?, opts)?,
        SourceKind::Cubic => verify_cubic(&parse_with(source, &text, parse_cubic)?, opts)?,
    };
    r.insert(1, "input", source.display());
    Ok(r)
}
