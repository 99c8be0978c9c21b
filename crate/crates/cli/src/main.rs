use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ipaths_cli::{
    cmd_gen_ip, cmd_gen_kip, cmd_gen_setcover, cmd_score, cmd_solve, cmd_verify, CliError, Mode, Problem,
    Report, ReportOptions, SolveOptions, SourceKind, VerifyOptions,
};
use ipaths_core::solvers::SolverBudget;

/// Exact solvers and hardness-instance tooling for interestingness paths.
#[derive(Debug, Parser)]
#[command(name = "ipaths", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build an IP instance from a DIMACS 3-CNF.
    GenIp {
        cnf: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Build a k-IP instance from a (3,2) set-cover file.
    GenKip {
        setcover: PathBuf,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(short, long)]
        out: PathBuf,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Build a (3,2) set-cover file from a cubic graph.
    GenSetcover {
        cubic: PathBuf,
        #[arg(long)]
        tau: usize,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Solve an instance file; a `target` trailer makes it a decision.
    Solve {
        instance: PathBuf,
        #[arg(long, value_enum)]
        problem: Option<ProblemArg>,
        #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
        mode: ModeArg,
        #[arg(long)]
        k: Option<usize>,
        #[command(flatten)]
        budget: BudgetArgs,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Certify a source instance against its reduction.
    Verify {
        source: PathBuf,
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long)]
        tau: Option<usize>,
        #[command(flatten)]
        budget: BudgetArgs,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Validate and score a witness file against an instance.
    Score {
        instance: PathBuf,
        witness: PathBuf,
        #[command(flatten)]
        report: ReportArgs,
    },
}

#[derive(Debug, Args)]
struct BudgetArgs {
    #[arg(long)]
    budget_nodes: Option<u64>,
    #[arg(long)]
    budget_seconds: Option<u64>,
}

impl From<BudgetArgs> for SolverBudget {
    fn from(b: BudgetArgs) -> Self {
        SolverBudget {
            max_nodes: b.budget_nodes,
            max_seconds: b.budget_seconds,
        }
    }
}

#[derive(Debug, Args)]
struct ReportArgs {
    /// Also print certified base-2 logarithms to this many significant digits.
    #[arg(long)]
    decimal_digits: Option<usize>,
    /// Omit timing fields.
    #[arg(long)]
    deterministic: bool,
}

impl From<ReportArgs> for ReportOptions {
    fn from(r: ReportArgs) -> Self {
        ReportOptions {
            decimal_digits: r.decimal_digits,
            deterministic: r.deterministic,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ProblemArg {
    MaxIp,
    Ip,
    Kip,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Greedy,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    Cnf,
    Setcover,
    Cubic,
}

fn run(cli: Cli) -> Result<Report, CliError> {
    match cli.command {
        Command::GenIp { cnf, out, report } => cmd_gen_ip(&cnf, &out, report.into()),
        Command::GenKip {
            setcover,
            k,
            out,
            report,
        } => cmd_gen_kip(&setcover, k, &out, report.into()),
        Command::GenSetcover { cubic, tau, out } => cmd_gen_setcover(&cubic, tau, &out),
        Command::Solve {
            instance,
            problem,
            mode,
            k,
            budget,
            report,
        } => cmd_solve(
            &instance,
            SolveOptions {
                problem: problem.map(|p| match p {
                    ProblemArg::MaxIp => Problem::MaxIp,
                    ProblemArg::Ip => Problem::Ip,
                    ProblemArg::Kip => Problem::Kip,
                }),
                mode: match mode {
                    ModeArg::Exact => Mode::Exact,
                    ModeArg::Greedy => Mode::Greedy,
                },
                k,
                budget: budget.into(),
                report: report.into(),
            },
        ),
        Command::Verify {
            source,
            kind,
            k,
            tau,
            budget,
            report,
        } => {
            let kind = match kind {
                KindArg::Cnf => SourceKind::Cnf,
                KindArg::Setcover => SourceKind::SetCover,
                KindArg::Cubic => SourceKind::Cubic,
            };
            let opts = VerifyOptions {
                k,
                tau,
                budget: budget.into(),
                report: report.into(),
                ..VerifyOptions::default()
            };
            cmd_verify(&source, kind, opts)
        }
        Command::Score {
            instance,
            witness,
            report,
        } => cmd_score(&instance, &witness, report.into()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 64 } else { 0 });
        }
    };
    match run(cli) {
        Ok(report) => {
            let mut out = io::stdout().lock();
            if out.write_all(report.render().as_bytes()).and_then(|_| out.flush()).is_err() {
                return ExitCode::from(73);
            }
            ExitCode::from(report.outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("ipaths: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
