//! `isoverify`: continued fractions, Markoff numbers and isolation checks
//! from the command line.

mod commands;
mod config;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use isoverify::Error;

use config::{budget_from_env, Config, Resolver};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "isoverify",
    version,
    about = "Exact checks of rational approximation inequalities"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum)]
    output: Option<Output>,
    /// File of key=value lines mirroring the long flags; flags win.
    #[arg(long, global = true)]
    config: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Continued-fraction expansion with convergents and their errors.
    Cf(CfArgs),
    /// Markoff numbers, triples and spectrum constants.
    Markoff {
        #[command(subcommand)]
        what: MarkoffCommand,
    },
    /// Solutions of |alpha - p/q| < f(q)/q^2, or the strengthened inequality with --eps.
    Solve(SolveArgs),
    /// Weak and strong solution lists, a re-run at twice the bound, and a trace.
    Verify(VerifyArgs),
    /// Per-convergent trace of the isolation argument.
    Trace(TraceArgs),
    /// Spot checks against the discrete spectrum constants.
    Spectrum {
        #[command(subcommand)]
        which: SpectrumCommand,
    },
}

#[derive(Debug, Args)]
pub struct CfArgs {
    /// Real number: rat:P/Q, surd:EXPR or stream:e|tan1|coth-half.
    #[arg(long)]
    pub alpha: Option<String>,
    /// Last index shown (default: 10, or the whole finite expansion).
    #[arg(long)]
    pub n: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum MarkoffCommand {
    /// The first COUNT Markoff numbers.
    Numbers {
        #[arg(long)]
        count: Option<String>,
    },
    /// All triples with maximum at most BOUND.
    Triples {
        #[arg(long)]
        bound: Option<String>,
    },
    /// mu_nu = m/sqrt(9m^2 - 4).
    Mu {
        #[arg(long)]
        nu: Option<String>,
    },
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub alpha: Option<String>,
    /// Approximation function in the DSL, e.g. "const 1/2" or "pow 2".
    #[arg(long)]
    pub f: Option<String>,
    #[arg(long)]
    pub qmax: Option<String>,
    /// Solve the strengthened inequality with this epsilon.
    #[arg(long)]
    pub eps: Option<String>,
    /// Convergent path (needs a decreasing f).
    #[arg(long)]
    pub fast: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub f: Option<String>,
    #[arg(long)]
    pub eps: Option<String>,
    #[arg(long)]
    pub qmax: Option<String>,
    #[arg(long = "min-weak")]
    pub min_weak: Option<String>,
    /// File with one job per line: `alpha=...; f=...; eps=...; qmax=...`.
    #[arg(long)]
    pub batch: Option<String>,
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub f: Option<String>,
    #[arg(long)]
    pub eps: Option<String>,
    /// Index range a..b, inclusive.
    #[arg(long)]
    pub n: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum SpectrumCommand {
    /// Counts for gamma strictly between mu_{nu+1} and mu_nu.
    A {
        #[arg(long)]
        nu: Option<String>,
        #[arg(long)]
        gamma: Option<String>,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        qmax: Option<String>,
    },
    /// Which solutions for mu_nu also satisfy the psi_nu bound.
    B {
        #[arg(long)]
        nu: Option<String>,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        qmax: Option<String>,
    },
}

/// 2 for bad input, 3 for budget or undecided, 4 for internal failures.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_)
        | Error::Precondition(_)
        | Error::GammaOutOfRange { .. }
        | Error::RangeViolation { .. }
        | Error::MonotonicityViolation { .. }
        | Error::DivisionByZero
        | Error::FiniteExpansionExhausted { .. } => 2,
        Error::Undecided { .. }
        | Error::Ambiguous
        | Error::BudgetExceeded(_)
        | Error::FactoringBudget { .. } => 3,
        Error::Invariant(_) | Error::UnicityViolation { .. } | Error::MixedField { .. } => 4,
    }
}

pub fn describe(e: &Error) -> String {
    match e {
        Error::Parse(p) => format!("error: could not parse input\n{}", p.caret()),
        other => format!("error: {other}"),
    }
}

fn run(cli: Cli) -> Result<commands::Rendered, Error> {
    let config = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    let r = Resolver { config: &config };
    let output = r.output(&cli.output)?;
    let budget = budget_from_env()?;
    let ctx = commands::Context { r, output, budget };
    match &cli.command {
        Command::Cf(a) => commands::cf(&ctx, a),
        Command::Markoff { what } => commands::markoff(&ctx, what),
        Command::Solve(a) => commands::solve(&ctx, a),
        Command::Verify(a) => commands::verify(&ctx, a),
        Command::Trace(a) => commands::trace(&ctx, a),
        Command::Spectrum { which } => commands::spectrum(&ctx, which),
    }
}

/// `--alpha surd:sqrt 2` unquoted: words up to the next flag join the value.
fn join_alpha(args: impl Iterator<Item = String>) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    // 0: not after --alpha, 1: value expected, 2: value started.
    let mut state = 0;
    for a in args {
        if state > 0 && !a.starts_with("--") {
            if state == 1 {
                out.push(a);
                state = 2;
            } else {
                let last = out.last_mut().expect("value pushed");
                last.push(' ');
                last.push_str(&a);
            }
            continue;
        }
        state = match a.as_str() {
            "--alpha" => 1,
            _ if a.starts_with("--alpha=") => 2,
            _ => 0,
        };
        out.push(a);
    }
    out
}

fn main() -> ExitCode {
    let cli = Cli::parse_from(join_alpha(std::env::args()));
    match run(cli) {
        Ok(out) => {
            print!("{}", out.text);
            for e in &out.errors {
                eprintln!("{}", describe(e));
            }
            ExitCode::from(out.errors.iter().map(exit_code).max().unwrap_or(0))
        }
        Err(e) => {
            eprintln!("{}", describe(&e));
            ExitCode::from(exit_code(&e))
        }
    }
}
