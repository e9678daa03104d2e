//! Subcommand bodies. Each returns the rendered text plus any per-job
//! errors that should still affect the exit code.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use isoverify::contfrac::{CFExpansion, RealValue};
use isoverify::exact::rational::{format_rational, to_decimal};
use isoverify::exact::{Rational, RealSpec};
use isoverify::funcspec::ApproxFunction;
use isoverify::isolation::report::{solutions_to_csv, to_json, trace_to_csv};
use isoverify::isolation::{
    check_theorem_a_with, check_theorem_b_with, enumerate_solutions_with, fast_solutions_with,
    serial, trace_theorem2_with, verify_batch, verify_theorem2_with, Budget, IsolationReport,
    SolutionRecord, TraceEntry, TraceSummary, VerifyJob, DEFAULT_MIN_WEAK,
};
use isoverify::markoff::{markoff_numbers, markoff_triples, mu};
use isoverify::Error;

use crate::config::{parse_range, Config, Resolver};
use crate::{CfArgs, MarkoffCommand, Output, SolveArgs, SpectrumCommand, TraceArgs, VerifyArgs};

/// Significant digits of every decimal annotation.
pub const DIGITS: usize = 30;
const DECIMAL_NOTE: &str =
    "decimals are rounded annotations; every verdict comes from exact comparisons";
const DEFAULT_QMAX: u64 = 10_000;
const DEFAULT_EPS: &str = "1/10";
const DEFAULT_CF_TERMS: usize = 10;

pub struct Context<'a> {
    pub r: Resolver<'a>,
    pub output: Output,
    pub budget: Budget,
}

#[derive(Debug, Default)]
pub struct Rendered {
    pub text: String,
    pub errors: Vec<Error>,
}

impl From<String> for Rendered {
    fn from(text: String) -> Self {
        Rendered {
            text,
            errors: Vec::new(),
        }
    }
}

type Out = Result<Rendered, Error>;

fn csv_error(e: impl std::fmt::Display) -> Error {
    Error::Precondition(format!("csv: {e}"))
}

fn write_csv<R: Serialize>(rows: impl IntoIterator<Item = R>) -> Result<String, Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(csv_error)?;
    }
    let bytes = w.into_inner().map_err(csv_error)?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Left-aligned columns separated by two spaces.
fn table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut width: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, c) in width.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let mut s = String::new();
        for (i, (c, w)) in cells.iter().zip(&width).enumerate() {
            if i + 1 == cells.len() {
                s.push_str(c);
            } else {
                s.push_str(&format!("{c:<w$}  "));
            }
        }
        s.trim_end().to_string() + "\n"
    };
    let mut out = line(headers.to_vec());
    for r in rows {
        out += &line(r.iter().map(String::as_str).collect());
    }
    out
}

fn approx(v: &RealValue, digits: usize) -> String {
    match v {
        RealValue::Exact(s) => s.to_decimal(digits),
        RealValue::Interval(iv) => {
            let mid = (iv.lo() + iv.hi()) / Rational::from_integer(BigInt::from(2));
            format!("~{}", to_decimal(&mid, digits))
        }
    }
}

fn exact_text(v: &RealValue) -> String {
    match v {
        RealValue::Exact(s) => s.to_string(),
        RealValue::Interval(_) => "(enclosure)".into(),
    }
}

fn flag(b: Option<bool>) -> String {
    match b {
        Some(true) => "yes".into(),
        Some(false) => "no".into(),
        None => "-".into(),
    }
}

// ---------------------------------------------------------------- cf

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CfRow {
    pub n: usize,
    #[serde(with = "serial::big")]
    pub a: BigInt,
    #[serde(with = "serial::big")]
    pub p: BigInt,
    #[serde(with = "serial::big")]
    pub q: BigInt,
    /// `|q_n·α − p_n|`.
    #[serde(with = "serial::real_value")]
    pub error: RealValue,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Period {
    pub preperiod: usize,
    pub length: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CfReport {
    #[serde(with = "serial::real_spec")]
    pub alpha: RealSpec,
    /// The whole expansion is listed.
    pub complete: bool,
    pub period: Option<Period>,
    pub rows: Vec<CfRow>,
}

pub fn expansion_text(rows: &[CfRow]) -> String {
    let mut s = format!("[{}", rows[0].a);
    for (i, r) in rows.iter().enumerate().skip(1) {
        s.push(if i == 1 { ';' } else { ',' });
        s += &r.a.to_string();
    }
    s + "]"
}

pub fn cf(ctx: &Context, a: &CfArgs) -> Out {
    let alpha = ctx.r.alpha(&a.alpha)?;
    let mut cf = CFExpansion::new(&alpha);
    let requested: Option<usize> = match ctx.r.raw(&a.n, "n") {
        Some(_) => Some(ctx.r.number(&a.n, "n", None)?),
        None => None,
    };
    let (last, complete) = match cf.finite_len() {
        Some(len) => {
            let last = requested.unwrap_or(len - 1).min(len - 1);
            (last, last == len - 1)
        }
        None => (requested.unwrap_or(DEFAULT_CF_TERMS), false),
    };
    let width = Rational::new(BigInt::from(1), BigInt::from(1) << 128);
    let mut rows = Vec::with_capacity(last + 1);
    for n in 0..=last {
        let c = cf.convergent(n)?;
        let error = if alpha.is_irrational() {
            cf.perron_error(n)?
        } else {
            cf.direct_error(n, &width)?
        };
        rows.push(CfRow {
            n,
            a: cf.quotient(n)?,
            p: c.p,
            q: c.q,
            error,
        });
    }
    let period = cf
        .period()
        .map(|(preperiod, length)| Period { preperiod, length });
    let report = CfReport {
        alpha,
        complete,
        period,
        rows,
    };
    Ok(match ctx.output {
        Output::Json => to_json("cf", &report) + "\n",
        Output::Csv => write_csv(report.rows.iter().map(|r| {
            (
                r.n,
                r.a.to_string(),
                r.p.to_string(),
                r.q.to_string(),
                exact_text(&r.error),
                approx(&r.error, DIGITS),
            )
        }))
        .map(|body| "n,a_n,p_n,q_n,error,error_decimal\n".to_string() + &body)?,
        Output::Table => {
            let mut s = format!("alpha: {}\n", report.alpha);
            s += &format!("quotients: {}", expansion_text(&report.rows));
            s += if report.complete {
                " (complete)\n"
            } else {
                " ...\n"
            };
            if let Some(p) = &report.period {
                s += &format!(
                    "period: length {} starting at index {}\n",
                    p.length, p.preperiod
                );
            }
            s += "\n";
            let rows: Vec<Vec<String>> = report
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.n.to_string(),
                        r.a.to_string(),
                        format!("{}/{}", r.p, r.q),
                        exact_text(&r.error),
                        approx(&r.error, DIGITS),
                    ]
                })
                .collect();
            s += &table(
                &["n", "a_n", "p_n/q_n", "|q_n*alpha - p_n|", "decimal"],
                &rows,
            );
            s + &format!("\n{DECIMAL_NOTE}\n")
        }
    }
    .into())
}

// ---------------------------------------------------------------- markoff

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MuReport {
    pub nu: usize,
    #[serde(with = "serial::big")]
    pub m: BigInt,
    #[serde(with = "serial::surd")]
    pub mu: isoverify::exact::QuadraticSurd,
    #[serde(with = "serial::rational")]
    pub mu_squared: Rational,
    pub decimal: String,
}

pub fn markoff(ctx: &Context, what: &MarkoffCommand) -> Out {
    let text = match what {
        MarkoffCommand::Numbers { count } => {
            let count: usize = ctx.r.number(count, "count", None)?;
            let numbers = markoff_numbers(count)?;
            let strings: Vec<String> = numbers.iter().map(ToString::to_string).collect();
            match ctx.output {
                Output::Json => to_json("markoff-numbers", &strings) + "\n",
                Output::Csv => write_csv(strings.iter().enumerate().map(|(i, m)| (i + 1, m)))
                    .map(|b| "nu,m\n".to_string() + &b)?,
                Output::Table => strings.join(" ") + "\n",
            }
        }
        MarkoffCommand::Triples { bound } => {
            let bound: BigInt = ctx.r.number(bound, "bound", None)?;
            let triples = markoff_triples(&bound);
            let rows: Vec<[String; 3]> = triples
                .iter()
                .map(|t| [t.m2.to_string(), t.m1.to_string(), t.m.to_string()])
                .collect();
            match ctx.output {
                Output::Json => to_json("markoff-triples", &rows) + "\n",
                Output::Csv => write_csv(rows.iter().map(|[a, b, c]| (a, b, c)))
                    .map(|b| "x,y,z\n".to_string() + &b)?,
                Output::Table => rows
                    .iter()
                    .map(|[a, b, c]| format!("({a},{b},{c})\n"))
                    .collect(),
            }
        }
        MarkoffCommand::Mu { nu } => {
            let nu: usize = ctx.r.number(nu, "nu", None)?;
            let c = mu(nu)?;
            let report = MuReport {
                nu,
                m: c.m.clone(),
                mu_squared: c.mu_squared(),
                decimal: c.mu.to_decimal(DIGITS),
                mu: c.mu,
            };
            let d = BigInt::from(9) * &report.m * &report.m - 4;
            match ctx.output {
                Output::Json => to_json("markoff-mu", &report) + "\n",
                Output::Csv => write_csv([(
                    report.nu,
                    report.m.to_string(),
                    report.mu.to_string(),
                    format_rational(&report.mu_squared),
                    &report.decimal,
                )])
                .map(|b| "nu,m,mu,mu_squared,decimal\n".to_string() + &b)?,
                Output::Table => format!(
                    "mu_{nu} = {}/sqrt({d})\n      = {}\nmu_{nu}^2 = {}\ndecimal: {} ({DIGITS} significant digits, non-authoritative)\n",
                    report.m,
                    report.mu,
                    format_rational(&report.mu_squared),
                    report.decimal
                ),
            }
        }
    };
    Ok(text.into())
}

// ---------------------------------------------------------------- solve

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveReport {
    #[serde(with = "serial::real_spec")]
    pub alpha: RealSpec,
    #[serde(with = "serial::function")]
    pub f: ApproxFunction,
    pub q_bound: u64,
    #[serde(with = "serial::opt_rational")]
    pub epsilon: Option<Rational>,
    pub solutions: Vec<SolutionRecord>,
}

fn solution_rows(list: &[SolutionRecord]) -> Vec<Vec<String>> {
    list.iter()
        .map(|s| {
            let (exact, dec) = match &s.exact_margin {
                Some(m) => (m.to_string(), m.to_decimal(12)),
                None => ("(enclosure: positive)".into(), "-".into()),
            };
            vec![
                s.p.to_string(),
                s.q.to_string(),
                if s.is_convergent { "yes" } else { "no" }.into(),
                exact,
                dec,
            ]
        })
        .collect()
}

fn solution_table(list: &[SolutionRecord]) -> String {
    table(
        &["p", "q", "convergent", "margin", "margin (decimal)"],
        &solution_rows(list),
    )
}

pub fn solve(ctx: &Context, a: &SolveArgs) -> Out {
    let alpha = ctx.r.alpha(&a.alpha)?;
    let f = ctx.r.function(&a.f)?;
    let q_bound: u64 = ctx.r.number(&a.qmax, "qmax", Some(DEFAULT_QMAX))?;
    let epsilon = match ctx.r.raw(&a.eps, "eps") {
        Some(_) => Some(ctx.r.rational(&a.eps, "eps", DEFAULT_EPS)?),
        None => None,
    };
    let fast = a.fast || ctx.r.raw(&None, "fast").is_some_and(|v| v == "true");
    let solutions = if fast {
        let lists = fast_solutions_with(&alpha, &f, q_bound, epsilon.as_ref(), &ctx.budget)?;
        if epsilon.is_some() {
            lists.strong
        } else {
            lists.weak
        }
    } else {
        enumerate_solutions_with(&alpha, &f, q_bound, epsilon.as_ref(), &ctx.budget)?
    };
    let report = SolveReport {
        alpha,
        f,
        q_bound,
        epsilon,
        solutions,
    };
    Ok(match ctx.output {
        Output::Json => to_json("solve", &report) + "\n",
        Output::Csv => solutions_to_csv(&report.solutions)?,
        Output::Table => {
            let which = match &report.epsilon {
                Some(e) => format!("strengthened, epsilon = {}", format_rational(e)),
                None => "plain".into(),
            };
            format!(
                "alpha: {}\nf: {}\ninequality: {which}\nq <= {}: {} solutions\n\n{}\n{DECIMAL_NOTE}\n",
                report.alpha,
                report.f,
                report.q_bound,
                report.solutions.len(),
                solution_table(&report.solutions)
            )
        }
    }
    .into())
}

// ---------------------------------------------------------------- verify

fn verify_job(r: &Resolver, a: &VerifyArgs) -> Result<VerifyJob, Error> {
    Ok(VerifyJob {
        alpha: r.alpha(&a.alpha)?,
        f: r.function(&a.f)?,
        epsilon: r.rational(&a.eps, "eps", DEFAULT_EPS)?,
        q_bound: r.number(&a.qmax, "qmax", Some(DEFAULT_QMAX))?,
        min_weak: r.number(&a.min_weak, "min-weak", Some(DEFAULT_MIN_WEAK))?,
    })
}

fn trace_summary_lines(s: &TraceSummary) -> String {
    let mut out = format!(
        "trace: {} entries, case one {}, case two {}, (c3) holds {}, (c3) active {}\n",
        s.entries, s.case_one, s.case_two, s.c3_holds, s.c3_active
    );
    let from = |o: Option<usize>| o.map_or("-".to_string(), |n| n.to_string());
    out += &format!(
        "  held from n onward: case one {}, final bound {}, strong at n {}\n",
        from(s.case_one_from),
        from(s.final_bound_from),
        from(s.strong_from)
    );
    if s.no_active_case {
        out += "  no active case in the upper half of the range\n";
    }
    out += &format!("  violations: {}\n", s.violations.len());
    out
}

fn verify_table(r: &IsolationReport) -> String {
    let mut s = format!(
        "alpha: {}\nf: {}\nepsilon: {}  q_bound: {}  min_weak: {}\n",
        r.alpha,
        r.f,
        format_rational(&r.epsilon),
        r.q_bound,
        r.min_weak
    );
    s += &format!(
        "weak solutions: {}  strong solutions: {}\n",
        r.weak_solutions.len(),
        r.strong_solutions.len()
    );
    if let Some(re) = &r.rerun {
        s += &format!(
            "re-run at {}: weak {}, strong {}\n",
            re.q_bound, re.weak_count, re.strong_count
        );
    }
    if let Some(t) = &r.trace_summary {
        s += &trace_summary_lines(t);
    }
    s += &format!("verdict: {:?}\n", r.verdict);
    for d in &r.diagnostics {
        s += &format!("note: {d}\n");
    }
    s += "\nstrong solutions:\n";
    s += &solution_table(&r.strong_solutions);
    s += "\nweak solutions:\n";
    s += &solution_table(&r.weak_solutions);
    s + &format!("\n{DECIMAL_NOTE}\n")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchItem {
    /// 1-based line in the batch file.
    pub line: usize,
    pub job: String,
    pub report: Option<IsolationReport>,
    pub error: Option<String>,
}

#[derive(Serialize)]
struct SummaryRow<'a> {
    line: usize,
    alpha: String,
    f: String,
    epsilon: String,
    q_bound: String,
    weak: String,
    strong: String,
    rerun_strong: String,
    verdict: String,
    error: &'a str,
}

fn summary_row(item: &BatchItem) -> SummaryRow<'_> {
    let r = item.report.as_ref();
    let get = |g: &dyn Fn(&IsolationReport) -> String| r.map(g).unwrap_or_default();
    SummaryRow {
        line: item.line,
        alpha: get(&|r| r.alpha.to_string()),
        f: get(&|r| r.f.to_string()),
        epsilon: get(&|r| format_rational(&r.epsilon)),
        q_bound: get(&|r| r.q_bound.to_string()),
        weak: get(&|r| r.weak_solutions.len().to_string()),
        strong: get(&|r| r.strong_solutions.len().to_string()),
        rerun_strong: get(&|r| {
            r.rerun
                .as_ref()
                .map(|x| x.strong_count.to_string())
                .unwrap_or_default()
        }),
        verdict: get(&|r| format!("{:?}", r.verdict)),
        error: item.error.as_deref().unwrap_or(""),
    }
}

/// Flag values as a config layer, so batch lines can sit on top of them.
fn flags_config(a: &VerifyArgs) -> Config {
    let mut text = String::new();
    for (k, v) in [
        ("alpha", &a.alpha),
        ("f", &a.f),
        ("eps", &a.eps),
        ("qmax", &a.qmax),
        ("min-weak", &a.min_weak),
    ] {
        if let Some(v) = v {
            text += &format!("{k}={v}\n");
        }
    }
    Config::parse(&text).expect("flag values are single lines")
}

fn batch(ctx: &Context, a: &VerifyArgs, path: &str) -> Out {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Precondition(format!("cannot read {path}: {e}")))?;
    let base = flags_config(a).over(ctx.r.config);
    let none = VerifyArgs {
        alpha: None,
        f: None,
        eps: None,
        qmax: None,
        min_weak: None,
        batch: None,
    };
    let mut items = Vec::new();
    let mut jobs = Vec::new();
    let mut errors = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let job = line.trim();
        if job.is_empty() || job.starts_with('#') {
            continue;
        }
        let parsed = Config::parse(&job.replace(';', "\n")).and_then(|c| {
            let c = c.over(&base);
            verify_job(&Resolver { config: &c }, &none)
        });
        let error = match parsed {
            Ok(j) => {
                jobs.push((items.len(), j));
                None
            }
            Err(e) => {
                let msg = format!("line {}: {e}", i + 1);
                errors.push(e);
                Some(msg)
            }
        };
        items.push(BatchItem {
            line: i + 1,
            job: job.to_string(),
            report: None,
            error,
        });
    }
    let only: Vec<VerifyJob> = jobs.iter().map(|(_, j)| j.clone()).collect();
    for ((k, _), result) in jobs.iter().zip(verify_batch(&only, &ctx.budget)) {
        match result {
            Ok(r) => items[*k].report = Some(r),
            Err(e) => {
                items[*k].error = Some(format!("line {}: {e}", items[*k].line));
                errors.push(e);
            }
        }
    }
    let text = match ctx.output {
        Output::Json => to_json("verify-batch", &items) + "\n",
        Output::Csv => write_csv(items.iter().map(summary_row))?,
        Output::Table => {
            let mut s = String::new();
            for item in &items {
                s += &format!("== line {}: {}\n", item.line, item.job);
                match (&item.report, &item.error) {
                    (Some(r), _) => s += &verify_table(r),
                    (None, Some(e)) => s += &format!("error: {e}\n"),
                    (None, None) => {}
                }
                s += "\n";
            }
            s
        }
    };
    Ok(Rendered { text, errors })
}

pub fn verify(ctx: &Context, a: &VerifyArgs) -> Out {
    if let Some(path) = ctx.r.raw(&a.batch, "batch") {
        return batch(ctx, a, &path);
    }
    let j = verify_job(&ctx.r, a)?;
    let report = verify_theorem2_with(
        &j.alpha,
        &j.f,
        &j.epsilon,
        j.q_bound,
        j.min_weak,
        &ctx.budget,
    )?;
    Ok(match ctx.output {
        Output::Json => to_json("verify", &report) + "\n",
        Output::Csv => write_csv([summary_row(&BatchItem {
            line: 0,
            job: String::new(),
            report: Some(report),
            error: None,
        })])?,
        Output::Table => verify_table(&report),
    }
    .into())
}

// ---------------------------------------------------------------- trace

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceReport {
    #[serde(with = "serial::real_spec")]
    pub alpha: RealSpec,
    #[serde(with = "serial::function")]
    pub f: ApproxFunction,
    #[serde(with = "serial::rational")]
    pub epsilon: Rational,
    pub entries: Vec<TraceEntry>,
    pub summary: TraceSummary,
}

fn trace_rows(entries: &[TraceEntry]) -> Vec<Vec<String>> {
    entries
        .iter()
        .map(|e| {
            let failures = e.checks.failures();
            vec![
                e.n.to_string(),
                e.q_n.to_string(),
                format!("{:?}", e.case),
                format_rational(&e.f_n),
                e.a_n.to_string(),
                e.b_n.to_string(),
                if e.checks.c3 { "yes" } else { "no" }.into(),
                e.delta_n.as_ref().map_or("-".into(), |d| approx(d, 12)),
                e.c_n.as_ref().map_or("-".into(), ToString::to_string),
                e.k.to_string(),
                flag(e.checks.c5),
                flag(e.final_bound_holds),
                flag(e.checks.strong_at_n),
                if failures.is_empty() {
                    "-".into()
                } else {
                    failures.join(",")
                },
            ]
        })
        .collect()
}

pub fn trace(ctx: &Context, a: &TraceArgs) -> Out {
    let alpha = ctx.r.alpha(&a.alpha)?;
    let f = ctx.r.function(&a.f)?;
    let epsilon = ctx.r.rational(&a.eps, "eps", DEFAULT_EPS)?;
    let range = parse_range(&ctx.r.raw(&a.n, "n").unwrap_or_else(|| "0..20".into()))?;
    let entries = trace_theorem2_with(&alpha, &f, &epsilon, range, &ctx.budget)?;
    let summary = TraceSummary::from_entries(&entries);
    let report = TraceReport {
        alpha,
        f,
        epsilon,
        entries,
        summary,
    };
    Ok(match ctx.output {
        Output::Json => to_json("trace", &report) + "\n",
        Output::Csv => trace_to_csv(&report.entries)?,
        Output::Table => {
            let mut s = format!(
                "alpha: {}\nf: {}\nepsilon: {}\n\n",
                report.alpha,
                report.f,
                format_rational(&report.epsilon)
            );
            s += &table(
                &[
                    "n", "q_n", "case", "f_n", "A_n", "B_n", "c3", "delta_n", "C_n", "k", "c5",
                    "final", "strong", "failures",
                ],
                &trace_rows(&report.entries),
            );
            s += "\n";
            s += &trace_summary_lines(&report.summary);
            for v in &report.summary.violations {
                s += &format!("  violation: {v}\n");
            }
            s + &format!("\n{DECIMAL_NOTE}\n")
        }
    }
    .into())
}

// ---------------------------------------------------------------- spectrum

#[derive(Serialize)]
struct PairRow {
    set: &'static str,
    p: String,
    q: String,
}

pub fn spectrum(ctx: &Context, which: &SpectrumCommand) -> Out {
    let text = match which {
        SpectrumCommand::A {
            nu,
            gamma,
            alpha,
            qmax,
        } => {
            let nu: usize = ctx.r.number(nu, "nu", None)?;
            let gamma = parse_gamma(&ctx.r, gamma)?;
            let alpha = ctx.r.alpha(alpha)?;
            let q_bound: u64 = ctx.r.number(qmax, "qmax", Some(DEFAULT_QMAX))?;
            let r = check_theorem_a_with(nu, &gamma, &alpha, q_bound, &ctx.budget)?;
            match ctx.output {
                Output::Json => to_json("theorem-a", &r) + "\n",
                Output::Csv => write_csv(
                    r.gamma_solutions
                        .iter()
                        .map(|s| PairRow {
                            set: "gamma",
                            p: s.p.to_string(),
                            q: s.q.to_string(),
                        })
                        .chain(r.mu_next_solutions.iter().map(|s| PairRow {
                            set: "mu_next",
                            p: s.p.to_string(),
                            q: s.q.to_string(),
                        })),
                )
                .map(|b| if b.is_empty() { "set,p,q\n".into() } else { b })?,
                Output::Table => {
                    let pairs = |v: Vec<(String, String)>| {
                        v.iter()
                            .map(|(p, q)| format!("{p}/{q}"))
                            .collect::<Vec<_>>()
                            .join(" ")
                    };
                    format!(
                        "nu: {nu}\ngamma: {}  (between mu_{} = {} and mu_{nu} = {})\nalpha: {}\nq_bound: {}\n\
                         gamma solutions: {} ({} with q <= q_bound/2)\n  {}\n\
                         mu_{} solutions: {} ({} with q <= q_bound/2)\n  {}\nnote: {}\n",
                        format_rational(&r.gamma),
                        nu + 1,
                        r.mu_next.to_decimal(12),
                        r.mu_nu.to_decimal(12),
                        r.alpha,
                        r.q_bound,
                        r.gamma_solutions.len(),
                        r.gamma_count_at_half,
                        pairs(r.gamma_solutions.iter().map(|s| (s.p.to_string(), s.q.to_string())).collect()),
                        nu + 1,
                        r.mu_next_solutions.len(),
                        r.mu_next_count_at_half,
                        pairs(r.mu_next_solutions.iter().map(|s| (s.p.to_string(), s.q.to_string())).collect()),
                        r.note
                    )
                }
            }
        }
        SpectrumCommand::B { nu, alpha, qmax } => {
            let nu: usize = ctx.r.number(nu, "nu", None)?;
            let alpha = ctx.r.alpha(alpha)?;
            let q_bound: u64 = ctx.r.number(qmax, "qmax", Some(DEFAULT_QMAX))?;
            let r = check_theorem_b_with(nu, &alpha, q_bound, &ctx.budget)?;
            let rows: Vec<Vec<String>> = r
                .checks
                .iter()
                .map(|c| {
                    vec![
                        c.p.to_string(),
                        c.q.to_string(),
                        if c.below_psi { "yes" } else { "no" }.into(),
                        if c.equality { "yes" } else { "no" }.into(),
                    ]
                })
                .collect();
            match ctx.output {
                Output::Json => to_json("theorem-b", &r) + "\n",
                Output::Csv => write_csv(rows.iter().map(|v| (&v[0], &v[1], &v[2], &v[3])))
                    .map(|b| "p,q,below_psi,equality\n".to_string() + &b)?,
                Output::Table => format!(
                    "nu: {nu}\nmu_{nu}: {} ~ {}\nalpha: {}\nq_bound: {}\n\n{}\nnote: {}\n",
                    r.mu,
                    r.mu.to_decimal(DIGITS),
                    r.alpha,
                    r.q_bound,
                    table(&["p", "q", "below psi", "equality"], &rows),
                    r.note
                ),
            }
        }
    };
    Ok(text.into())
}

fn parse_gamma(r: &Resolver, flag: &Option<String>) -> Result<Rational, Error> {
    let text = r.required(flag, "gamma")?;
    Ok(isoverify::exact::rational::parse_rational(&text)?)
}
