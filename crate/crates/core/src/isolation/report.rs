//! JSON and CSV forms of reports.
//!
//! JSON documents are `{"schema": 1, "kind": …, "report": …}`. Integers,
//! rationals and surds are strings, so nothing is rounded on the way out.

use num_bigint::BigInt;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::serial;
use super::trace::{Case, TraceEntry};
use super::SolutionRecord;
use crate::contfrac::RealValue;
use crate::error::{Error, Result};
use crate::exact::rational::format_rational;
use crate::exact::{QuadraticSurd, Rational};

pub const SCHEMA: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Envelope<T> {
    schema: u32,
    kind: String,
    report: T,
}

/// Pretty JSON for any report under a `kind` tag.
pub fn to_json<T: Serialize>(kind: &str, report: &T) -> String {
    let doc = Envelope {
        schema: SCHEMA,
        kind: kind.to_string(),
        report,
    };
    serde_json::to_string_pretty(&doc).expect("report types serialize")
}

/// Loads a document written by [`to_json`], checking schema and kind.
pub fn from_json<T: DeserializeOwned>(kind: &str, text: &str) -> Result<T> {
    let doc: Envelope<T> = serde_json::from_str(text)
        .map_err(|e| Error::Precondition(format!("malformed report: {e}")))?;
    if doc.schema != SCHEMA {
        return Err(Error::Precondition(format!(
            "report schema {} is not {SCHEMA}",
            doc.schema
        )));
    }
    if doc.kind != kind {
        return Err(Error::Precondition(format!(
            "expected a {kind} report, found {}",
            doc.kind
        )));
    }
    Ok(doc.report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct SolutionRow {
    #[serde(with = "serial::big")]
    p: BigInt,
    #[serde(with = "serial::big")]
    q: BigInt,
    is_convergent: bool,
    #[serde(with = "serial::sign")]
    margin: std::cmp::Ordering,
    #[serde(with = "serial::opt_surd")]
    exact_margin: Option<QuadraticSurd>,
}

fn csv_error(e: impl std::fmt::Display) -> Error {
    Error::Precondition(format!("csv: {e}"))
}

fn write_rows<R: Serialize>(rows: impl IntoIterator<Item = R>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(csv_error)?;
    }
    let bytes = w.into_inner().map_err(csv_error)?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// One row per solution: `p,q,is_convergent,margin,exact_margin`.
pub fn solutions_to_csv(rows: &[SolutionRecord]) -> Result<String> {
    if rows.is_empty() {
        return Ok("p,q,is_convergent,margin,exact_margin\n".into());
    }
    write_rows(rows.iter().map(|s| SolutionRow {
        p: s.p.clone(),
        q: s.q.clone(),
        is_convergent: s.is_convergent,
        margin: s.margin,
        exact_margin: s.exact_margin.clone(),
    }))
}

pub fn solutions_from_csv(text: &str) -> Result<Vec<SolutionRecord>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.deserialize::<SolutionRow>()
        .map(|row| {
            let s = row.map_err(csv_error)?;
            Ok(SolutionRecord {
                p: s.p,
                q: s.q,
                is_convergent: s.is_convergent,
                margin: s.margin,
                exact_margin: s.exact_margin,
            })
        })
        .collect()
}

/// Flat trace row. `delta_n` is a surd, or `[lo,hi]` for an enclosure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRow {
    pub n: usize,
    pub p_n: String,
    pub q_n: String,
    pub case: Case,
    pub f_n: String,
    pub a_n: String,
    pub b_n: String,
    pub c3: bool,
    pub delta_n: Option<String>,
    pub c_n: Option<String>,
    pub k: usize,
    pub q_nk: String,
    pub c5: Option<bool>,
    pub continuant: Option<bool>,
    pub final_bound_holds: Option<bool>,
    pub strong_at_n: Option<bool>,
    pub failures: String,
}

fn real_value_text(v: &RealValue) -> String {
    match v {
        RealValue::Exact(s) => s.to_string(),
        RealValue::Interval(iv) => {
            format!(
                "[{},{}]",
                format_rational(iv.lo()),
                format_rational(iv.hi())
            )
        }
    }
}

impl TraceRow {
    pub fn from_entry(e: &TraceEntry) -> Self {
        TraceRow {
            n: e.n,
            p_n: e.p_n.to_string(),
            q_n: e.q_n.to_string(),
            case: e.case,
            f_n: format_rational(&e.f_n),
            a_n: e.a_n.to_string(),
            b_n: e.b_n.to_string(),
            c3: e.checks.c3,
            delta_n: e.delta_n.as_ref().map(real_value_text),
            c_n: e.c_n.as_ref().map(|c| c.to_string()),
            k: e.k,
            q_nk: e.q_nk.to_string(),
            c5: e.checks.c5,
            continuant: e.checks.continuant,
            final_bound_holds: e.final_bound_holds,
            strong_at_n: e.checks.strong_at_n,
            failures: e.checks.failures().join(" "),
        }
    }
}

pub fn trace_to_csv(entries: &[TraceEntry]) -> Result<String> {
    write_rows(entries.iter().map(TraceRow::from_entry))
}

pub fn trace_rows_from_csv(text: &str) -> Result<Vec<TraceRow>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.deserialize::<TraceRow>()
        .map(|row| row.map_err(csv_error))
        .collect()
}

/// `x` to `digits` significant-ish decimals, for display next to exact values.
pub fn decimal(x: &QuadraticSurd, digits: usize) -> String {
    x.to_decimal(digits)
}

/// Rational to decimal, for display.
pub fn decimal_rational(x: &Rational, digits: usize) -> String {
    crate::exact::rational::to_decimal(x, digits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse_real;
    use crate::exact::rational::ratio;
    use crate::funcspec::parse_function;
    use crate::isolation::{enumerate_solutions, trace_theorem2, verify_theorem2, IsolationReport};

    #[test]
    fn report_round_trip() {
        let f = parse_function("const 1/2").unwrap();
        for a in ["surd:sqrt 2", "stream:e"] {
            let r = verify_theorem2(&parse_real(a).unwrap(), &f, &ratio(1, 10), 500, 5).unwrap();
            let text = to_json("verify", &r);
            let back: IsolationReport = from_json("verify", &text).unwrap();
            assert_eq!(back, r);
            assert!(from_json::<IsolationReport>("trace", &text).is_err());
        }
    }

    #[test]
    fn solutions_csv_round_trip() {
        let f = parse_function("pow 1").unwrap();
        let s = enumerate_solutions(&parse_real("surd:sqrt 3").unwrap(), &f, 200, None).unwrap();
        let text = solutions_to_csv(&s).unwrap();
        assert!(text.starts_with("p,q,is_convergent,margin,exact_margin"));
        assert_eq!(solutions_from_csv(&text).unwrap(), s);
        assert!(solutions_from_csv(&solutions_to_csv(&[]).unwrap())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn trace_csv_round_trip() {
        let f = parse_function("const 1/2").unwrap();
        let t = trace_theorem2(&parse_real("stream:e").unwrap(), &f, &ratio(1, 10), 0..=6).unwrap();
        let rows: Vec<TraceRow> = t.iter().map(TraceRow::from_entry).collect();
        assert_eq!(
            trace_rows_from_csv(&trace_to_csv(&t).unwrap()).unwrap(),
            rows
        );
    }
}
