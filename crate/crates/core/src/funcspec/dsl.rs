//! Text forms of approximation functions.
//!
//! ```text
//! function := rule ["decreasing"]
//! rule     := "const" rational
//!           | "pow" int
//!           | "exp" int
//!           | "table" int ":" rational ("," int ":" rational)*
//!           | "expr" expression
//! ```

use num_bigint::BigInt;

use super::expr::Expr;
use super::ApproxFunction;
use crate::error::ParseError;
use crate::exact::rational::parse_rational;

const FLAG: &str = "decreasing";

/// Parses a function such as `const 1/2`, `pow 2`, `exp 2`,
/// `table 1:1/2,10:1/3` or `expr 1/(x+1) decreasing`.
pub fn parse_function(s: &str) -> Result<ApproxFunction, ParseError> {
    let start = s.len() - s.trim_start().len();
    let mut end = s.trim_end().len();
    if start >= end {
        return Err(ParseError::new(s, 0, "empty function"));
    }
    let mut decreasing = false;
    if s[start..end].ends_with(FLAG) {
        let before = end - FLAG.len();
        if before > start && s[..before].ends_with(char::is_whitespace) {
            decreasing = true;
            end = s[..before].trim_end().len();
        }
    }
    let word_end = s[start..end]
        .find(char::is_whitespace)
        .map_or(end, |i| start + i);
    let kind = &s[start..word_end];
    let body_start = word_end + (s[word_end..end].len() - s[word_end..end].trim_start().len());
    let body = &s[body_start..end];
    let at = |off: usize, msg: String| ParseError::new(s, body_start + off, msg);
    if body.is_empty() {
        return Err(ParseError::new(
            s,
            body_start,
            format!("'{kind}' needs an argument"),
        ));
    }
    let f = match kind {
        "const" => {
            let v = parse_rational(body).map_err(|e| at(e.offset, e.message))?;
            ApproxFunction::constant(v).map_err(|e| at(0, e.to_string()))?
        }
        "pow" => {
            let sigma: u32 = body.parse().map_err(|_| {
                at(
                    0,
                    format!("expected a positive integer exponent, got {body:?}"),
                )
            })?;
            ApproxFunction::power(sigma).map_err(|e| at(0, e.to_string()))?
        }
        "exp" => {
            let base: BigInt = body
                .parse()
                .map_err(|_| at(0, format!("expected an integer base, got {body:?}")))?;
            ApproxFunction::exp(base).map_err(|e| at(0, e.to_string()))?
        }
        "table" => {
            let mut points = Vec::new();
            let mut off = 0;
            for item in body.split(',') {
                let lead = item.len() - item.trim_start().len();
                let Some(colon) = item.find(':') else {
                    return Err(at(off + lead, "expected 'x:value'".into()));
                };
                let x: BigInt = item[..colon].trim().parse().map_err(|_| {
                    at(
                        off + lead,
                        format!("expected an integer x, got {:?}", item[..colon].trim()),
                    )
                })?;
                let v = parse_rational(&item[colon + 1..])
                    .map_err(|e| at(off + colon + 1 + e.offset, e.message))?;
                points.push((x, v));
                off += item.len() + 1;
            }
            ApproxFunction::table(points, decreasing).map_err(|e| at(0, e.to_string()))?
        }
        "expr" => {
            let e = Expr::parse_span(s, body_start, end)?;
            ApproxFunction::composite(e, decreasing)
        }
        _ => {
            return Err(ParseError::new(
                s,
                start,
                format!("unknown rule {kind:?}; expected const, pow, exp, table or expr"),
            ))
        }
    };
    Ok(f)
}
