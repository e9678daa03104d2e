//! Text forms for surds and α specifications.
//!
//! ```text
//! alpha := "rat:" rational | "surd:" surd | "stream:" name
//! surd  := "(" sum ")" ["/" int] | term ["/" int] | sum
//! sum   := ["+"|"-"] term (("+"|"-") term)*
//! term  := int | [int ["*"]] "sqrt" radicand
//! radicand := int | "(" int ")"
//! ```

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::rational::{parse_rational, Rational};
use super::real::{RealSpec, StreamRule};
use super::surd::QuadraticSurd;
use crate::error::{Error, ParseError};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
    Sqrt,
}

/// Tokens of `full[base..]`, with offsets into `full`.
fn lex(full: &str, base: usize) -> Result<Vec<(usize, Tok)>, ParseError> {
    let src = &full[base..];
    let mut toks = Vec::new();
    let bytes = src.as_bytes();
    let mut i = 0;
    while i < src.len() {
        let c = src[i..].chars().next().unwrap();
        let at = base + i;
        match c {
            ' ' | '\t' => {
                i += 1;
                continue;
            }
            '+' => toks.push((at, Tok::Plus)),
            '-' | '−' => toks.push((at, Tok::Minus)),
            '*' | '·' => toks.push((at, Tok::Star)),
            '/' => toks.push((at, Tok::Slash)),
            '(' => toks.push((at, Tok::LParen)),
            ')' => toks.push((at, Tok::RParen)),
            '√' => toks.push((at, Tok::Sqrt)),
            '0'..='9' => {
                let start = i;
                while i < src.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = src[start..i].parse().unwrap();
                toks.push((at, Tok::Int(n)));
                continue;
            }
            _ if src[i..].starts_with("sqrt") => {
                toks.push((at, Tok::Sqrt));
                i += 4;
                continue;
            }
            _ => {
                return Err(ParseError::new(
                    full,
                    at,
                    format!("unexpected character {c:?}"),
                ))
            }
        }
        i += c.len_utf8();
    }
    Ok(toks)
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|(o, _)| *o)
            .unwrap_or(self.src.len())
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::new(self.src, self.offset(), msg)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn int(&mut self) -> Result<BigInt, ParseError> {
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n = n.clone();
                self.pos += 1;
                Ok(n)
            }
            _ => Err(self.err("expected an integer")),
        }
    }

    fn radicand(&mut self) -> Result<BigInt, ParseError> {
        if self.eat(&Tok::LParen) {
            let n = self.int()?;
            if !self.eat(&Tok::RParen) {
                return Err(self.err("expected ')'"));
            }
            Ok(n)
        } else {
            self.int()
        }
    }

    /// One term; returns the surd and whether it contained a radical.
    fn term(&mut self, negate: bool) -> Result<QuadraticSurd, ParseError> {
        let at = self.offset();
        let sign = if negate {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        let coef = match self.peek() {
            Some(Tok::Int(_)) => Some(self.int()?),
            _ => None,
        };
        let has_star = self.eat(&Tok::Star);
        if self.eat(&Tok::Sqrt) {
            let r = self.radicand()?;
            let b = coef.unwrap_or_else(BigInt::one) * sign;
            return QuadraticSurd::new(BigInt::zero(), b, BigInt::one(), r)
                .map_err(|e| ParseError::new(self.src, at, e.to_string()));
        }
        if has_star {
            return Err(self.err("expected 'sqrt' after '*'"));
        }
        match coef {
            Some(n) => Ok(QuadraticSurd::from_integer(n * sign)),
            None => Err(self.err("expected an integer or 'sqrt'")),
        }
    }

    fn sum(&mut self) -> Result<(QuadraticSurd, usize), ParseError> {
        let mut terms = 0;
        let mut neg = false;
        if self.eat(&Tok::Minus) {
            neg = true;
        } else {
            self.eat(&Tok::Plus);
        }
        let mut acc = self.term(neg)?;
        terms += 1;
        loop {
            let at = self.offset();
            let neg = if self.eat(&Tok::Plus) {
                false
            } else if self.eat(&Tok::Minus) {
                true
            } else {
                break;
            };
            let t = self.term(neg)?;
            acc = acc.checked_add(&t).map_err(|e| match e {
                Error::MixedField { .. } => {
                    ParseError::new(self.src, at, "terms with different square-free radicands")
                }
                other => ParseError::new(self.src, at, other.to_string()),
            })?;
            terms += 1;
        }
        Ok((acc, terms))
    }

    fn surd(&mut self) -> Result<QuadraticSurd, ParseError> {
        let (num, terms) = if self.eat(&Tok::LParen) {
            let s = self.sum()?;
            if !self.eat(&Tok::RParen) {
                return Err(self.err("expected ')'"));
            }
            (s.0, 1)
        } else {
            self.sum()?
        };
        if self.peek() == Some(&Tok::Slash) {
            if terms > 1 {
                return Err(self.err("parenthesize a multi-term numerator before '/'"));
            }
            self.pos += 1;
            let at = self.offset();
            let den = self.int()?;
            if den.is_zero() {
                return Err(ParseError::new(self.src, at, "zero denominator"));
            }
            let inv = Rational::new(BigInt::one(), den);
            return self.finish(num.mul_rational(&inv));
        }
        self.finish(num)
    }

    fn finish(&self, s: QuadraticSurd) -> Result<QuadraticSurd, ParseError> {
        if self.pos < self.toks.len() {
            return Err(self.err("unexpected trailing input"));
        }
        Ok(s)
    }
}

/// Parses surd text such as `(1+sqrt 5)/2`, `sqrt 2`, `3-2*sqrt 2`.
pub fn parse_surd(s: &str) -> Result<QuadraticSurd, ParseError> {
    parse_surd_at(s, 0)
}

fn parse_surd_at(full: &str, base: usize) -> Result<QuadraticSurd, ParseError> {
    let toks = lex(full, base)?;
    if toks.is_empty() {
        return Err(ParseError::new(full, base, "empty surd"));
    }
    let mut p = Parser {
        src: full,
        toks,
        pos: 0,
    };
    p.surd()
}

/// Parses an α specification: `rat:355/113`, `surd:(1+sqrt 5)/2`, `stream:e`.
pub fn parse_real(s: &str) -> Result<RealSpec, ParseError> {
    let Some(colon) = s.find(':') else {
        return Err(ParseError::new(
            s,
            0,
            "expected a 'rat:', 'surd:' or 'stream:' prefix",
        ));
    };
    let kind = s[..colon].trim();
    let body_at = colon + 1;
    match kind {
        "rat" => {
            let r = parse_rational(&s[body_at..])
                .map_err(|e| ParseError::new(s, body_at + e.offset, e.message))?;
            Ok(RealSpec::Rational(r))
        }
        "surd" => Ok(RealSpec::surd(parse_surd_at(s, body_at)?)),
        "stream" => {
            let name = s[body_at..].trim();
            StreamRule::from_name(name)
                .map(RealSpec::Stream)
                .ok_or_else(|| {
                    let names: Vec<_> = StreamRule::ALL.iter().map(|r| r.name()).collect();
                    ParseError::new(
                        s,
                        body_at + (s[body_at..].len() - s[body_at..].trim_start().len()),
                        format!("unknown stream {name:?}; known: {}", names.join(", ")),
                    )
                })
        }
        _ => Err(ParseError::new(
            s,
            0,
            format!("unknown kind {kind:?}; expected rat, surd or stream"),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::ratio;

    fn surd(a: i64, b: i64, c: i64, d: i64) -> QuadraticSurd {
        QuadraticSurd::new(a.into(), b.into(), c.into(), d.into()).unwrap()
    }

    #[test]
    fn surd_forms() {
        assert_eq!(parse_surd("(1+sqrt 5)/2").unwrap(), surd(1, 1, 2, 5));
        assert_eq!(parse_surd("sqrt 2").unwrap(), surd(0, 1, 1, 2));
        assert_eq!(parse_surd("1 + sqrt(3)").unwrap(), surd(1, 1, 1, 3));
        assert_eq!(parse_surd("3-2*sqrt 2").unwrap(), surd(3, -2, 1, 2));
        assert_eq!(parse_surd("-1-sqrt 5").unwrap(), surd(-1, -1, 1, 5));
        assert_eq!(parse_surd("(sqrt 2)/4").unwrap(), surd(0, 1, 4, 2));
        assert_eq!(parse_surd("sqrt 8/8").unwrap(), surd(0, 1, 4, 2));
        assert_eq!(parse_surd("2 sqrt 2 + sqrt 8").unwrap(), surd(0, 4, 1, 2));
        assert_eq!(parse_surd("√7").unwrap(), surd(0, 1, 1, 7));
        assert_eq!(
            parse_surd("sqrt 4").unwrap(),
            QuadraticSurd::from_integer(2)
        );
    }

    #[test]
    fn display_round_trips() {
        for s in [
            surd(1, 1, 2, 5),
            surd(3, -2, 7, 2),
            surd(0, 5, 221, 221),
            surd(-4, 0, 3, 0),
        ] {
            assert_eq!(parse_surd(&s.to_string()).unwrap(), s);
        }
    }

    #[test]
    fn surd_errors_are_positioned() {
        let e = parse_surd("1+sqrt 5/2").unwrap_err();
        assert_eq!(e.offset, 8);
        let e = parse_surd("sqrt 2 + sqrt 3").unwrap_err();
        assert_eq!(e.offset, 7);
        let e = parse_surd("(1+sqrt x)").unwrap_err();
        assert_eq!(e.offset, 8);
        let e = parse_surd("sqrt 2)").unwrap_err();
        assert_eq!(e.offset, 6);
    }

    #[test]
    fn real_specs() {
        assert_eq!(
            parse_real("rat:355/113").unwrap(),
            RealSpec::Rational(ratio(355, 113))
        );
        assert_eq!(
            parse_real("stream:e").unwrap(),
            RealSpec::Stream(StreamRule::E)
        );
        assert_eq!(
            parse_real("surd:(1+sqrt 5)/2").unwrap(),
            RealSpec::Surd(surd(1, 1, 2, 5))
        );
        assert_eq!(
            parse_real("surd:sqrt 9").unwrap(),
            RealSpec::Rational(ratio(3, 1))
        );
        let e = parse_real("surd:(1+sqrt 5)/").unwrap_err();
        assert_eq!(e.offset, "surd:(1+sqrt 5)/".len());
        let e = parse_real("stream: pi").unwrap_err();
        assert_eq!(e.offset, 8);
        assert_eq!(parse_real("rat:1/0").unwrap_err().offset, 6);
        assert!(parse_real("sqrt 2").is_err());
        for spec in [
            "rat:-7/3",
            "surd:(1+sqrt 5)/2",
            "surd:1+sqrt 3",
            "stream:coth-half",
        ] {
            assert_eq!(parse_real(spec).unwrap().to_string(), spec);
        }
    }
}
