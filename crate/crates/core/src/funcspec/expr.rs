//! Rational arithmetic expressions in one variable `x`.
//!
//! ```text
//! sum   := prod (("+" | "-") prod)*
//! prod  := unary (("*" | "/") unary)*
//! unary := "-" unary | power
//! power := atom ["^" ["-"] int]
//! atom  := int | "x" | "(" sum ")"
//! ```
//!
//! Only integers, `x` and the four field operations with integer powers are
//! accepted, so every value is rational.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, ParseError, Result};
use crate::exact::Rational;

/// Largest accepted `|n|` in `e^n`.
pub const MAX_EXPONENT: u32 = 1024;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    X,
    Int(BigInt),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
}

impl Expr {
    pub fn parse(s: &str) -> Result<Expr, ParseError> {
        Self::parse_span(s, 0, s.len())
    }

    /// Parses `full[start..end]`, reporting offsets into `full`.
    pub fn parse_span(full: &str, start: usize, end: usize) -> Result<Expr, ParseError> {
        let toks = lex(full, start, end)?;
        let mut p = Parser {
            src: full,
            end,
            toks,
            pos: 0,
        };
        if p.toks.is_empty() {
            return Err(ParseError::new(full, start, "empty expression"));
        }
        let e = p.sum()?;
        if p.pos < p.toks.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(e)
    }

    pub fn eval(&self, x: &BigInt) -> Result<Rational> {
        Ok(match self {
            Expr::X => Rational::from_integer(x.clone()),
            Expr::Int(n) => Rational::from_integer(n.clone()),
            Expr::Neg(a) => -a.eval(x)?,
            Expr::Add(a, b) => a.eval(x)? + b.eval(x)?,
            Expr::Sub(a, b) => a.eval(x)? - b.eval(x)?,
            Expr::Mul(a, b) => a.eval(x)? * b.eval(x)?,
            Expr::Div(a, b) => {
                let d = b.eval(x)?;
                if d.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                a.eval(x)? / d
            }
            Expr::Pow(a, n) => {
                let v = a.eval(x)?;
                if v.is_zero() && *n < 0 {
                    return Err(Error::DivisionByZero);
                }
                num_traits::pow::Pow::pow(&v, *n)
            }
        })
    }

    fn prec(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::X | Expr::Int(_) => 5,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let paren = self.prec() < min;
        if paren {
            f.write_str("(")?;
        }
        match self {
            Expr::X => f.write_str("x")?,
            Expr::Int(n) => write!(f, "{n}")?,
            Expr::Neg(a) => {
                f.write_str("-")?;
                a.fmt_at(f, 3)?;
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                a.fmt_at(f, 1)?;
                f.write_str(if matches!(self, Expr::Add(..)) {
                    " + "
                } else {
                    " - "
                })?;
                b.fmt_at(f, 2)?;
            }
            Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.fmt_at(f, 2)?;
                f.write_str(if matches!(self, Expr::Mul(..)) {
                    "*"
                } else {
                    "/"
                })?;
                b.fmt_at(f, 3)?;
            }
            Expr::Pow(a, n) => {
                a.fmt_at(f, 5)?;
                write!(f, "^{n}")?;
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    X,
    Op(char),
    LParen,
    RParen,
}

fn lex(full: &str, start: usize, end: usize) -> Result<Vec<(usize, Tok)>, ParseError> {
    let src = &full[start..end];
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < src.len() {
        let c = src[i..].chars().next().unwrap();
        let at = start + i;
        match c {
            c if c.is_whitespace() => {}
            '0'..='9' => {
                let s = i;
                while i < src.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((at, Tok::Int(src[s..i].parse().unwrap())));
                continue;
            }
            'x' => out.push((at, Tok::X)),
            '+' | '-' | '*' | '/' | '^' => out.push((at, Tok::Op(c))),
            '(' => out.push((at, Tok::LParen)),
            ')' => out.push((at, Tok::RParen)),
            _ => {
                let msg = if c.is_alphabetic() {
                    format!("unknown name starting with {c:?}; only x, integers and + - * / ^ are allowed")
                } else {
                    format!("unexpected character {c:?}")
                };
                return Err(ParseError::new(full, at, msg));
            }
        }
        i += c.len_utf8();
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a str,
    end: usize,
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        let at = self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end);
        ParseError::new(self.src, at, msg)
    }

    fn eat_op(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.prod()?;
        loop {
            if self.eat_op('+') {
                e = Expr::Add(Box::new(e), Box::new(self.prod()?));
            } else if self.eat_op('-') {
                e = Expr::Sub(Box::new(e), Box::new(self.prod()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn prod(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.unary()?;
        loop {
            if self.eat_op('*') {
                e = Expr::Mul(Box::new(e), Box::new(self.unary()?));
            } else if self.eat_op('/') {
                e = Expr::Div(Box::new(e), Box::new(self.unary()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat_op('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if !self.eat_op('^') {
            return Ok(base);
        }
        let neg = self.eat_op('-');
        let at_err = self.err("expected an integer exponent");
        let n = match self.peek() {
            Some(Tok::Int(n)) => n.clone(),
            _ => return Err(at_err),
        };
        let n: u32 = n
            .try_into()
            .ok()
            .filter(|&n| n <= MAX_EXPONENT)
            .ok_or_else(|| self.err(format!("exponent larger than {MAX_EXPONENT}")))?;
        self.pos += 1;
        let n = n as i32;
        Ok(Expr::Pow(Box::new(base), if neg { -n } else { n }))
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Expr::Int(n))
            }
            Some(Tok::X) => {
                self.pos += 1;
                Ok(Expr::X)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.sum()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            _ => Err(self.err("expected an integer, 'x' or '('")),
        }
    }
}
