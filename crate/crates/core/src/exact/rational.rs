//! Arbitrary-precision rationals and small helpers around them.

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::ParseError;

/// Fraction in lowest terms with a positive denominator; zero is `0/1`.
pub type Rational = BigRational;

pub fn int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

pub fn ratio(n: impl Into<BigInt>, d: impl Into<BigInt>) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Three-way comparison by cross-multiplication.
pub fn rat_cmp(x: &Rational, y: &Rational) -> Ordering {
    (x.numer() * y.denom()).cmp(&(y.numer() * x.denom()))
}

pub fn floor(x: &Rational) -> BigInt {
    x.numer().div_floor(x.denom())
}

pub fn ceil(x: &Rational) -> BigInt {
    -((-x.numer()).div_floor(x.denom()))
}

/// `a/b` with `gcd(a, b) = 1` already known, skipping the reduction.
pub(crate) fn coprime(num: BigInt, den: BigInt) -> Rational {
    debug_assert!(den.is_positive());
    Rational::new_raw(num, den)
}

/// Parses `n`, `-n` or `n/d` (optional surrounding whitespace).
pub fn parse_rational(s: &str) -> Result<Rational, ParseError> {
    let t = s.trim();
    let lead = s.len() - s.trim_start().len();
    let (num, den, den_off) = match t.find('/') {
        Some(i) => (&t[..i], Some(&t[i + 1..]), i + 1),
        None => (t, None, 0),
    };
    let n: BigInt = num.trim().parse().map_err(|_| {
        ParseError::new(
            s,
            lead,
            format!("expected an integer, got {:?}", num.trim()),
        )
    })?;
    let d: BigInt = match den {
        Some(d) => d.trim().parse().map_err(|_| {
            ParseError::new(
                s,
                lead + den_off,
                format!("expected a denominator, got {:?}", d.trim()),
            )
        })?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(ParseError::new(s, lead + den_off, "zero denominator"));
    }
    Ok(Rational::new(n, d))
}

/// `p/q`, or just `p` for integers.
pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Decimal expansion truncated toward zero to `digits` significant digits.
/// Display only.
pub fn to_decimal(x: &Rational, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let neg = x.is_negative();
    let x = x.abs();
    // Find e with 10^e <= x < 10^(e+1).
    let ten = BigInt::from(10);
    let mut e: i64 = 0;
    let int_part = floor(&x);
    if !int_part.is_zero() {
        e = int_part.to_string().len() as i64 - 1;
    } else {
        let mut y = x.clone();
        while y < Rational::one() {
            y *= int(10);
            e -= 1;
        }
    }
    let shift = digits as i64 - 1 - e;
    let scaled = if shift >= 0 {
        &x * int(ten.pow(shift as u32))
    } else {
        &x / int(ten.pow((-shift) as u32))
    };
    let mantissa = floor(&scaled).to_string();
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if e >= 0 {
        let int_len = (e + 1) as usize;
        if mantissa.len() <= int_len {
            out.push_str(&mantissa);
            out.push_str(&"0".repeat(int_len - mantissa.len()));
        } else {
            out.push_str(&mantissa[..int_len]);
            let frac = mantissa[int_len..].trim_end_matches('0');
            if !frac.is_empty() {
                out.push('.');
                out.push_str(frac);
            }
        }
    } else {
        out.push_str("0.");
        out.push_str(&"0".repeat((-e - 1) as usize));
        out.push_str(mantissa.trim_end_matches('0'));
    }
    out
}

pub(crate) fn sign_of(x: &BigInt) -> Ordering {
    match x.sign() {
        Sign::Minus => Ordering::Less,
        Sign::NoSign => Ordering::Equal,
        Sign::Plus => Ordering::Greater,
    }
}
