//! Real quadratic surds `(a + b·√d)/c`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::interval::RationalInterval;
use super::rational::{sign_of, Rational};
use super::squarefree::SquareFreeReducer;
use crate::error::{Error, Result};

/// Exact element of `ℚ(√d)`, stored as `(a + b·√d)/c`.
///
/// Normal form: `c > 0`, `gcd(a, b, c) = 1`, and either `d ≥ 2` square-free
/// with `b ≠ 0`, or `b = d = 0` for rational values. Two surds are equal
/// exactly when their normal forms are, so the derived `Eq`/`Hash` are
/// value equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadraticSurd {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl QuadraticSurd {
    /// `(a + b·√d)/c`, reducing `d` to its square-free part.
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Result<Self> {
        Self::new_with(&SquareFreeReducer::default(), a, b, c, d)
    }

    pub fn new_with(
        reducer: &SquareFreeReducer,
        a: BigInt,
        b: BigInt,
        c: BigInt,
        d: BigInt,
    ) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if d.is_negative() {
            return Err(Error::Precondition(format!(
                "negative radicand {d} is not a real surd"
            )));
        }
        let split = reducer.split(d.magnitude())?;
        let root = BigInt::from(split.root);
        let core = BigInt::from(split.core);
        let b = b * root;
        Ok(if core.is_zero() {
            Self::from_parts(a, BigInt::zero(), c, BigInt::zero())
        } else if core.is_one() {
            Self::from_parts(a + b, BigInt::zero(), c, BigInt::zero())
        } else {
            Self::from_parts(a, b, c, core)
        })
    }

    /// `√n` for a nonnegative integer.
    pub fn sqrt(n: impl Into<BigInt>) -> Result<Self> {
        Self::new(BigInt::zero(), BigInt::one(), BigInt::one(), n.into())
    }

    pub fn from_rational(x: &Rational) -> Self {
        QuadraticSurd {
            a: x.numer().clone(),
            b: BigInt::zero(),
            c: x.denom().clone(),
            d: BigInt::zero(),
        }
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        QuadraticSurd {
            a: n.into(),
            b: BigInt::zero(),
            c: BigInt::one(),
            d: BigInt::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    /// Normalizes signs and common factors. `d` must already be 0 or square-free ≥ 2.
    fn from_parts(mut a: BigInt, mut b: BigInt, mut c: BigInt, mut d: BigInt) -> Self {
        debug_assert!(!c.is_zero());
        if b.is_zero() || d.is_zero() {
            b = BigInt::zero();
            d = BigInt::zero();
        }
        let g = a.gcd(&b).gcd(&c);
        if !g.is_one() {
            a /= &g;
            b /= &g;
            c /= &g;
        }
        if c.is_negative() {
            a = -a;
            b = -b;
            c = -c;
        }
        QuadraticSurd { a, b, c, d }
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn c(&self) -> &BigInt {
        &self.c
    }

    /// Square-free radicand, or 0 for rational values.
    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn to_rational(&self) -> Option<Rational> {
        self.is_rational()
            .then(|| Rational::new(self.a.clone(), self.c.clone()))
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// The radicand shared with `other`, or a `MixedField` error.
    fn common_field(&self, other: &Self) -> Result<BigInt> {
        match (self.is_rational(), other.is_rational()) {
            (true, _) => Ok(other.d.clone()),
            (_, true) => Ok(self.d.clone()),
            _ if self.d == other.d => Ok(self.d.clone()),
            _ => Err(Error::MixedField {
                left: self.d.clone(),
                right: other.d.clone(),
            }),
        }
    }

    pub fn same_field(&self, other: &Self) -> bool {
        self.common_field(other).is_ok()
    }

    pub fn signum(&self) -> Ordering {
        sign_of_surd_numerator(&self.a, &self.b, &self.d)
    }

    pub fn neg(&self) -> Self {
        QuadraticSurd {
            a: -&self.a,
            b: -&self.b,
            c: self.c.clone(),
            d: self.d.clone(),
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() == Ordering::Less {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// `(a − b·√d)/c`.
    pub fn conjugate(&self) -> Self {
        QuadraticSurd {
            a: self.a.clone(),
            b: -&self.b,
            c: self.c.clone(),
            d: self.d.clone(),
        }
    }

    /// Exact ordering against a rational.
    pub fn cmp_rational(&self, y: &Rational) -> Ordering {
        // x − y = (a·yd − yn·c + b·yd·√d) / (c·yd), denominator positive.
        let a = &self.a * y.denom() - y.numer() * &self.c;
        let b = &self.b * y.denom();
        sign_of_surd_numerator(&a, &b, &self.d)
    }

    /// Exact ordering against a surd of the same field (or a rational surd).
    pub fn cmp_surd(&self, other: &Self) -> Result<Ordering> {
        Ok(self.checked_sub(other)?.signum())
    }

    /// Greatest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        // b·√d lies in [s, s + 1) with s integer; floor(N/c) = floor(floor(N)/c).
        let s = if self.b.is_zero() {
            BigInt::zero()
        } else {
            let r = (&self.b * &self.b * &self.d).sqrt();
            if self.b.is_negative() {
                -r - 1
            } else {
                r
            }
        };
        (&self.a + s).div_floor(&self.c)
    }

    pub fn ceil(&self) -> BigInt {
        -self.neg().floor()
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let d = self.common_field(other)?;
        let a = &self.a * &other.c + &other.a * &self.c;
        let b = &self.b * &other.c + &other.b * &self.c;
        Ok(Self::from_parts(a, b, &self.c * &other.c, d))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let d = self.common_field(other)?;
        let a = &self.a * &other.a + &self.b * &other.b * &d;
        let b = &self.a * &other.b + &other.a * &self.b;
        Ok(Self::from_parts(a, b, &self.c * &other.c, d))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.checked_mul(&other.inverse()?)
    }

    /// `c/(a + b√d) = c·(a − b√d)/(a² − b²d)`.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let norm = &self.a * &self.a - &self.b * &self.b * &self.d;
        Ok(Self::from_parts(
            &self.c * &self.a,
            -(&self.c * &self.b),
            norm,
            self.d.clone(),
        ))
    }

    pub fn add_rational(&self, x: &Rational) -> Self {
        self.checked_add(&Self::from_rational(x))
            .expect("rationals lie in every field")
    }

    pub fn sub_rational(&self, x: &Rational) -> Self {
        self.add_rational(&-x)
    }

    pub fn mul_rational(&self, x: &Rational) -> Self {
        self.checked_mul(&Self::from_rational(x))
            .expect("rationals lie in every field")
    }

    pub fn mul_integer(&self, n: &BigInt) -> Self {
        Self::from_parts(&self.a * n, &self.b * n, self.c.clone(), self.d.clone())
    }

    /// Rational enclosure of width at most `width`.
    pub fn to_interval(&self, width: &Rational) -> RationalInterval {
        if self.is_rational() {
            return RationalInterval::point(Rational::new(self.a.clone(), self.c.clone()));
        }
        // Width of √d enclosure scaled by |b|/c.
        let scale = Rational::new(self.b.abs(), self.c.clone());
        let root =
            RationalInterval::sqrt_of(&Rational::from_integer(self.d.clone()), &(width / &scale));
        root.mul_rational(&Rational::new(self.b.clone(), self.c.clone()))
            .add_rational(&Rational::new(self.a.clone(), self.c.clone()))
    }

    /// Truncated decimal rendering, for display only.
    pub fn to_decimal(&self, digits: usize) -> String {
        if let Some(r) = self.to_rational() {
            return super::rational::to_decimal(&r, digits);
        }
        let guard = BigInt::from(10).pow(digits as u32 + 2);
        let mut w = Rational::new(BigInt::one(), guard.clone() * 100);
        loop {
            let iv = self.to_interval(&w);
            if let Some(s) = iv.sign() {
                // Endpoint nearest zero, so truncation never overshoots.
                let near = if s == Ordering::Less {
                    iv.hi()
                } else {
                    iv.lo()
                };
                if iv.width() * &guard <= near.abs() {
                    return super::rational::to_decimal(near, digits);
                }
            }
            w /= Rational::from_integer(BigInt::one() << 32);
        }
    }

    pub fn magnitude_bits(&self) -> u64 {
        [&self.a, &self.b, &self.c, &self.d]
            .iter()
            .map(|x| x.bits())
            .max()
            .unwrap_or(0)
    }
}

/// Sign of `a + b·√d` for square-free `d ≥ 2` (or `d = 0`).
fn sign_of_surd_numerator(a: &BigInt, b: &BigInt, d: &BigInt) -> Ordering {
    if b.is_zero() || d.is_zero() {
        return sign_of(a);
    }
    let sa = sign_of(a);
    let sb = sign_of(b);
    if sa == Ordering::Equal {
        return sb;
    }
    if sa == sb {
        return sa;
    }
    // Opposite signs: compare a² against b²·d. They are never equal for
    // square-free d ≥ 2 and b ≠ 0.
    let lhs = a * a;
    let rhs = b * b * d;
    match lhs.cmp(&rhs) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => Ordering::Equal,
    }
}

impl fmt::Display for QuadraticSurd {
    /// `(a+b*sqrt d)/c`, dropping zero and unit parts; parseable by
    /// [`super::parse::parse_surd`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut num = String::new();
        if !self.a.is_zero() || self.b.is_zero() {
            num.push_str(&self.a.to_string());
        }
        if !self.b.is_zero() {
            let (neg, mag) = match self.b.sign() {
                Sign::Minus => (true, -&self.b),
                _ => (false, self.b.clone()),
            };
            if neg {
                num.push('-');
            } else if !num.is_empty() {
                num.push('+');
            }
            if !mag.is_one() {
                num.push_str(&mag.to_string());
                num.push('*');
            }
            num.push_str("sqrt ");
            num.push_str(&self.d.to_string());
        }
        if self.c.is_one() {
            write!(f, "{num}")
        } else if self.b.is_zero() {
            write!(f, "{num}/{}", self.c)
        } else {
            write!(f, "({num})/{}", self.c)
        }
    }
}

/// Integer square root of a nonnegative `BigInt`.
pub fn isqrt(n: &BigInt) -> BigInt {
    BigInt::from(BigUint::sqrt(n.magnitude()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, ratio};

    fn surd(a: i64, b: i64, c: i64, d: i64) -> QuadraticSurd {
        QuadraticSurd::new(a.into(), b.into(), c.into(), d.into()).unwrap()
    }

    fn phi() -> QuadraticSurd {
        surd(1, 1, 2, 5)
    }

    #[test]
    fn normal_form() {
        let x = surd(2, 2, 4, 5);
        assert_eq!(x, phi());
        let y = surd(0, 1, 1, 8);
        assert_eq!(
            (y.b().clone(), y.d().clone()),
            (BigInt::from(2), BigInt::from(2))
        );
        let r = surd(1, 3, 2, 4);
        assert!(r.is_rational());
        assert_eq!(r.to_rational(), Some(ratio(7, 2)));
        let z = surd(0, 0, -3, 5);
        assert_eq!(z, QuadraticSurd::zero());
        let n = surd(1, 1, -2, 5);
        assert_eq!(n.c(), &BigInt::from(2));
        assert_eq!(n.a(), &BigInt::from(-1));
    }

    #[test]
    fn cmp_examples() {
        assert_eq!(phi().cmp_rational(&ratio(3, 2)), Ordering::Greater);
        assert_eq!(surd(0, 1, 1, 2).cmp_rational(&ratio(3, 2)), Ordering::Less);
        assert_eq!(surd(0, 0, 1, 5).cmp_rational(&int(0)), Ordering::Equal);
    }

    #[test]
    fn floor_examples() {
        assert_eq!(phi().floor(), BigInt::from(1));
        assert_eq!(surd(0, 1, 1, 2).floor(), BigInt::from(1));
        assert_eq!(surd(-1, -1, 2, 5).floor(), BigInt::from(-2));
        assert_eq!(surd(-1, -1, 2, 5).ceil(), BigInt::from(-1));
        assert_eq!(surd(7, 0, 2, 0).floor(), BigInt::from(3));
    }

    #[test]
    fn arith_examples() {
        assert_eq!(phi().inverse().unwrap(), surd(-1, 1, 2, 5));
        let r2 = surd(0, 1, 1, 2);
        let sum = r2.checked_add(&surd(1, -1, 1, 2)).unwrap();
        assert_eq!(sum, QuadraticSurd::one());
        assert_eq!(r2.checked_mul(&r2).unwrap(), QuadraticSurd::from_integer(2));
        assert!(matches!(
            r2.checked_add(&surd(0, 1, 1, 3)),
            Err(Error::MixedField { .. })
        ));
        assert_eq!(QuadraticSurd::zero().inverse(), Err(Error::DivisionByZero));
        assert_eq!(r2.checked_div(&r2).unwrap(), QuadraticSurd::one());
        // rationals mix with any field
        assert!(r2.checked_add(&QuadraticSurd::from_integer(3)).is_ok());
    }

    #[test]
    fn display() {
        assert_eq!(phi().to_string(), "(1+sqrt 5)/2");
        assert_eq!(surd(0, 1, 1, 2).to_string(), "sqrt 2");
        assert_eq!(surd(3, -2, 1, 2).to_string(), "3-2*sqrt 2");
        assert_eq!(surd(0, 1, 8, 8).to_string(), "(sqrt 2)/4");
        assert_eq!(surd(-3, 0, 4, 0).to_string(), "-3/4");
    }

    #[test]
    fn decimals() {
        assert_eq!(surd(0, 1, 1, 2).to_decimal(10), "1.414213562");
        assert_eq!(phi().neg().to_decimal(6), "-1.61803");
        assert_eq!(surd(5, 0, 1, 0).to_decimal(3), "5");
    }

    #[test]
    fn interval_encloses() {
        let w = ratio(1, 1_000_000);
        let iv = phi().to_interval(&w);
        assert!(iv.width() <= w);
        assert_eq!(phi().cmp_rational(iv.lo()), Ordering::Greater);
        assert_eq!(phi().cmp_rational(iv.hi()), Ordering::Less);
        let iv = surd(3, -2, 7, 2).to_interval(&w);
        assert_eq!(surd(3, -2, 7, 2).cmp_rational(iv.lo()), Ordering::Greater);
        assert_eq!(surd(3, -2, 7, 2).cmp_rational(iv.hi()), Ordering::Less);
    }
}
