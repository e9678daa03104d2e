//! Closed intervals with rational endpoints.
//!
//! Used wherever a value cannot be held exactly in one quadratic field:
//! stream-defined reals and expressions mixing two radicands.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::rational::{format_rational, Rational};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalInterval {
    lo: Rational,
    hi: Rational,
}

impl RationalInterval {
    /// # Panics
    /// If `lo > hi`.
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        RationalInterval { lo, hi }
    }

    /// Interval spanning two points given in either order.
    pub fn hull(x: Rational, y: Rational) -> Self {
        if x <= y {
            RationalInterval { lo: x, hi: y }
        } else {
            RationalInterval { lo: y, hi: x }
        }
    }

    pub fn point(x: Rational) -> Self {
        RationalInterval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_interval(&self, other: &RationalInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn overlaps(&self, other: &RationalInterval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Where `x` sits relative to the whole interval; `None` if inside.
    pub fn cmp_rational(&self, x: &Rational) -> Option<Ordering> {
        if &self.hi < x {
            Some(Ordering::Less)
        } else if &self.lo > x {
            Some(Ordering::Greater)
        } else if self.is_point() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Certified ordering of every point of `self` against every point of
    /// `other`; `None` when they overlap (unless both are the same point).
    pub fn cmp_interval(&self, other: &RationalInterval) -> Option<Ordering> {
        if self.hi < other.lo {
            Some(Ordering::Less)
        } else if self.lo > other.hi {
            Some(Ordering::Greater)
        } else if self.is_point() && other.is_point() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn sign(&self) -> Option<Ordering> {
        self.cmp_rational(&Rational::zero())
    }

    pub fn neg(&self) -> Self {
        RationalInterval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        RationalInterval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn add_rational(&self, x: &Rational) -> Self {
        RationalInterval {
            lo: &self.lo + x,
            hi: &self.hi + x,
        }
    }

    pub fn mul_rational(&self, x: &Rational) -> Self {
        Self::hull(&self.lo * x, &self.hi * x)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let c = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        RationalInterval { lo, hi }
    }

    /// Reciprocal; [`Error::Ambiguous`] if zero lies in the interval.
    pub fn recip(&self) -> Result<Self> {
        if self.contains(&Rational::zero()) {
            return Err(if self.is_point() {
                Error::DivisionByZero
            } else {
                Error::Ambiguous
            });
        }
        Ok(RationalInterval {
            lo: self.hi.recip(),
            hi: self.lo.recip(),
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn abs(&self) -> Self {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            let hi = (-&self.lo).max(self.hi.clone());
            RationalInterval {
                lo: Rational::zero(),
                hi,
            }
        }
    }

    /// Enclosure of `√x` for a nonnegative rational `x`, of width at most `width`.
    pub fn sqrt_of(x: &Rational, width: &Rational) -> Self {
        assert!(!x.is_negative(), "square root of a negative rational");
        assert!(width.is_positive(), "width must be positive");
        if x.is_zero() {
            return RationalInterval::point(Rational::zero());
        }
        // √(n/d) = √(n·d)/d; scale by 2^k so that 1/(d·2^k) <= width.
        let n = x.numer();
        let d = x.denom();
        let nd = n * d;
        let r = nd.sqrt();
        if &r * &r == nd {
            return RationalInterval::point(Rational::new(r, d.clone()));
        }
        let mut scale = BigInt::one();
        while Rational::new(BigInt::one(), d * &scale) > *width {
            scale <<= 1;
        }
        let s = (nd * &scale * &scale).sqrt();
        let den = d * &scale;
        RationalInterval {
            lo: Rational::new(s.clone(), den.clone()),
            hi: Rational::new(s + 1, den),
        }
    }

    /// Enclosure of `√y` for all `y` in a nonnegative interval.
    pub fn sqrt(&self, width: &Rational) -> Self {
        let half = width / Rational::from_integer(2.into());
        let lo = Self::sqrt_of(&self.lo, &half);
        let hi = Self::sqrt_of(&self.hi, &half);
        RationalInterval {
            lo: lo.lo,
            hi: hi.hi,
        }
    }
}

impl fmt::Display for RationalInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            format_rational(&self.lo),
            format_rational(&self.hi)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, ratio};

    #[test]
    fn arithmetic_encloses() {
        let a = RationalInterval::new(ratio(-1, 2), ratio(1, 3));
        let b = RationalInterval::new(int(2), int(3));
        let p = a.mul(&b);
        assert_eq!(p, RationalInterval::new(ratio(-3, 2), int(1)));
        assert_eq!(a.recip(), Err(Error::Ambiguous));
        assert_eq!(
            b.recip().unwrap(),
            RationalInterval::new(ratio(1, 3), ratio(1, 2))
        );
        assert_eq!(a.abs(), RationalInterval::new(int(0), ratio(1, 2)));
    }

    #[test]
    fn sqrt_enclosures() {
        let w = ratio(1, 1000);
        let s = RationalInterval::sqrt_of(&int(2), &w);
        assert!(s.width() <= w);
        assert!(s.lo() * s.lo() < int(2) && s.hi() * s.hi() > int(2));
        assert!(RationalInterval::sqrt_of(&ratio(9, 4), &w).is_point());
        let s = RationalInterval::sqrt_of(&ratio(9, 5), &w);
        assert!(s.lo() * s.lo() <= ratio(9, 5) && ratio(9, 5) <= s.hi() * s.hi());
    }

    #[test]
    fn comparisons() {
        let a = RationalInterval::new(int(1), int(2));
        assert_eq!(a.cmp_rational(&int(3)), Some(Ordering::Less));
        assert_eq!(a.cmp_rational(&ratio(3, 2)), None);
        assert_eq!(a.sign(), Some(Ordering::Greater));
        let p = RationalInterval::point(int(0));
        assert_eq!(p.sign(), Some(Ordering::Equal));
    }
}
