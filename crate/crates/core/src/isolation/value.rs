//! Arithmetic on [`RealValue`]: exact inside α's quadratic field, interval
//! otherwise. Interval comparisons that cannot separate return
//! [`Error::Ambiguous`] so the caller can retry at a finer width.

use std::cmp::Ordering;

use num_traits::Zero;

use crate::contfrac::RealValue;
use crate::error::{Error, Result};
use crate::exact::{Rational, RationalInterval};

#[derive(Debug, Clone)]
pub(crate) struct Ctx {
    /// Width used when an exact value has to join an interval.
    pub width: Rational,
}

impl Ctx {
    fn iv(&self, v: &RealValue) -> RationalInterval {
        v.to_interval(&self.width)
    }

    pub fn add(&self, a: &RealValue, b: &RealValue) -> Result<RealValue> {
        Ok(match (a, b) {
            (RealValue::Exact(x), RealValue::Exact(y)) => RealValue::Exact(x.checked_add(y)?),
            _ => RealValue::Interval(self.iv(a).add(&self.iv(b))),
        })
    }

    pub fn sub(&self, a: &RealValue, b: &RealValue) -> Result<RealValue> {
        self.add(a, &neg(b))
    }

    pub fn mul(&self, a: &RealValue, b: &RealValue) -> Result<RealValue> {
        Ok(match (a, b) {
            (RealValue::Exact(x), RealValue::Exact(y)) => RealValue::Exact(x.checked_mul(y)?),
            _ => RealValue::Interval(self.iv(a).mul(&self.iv(b))),
        })
    }

    /// Certified ordering of `a` against `b`.
    pub fn cmp(&self, a: &RealValue, b: &RealValue) -> Result<Ordering> {
        cmp_rational(&self.sub(a, b)?, &Rational::zero())
    }

    /// Exact equality for exact operands; for enclosures, whether they are
    /// consistent (overlap).
    pub fn agree(&self, a: &RealValue, b: &RealValue) -> bool {
        match (a, b) {
            (RealValue::Exact(x), RealValue::Exact(y)) => x == y,
            _ => self.iv(a).overlaps(&self.iv(b)),
        }
    }
}

pub(crate) fn neg(a: &RealValue) -> RealValue {
    match a {
        RealValue::Exact(x) => RealValue::Exact(x.neg()),
        RealValue::Interval(iv) => RealValue::Interval(iv.neg()),
    }
}

pub(crate) fn abs(a: &RealValue) -> RealValue {
    match a {
        RealValue::Exact(x) => RealValue::Exact(x.abs()),
        RealValue::Interval(iv) => RealValue::Interval(iv.abs()),
    }
}

pub(crate) fn recip(a: &RealValue) -> Result<RealValue> {
    Ok(match a {
        RealValue::Exact(x) => RealValue::Exact(x.inverse()?),
        RealValue::Interval(iv) => RealValue::Interval(iv.recip()?),
    })
}

pub(crate) fn add_rational(a: &RealValue, r: &Rational) -> RealValue {
    match a {
        RealValue::Exact(x) => RealValue::Exact(x.add_rational(r)),
        RealValue::Interval(iv) => RealValue::Interval(iv.add_rational(r)),
    }
}

pub(crate) fn mul_rational(a: &RealValue, r: &Rational) -> RealValue {
    match a {
        RealValue::Exact(x) => RealValue::Exact(x.mul_rational(r)),
        RealValue::Interval(iv) => RealValue::Interval(iv.mul_rational(r)),
    }
}

pub(crate) fn cmp_rational(a: &RealValue, r: &Rational) -> Result<Ordering> {
    a.cmp_rational(r).ok_or(Error::Ambiguous)
}
