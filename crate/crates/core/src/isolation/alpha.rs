//! Certified comparisons of `|α − p/q|` against rational bounds.

use std::cmp::Ordering;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exact::rational::{floor, format_rational};
use crate::exact::{Approximator, QuadraticSurd, Rational, RationalInterval, RealSpec};

/// One α with its refinement state. Exact sources never refine; streams
/// keep their convergent bracket between calls.
#[derive(Debug, Clone)]
pub struct AlphaOracle {
    spec: RealSpec,
    approx: Approximator,
    cap: usize,
}

impl AlphaOracle {
    pub fn new(spec: &RealSpec, cap: usize) -> Self {
        AlphaOracle {
            spec: spec.clone(),
            approx: Approximator::new(spec),
            cap,
        }
    }

    pub fn spec(&self) -> &RealSpec {
        &self.spec
    }

    /// α as an exact surd, for rational and surd sources.
    pub fn exact(&self) -> Option<QuadraticSurd> {
        match &self.spec {
            RealSpec::Rational(r) => Some(QuadraticSurd::from_rational(r)),
            RealSpec::Surd(s) => Some(s.clone()),
            RealSpec::Stream(_) => None,
        }
    }

    /// Exact `|α − p/q|` when α is exact.
    pub fn exact_error(&self, p: &BigInt, q: &BigInt) -> Option<QuadraticSurd> {
        let r = Rational::new(p.clone(), q.clone());
        self.exact().map(|a| a.sub_rational(&r).abs())
    }

    pub fn cmp_alpha(&mut self, r: &Rational) -> Result<Ordering> {
        self.approx.cmp_rational(r, self.cap)
    }

    /// Ordering of `|α − p/q|` against `bound ≥ 0`.
    pub fn cmp_error(&mut self, p: &BigInt, q: &BigInt, bound: &Rational) -> Result<Ordering> {
        let r = Rational::new(p.clone(), q.clone());
        if let Some(e) = self.exact_error(p, q) {
            return Ok(e.cmp_rational(bound));
        }
        let spec = self.spec.clone();
        let undecided = |e: Error| match e {
            Error::Undecided { refinements, .. } => Error::Undecided {
                what: format!(
                    "|alpha - {p}/{q}| against {} for {}",
                    format_rational(bound),
                    spec
                ),
                refinements,
            },
            other => other,
        };
        // Streams are irrational, so α never equals either endpoint.
        let above_lo = self.cmp_alpha(&(&r - bound)).map_err(undecided)?;
        if above_lo != Ordering::Greater {
            return Ok(Ordering::Greater);
        }
        let below_hi = self.cmp_alpha(&(&r + bound)).map_err(undecided)?;
        Ok(if below_hi == Ordering::Less {
            Ordering::Less
        } else {
            Ordering::Greater
        })
    }

    /// Enclosure of α of width at most `width`.
    pub fn enclosure(&mut self, width: &Rational) -> RationalInterval {
        match &self.spec {
            RealSpec::Surd(s) => s.to_interval(width),
            _ => self.approx.interval(width),
        }
    }

    /// Integers `p` that can satisfy `|qα − p| < 1`, given an enclosure of α
    /// of width at most `1/q`.
    pub fn candidates(&self, q: &BigInt, enclosure: &RationalInterval) -> Vec<BigInt> {
        if let Some(a) = self.exact() {
            let qa = a.mul_integer(q);
            let fl = qa.floor();
            return if qa.cmp_rational(&Rational::from_integer(fl.clone())) == Ordering::Equal {
                vec![fl]
            } else {
                vec![fl.clone(), fl + 1]
            };
        }
        let q_r = Rational::from_integer(q.clone());
        let lo = floor(&(enclosure.lo() * &q_r));
        let hi = -floor(&-(enclosure.hi() * &q_r));
        let mut out = Vec::new();
        let mut p = lo;
        while p <= hi {
            out.push(p.clone());
            p += 1;
        }
        out
    }
}

/// `|α − p/q|` on an interval enclosure of α.
pub fn error_interval(alpha: &RationalInterval, p: &BigInt, q: &BigInt) -> RationalInterval {
    alpha
        .add_rational(&-Rational::new(p.clone(), q.clone()))
        .abs()
}
