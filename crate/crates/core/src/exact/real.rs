//! Input reals: rationals, quadratic surds, and rule-generated partial
//! quotient streams, plus certified rational enclosures of each.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::interval::RationalInterval;
use super::rational::{format_rational, Rational};
use super::surd::QuadraticSurd;
use crate::error::{Error, Result};

/// Default cap on interval refinements before a comparison is `Undecided`.
pub const DEFAULT_REFINEMENT_CAP: usize = 10_000;

/// Built-in partial-quotient rules for transcendental reals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StreamRule {
    /// e = [2; 1, 2, 1, 1, 4, 1, 1, 6, …]
    E,
    /// tan 1 = [1; 1, 1, 3, 1, 5, 1, 7, …]
    Tan1,
    /// coth(1/2) = (e + 1)/(e − 1) = [2; 6, 10, 14, …]
    CothHalf,
}

impl StreamRule {
    pub const ALL: [StreamRule; 3] = [StreamRule::E, StreamRule::Tan1, StreamRule::CothHalf];

    pub fn quotient(self, n: usize) -> BigInt {
        let n64 = n as u64;
        BigInt::from(match self {
            StreamRule::E => match n {
                0 => 2,
                _ if n % 3 == 2 => 2 * (n64 + 1) / 3,
                _ => 1,
            },
            StreamRule::Tan1 => match n {
                0 => 1,
                _ if n % 2 == 1 => n64,
                _ => 1,
            },
            StreamRule::CothHalf => 4 * n64 + 2,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            StreamRule::E => "e",
            StreamRule::Tan1 => "tan1",
            StreamRule::CothHalf => "coth-half",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|r| r.name() == s)
    }
}

/// The real number α under study.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RealSpec {
    Rational(Rational),
    /// Always irrational: rational-valued surds are stored as `Rational`.
    Surd(QuadraticSurd),
    Stream(StreamRule),
}

impl RealSpec {
    pub fn surd(s: QuadraticSurd) -> Self {
        match s.to_rational() {
            Some(r) => RealSpec::Rational(r),
            None => RealSpec::Surd(s),
        }
    }

    pub fn is_irrational(&self) -> bool {
        !matches!(self, RealSpec::Rational(_))
    }

    pub fn quotients(&self) -> QuotientIter {
        QuotientIter::new(self)
    }

    /// Enclosure of width at most `width`. Irrational values are bracketed by
    /// consecutive convergents; rationals come back as a point.
    pub fn interval_refine(&self, width: &Rational) -> RationalInterval {
        assert!(width.is_positive(), "width must be positive");
        let mut approx = Approximator::new(self);
        approx.interval(width)
    }
}

impl fmt::Display for RealSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealSpec::Rational(r) => write!(f, "rat:{}", format_rational(r)),
            RealSpec::Surd(s) => write!(f, "surd:{s}"),
            RealSpec::Stream(rule) => write!(f, "stream:{}", rule.name()),
        }
    }
}

/// Partial quotients `a_0, a_1, …` of a real, in canonical form for
/// rationals (last quotient ≥ 2 unless the expansion has length one).
#[derive(Debug, Clone)]
pub enum QuotientIter {
    Rational { num: BigInt, den: BigInt },
    Surd(QuadraticSurd),
    Stream { rule: StreamRule, index: usize },
    Done,
}

impl QuotientIter {
    pub fn new(x: &RealSpec) -> Self {
        match x {
            RealSpec::Rational(r) => QuotientIter::Rational {
                num: r.numer().clone(),
                den: r.denom().clone(),
            },
            RealSpec::Surd(s) => QuotientIter::Surd(s.clone()),
            RealSpec::Stream(rule) => QuotientIter::Stream {
                rule: *rule,
                index: 0,
            },
        }
    }

    /// Quotients of the stream tail `[a_start; a_start+1, …]`.
    pub fn stream_tail(rule: StreamRule, start: usize) -> Self {
        QuotientIter::Stream { rule, index: start }
    }
}

impl Iterator for QuotientIter {
    type Item = BigInt;

    fn next(&mut self) -> Option<BigInt> {
        match self {
            QuotientIter::Done => None,
            QuotientIter::Rational { num, den } => {
                let (a, r) = num.div_mod_floor(den);
                if r.is_zero() {
                    *self = QuotientIter::Done;
                } else {
                    let new_den = r;
                    let new_num = std::mem::replace(den, BigInt::zero());
                    *num = new_num;
                    *den = new_den;
                }
                Some(a)
            }
            QuotientIter::Surd(x) => {
                let a = x.floor();
                let frac = x.sub_rational(&Rational::from_integer(a.clone()));
                match frac.inverse() {
                    Ok(next) => *x = next,
                    Err(_) => *self = QuotientIter::Done,
                }
                Some(a)
            }
            QuotientIter::Stream { rule, index } => {
                let a = rule.quotient(*index);
                *index += 1;
                Some(a)
            }
        }
    }
}

/// Incremental convergent bracketing of a real, for certified comparisons
/// against rationals.
#[derive(Debug, Clone)]
pub struct Approximator {
    exact: Option<ExactValue>,
    quotients: QuotientIter,
    // (p_{n-1}, q_{n-1}), (p_n, q_n)
    prev: (BigInt, BigInt),
    cur: (BigInt, BigInt),
    started: bool,
    finished: bool,
    steps: usize,
}

#[derive(Debug, Clone)]
enum ExactValue {
    Rational(Rational),
    Surd(QuadraticSurd),
}

impl Approximator {
    pub fn new(x: &RealSpec) -> Self {
        let exact = match x {
            RealSpec::Rational(r) => Some(ExactValue::Rational(r.clone())),
            RealSpec::Surd(s) => Some(ExactValue::Surd(s.clone())),
            RealSpec::Stream(_) => None,
        };
        Self::from_parts(exact, x.quotients())
    }

    /// Approximator for `[a_start; a_start+1, …]` of a stream rule.
    pub fn stream_tail(rule: StreamRule, start: usize) -> Self {
        Self::from_parts(None, QuotientIter::stream_tail(rule, start))
    }

    fn from_parts(exact: Option<ExactValue>, quotients: QuotientIter) -> Self {
        Approximator {
            exact,
            quotients,
            prev: (BigInt::one(), BigInt::zero()),
            cur: (BigInt::zero(), BigInt::one()),
            started: false,
            finished: false,
            steps: 0,
        }
    }

    /// Number of convergent steps taken so far.
    pub fn steps(&self) -> usize {
        self.steps
    }

    fn step(&mut self) -> bool {
        if self.finished {
            return false;
        }
        match self.quotients.next() {
            Some(a) => {
                // Seeds p_{-2}=0, q_{-2}=1, p_{-1}=1, q_{-1}=0 on the first step.
                let (p1, q1) = if self.started {
                    self.cur.clone()
                } else {
                    (BigInt::one(), BigInt::zero())
                };
                let (p2, q2) = if self.started {
                    self.prev.clone()
                } else {
                    (BigInt::zero(), BigInt::one())
                };
                let p = &a * &p1 + p2;
                let q = &a * &q1 + q2;
                self.prev = (p1, q1);
                self.cur = (p, q);
                self.started = true;
                self.steps += 1;
                true
            }
            None => {
                self.finished = true;
                false
            }
        }
    }

    /// Current bracket. Before the second convergent it is `[a_0, a_0 + 1]`.
    pub fn current(&mut self) -> RationalInterval {
        if !self.started {
            self.step();
        }
        let c = Rational::new(self.cur.0.clone(), self.cur.1.clone());
        if self.finished {
            return RationalInterval::point(c);
        }
        if self.prev.1.is_zero() {
            return RationalInterval::new(c.clone(), c + Rational::one());
        }
        let p = Rational::new(self.prev.0.clone(), self.prev.1.clone());
        RationalInterval::hull(p, c)
    }

    /// One refinement step; returns the new bracket.
    pub fn refine(&mut self) -> RationalInterval {
        if !self.started {
            self.step();
        }
        self.step();
        self.current()
    }

    pub fn interval(&mut self, width: &Rational) -> RationalInterval {
        let mut iv = self.current();
        while iv.width() > *width {
            iv = self.refine();
        }
        iv
    }

    /// Certified three-way comparison of the real against `r`. Exact for
    /// rational and surd sources; refines convergent brackets for streams.
    pub fn cmp_rational(&mut self, r: &Rational, cap: usize) -> Result<Ordering> {
        match &self.exact {
            Some(ExactValue::Rational(x)) => return Ok(x.cmp(r)),
            Some(ExactValue::Surd(s)) => return Ok(s.cmp_rational(r)),
            None => {}
        }
        let mut iv = self.current();
        let mut used = 0;
        loop {
            if let Some(o) = iv.cmp_rational(r) {
                return Ok(o);
            }
            if used >= cap {
                return Err(Error::Undecided {
                    what: format!("real against {}", format_rational(r)),
                    refinements: used,
                });
            }
            iv = self.refine();
            used += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, ratio};
    use num_traits::ToPrimitive;

    #[test]
    fn e_quotients() {
        let q: Vec<i64> = (0..9)
            .map(|n| StreamRule::E.quotient(n).try_into().unwrap())
            .collect();
        assert_eq!(q, vec![2, 1, 2, 1, 1, 4, 1, 1, 6]);
        let t: Vec<i64> = (0..8)
            .map(|n| StreamRule::Tan1.quotient(n).try_into().unwrap())
            .collect();
        assert_eq!(t, vec![1, 1, 1, 3, 1, 5, 1, 7]);
    }

    #[test]
    fn stream_rules_match_float_values() {
        for (rule, value) in [
            (StreamRule::E, std::f64::consts::E),
            (StreamRule::Tan1, 1f64.tan()),
            (StreamRule::CothHalf, 1.0 / 0.5f64.tanh()),
        ] {
            let iv = RealSpec::Stream(rule).interval_refine(&ratio(1, 1_000_000_000_000i64));
            let lo = iv.lo().to_f64().unwrap();
            assert!((lo - value).abs() < 1e-9, "{rule:?}: {lo} vs {value}");
        }
    }

    #[test]
    fn rational_quotients_are_euclid() {
        let q: Vec<BigInt> = RealSpec::Rational(ratio(355, 113)).quotients().collect();
        assert_eq!(q, vec![3.into(), 7.into(), 16.into()]);
        let q: Vec<BigInt> = RealSpec::Rational(ratio(-7, 2)).quotients().collect();
        assert_eq!(q, vec![(-4).into(), 2.into()]);
        let q: Vec<BigInt> = RealSpec::Rational(int(5)).quotients().collect();
        assert_eq!(q, vec![5.into()]);
    }

    #[test]
    fn refine_examples() {
        // e to width 1/100: consecutive convergents with q_n q_{n+1} >= 100.
        let iv = RealSpec::Stream(StreamRule::E).interval_refine(&ratio(1, 100));
        assert!(iv.width() <= ratio(1, 100));
        assert_eq!(iv, RationalInterval::new(ratio(19, 7), ratio(87, 32)));
        let iv = RealSpec::Rational(ratio(1, 3)).interval_refine(&ratio(1, 10));
        assert_eq!(iv, RationalInterval::point(ratio(1, 3)));
        let r2 = QuadraticSurd::sqrt(2).unwrap();
        let iv = RealSpec::Surd(r2.clone()).interval_refine(&ratio(1, 10));
        assert!(iv.width() <= ratio(1, 10));
        assert_eq!(r2.cmp_rational(iv.lo()), Ordering::Greater);
        assert_eq!(r2.cmp_rational(iv.hi()), Ordering::Less);
    }

    #[test]
    fn stream_comparison_and_cap() {
        let mut a = Approximator::new(&RealSpec::Stream(StreamRule::E));
        assert_eq!(
            a.cmp_rational(&ratio(271828, 100000), 100).unwrap(),
            Ordering::Greater
        );
        assert_eq!(
            a.cmp_rational(&ratio(271829, 100000), 100).unwrap(),
            Ordering::Less
        );
        // e = 2.718281828459045..., a rational one unit off at 10^-30 needs many steps.
        let close = Rational::new(
            "2718281828459045235360287471352".parse::<BigInt>().unwrap(),
            BigInt::from(10).pow(30),
        );
        let mut b = Approximator::new(&RealSpec::Stream(StreamRule::E));
        assert!(matches!(
            b.cmp_rational(&close, 3),
            Err(Error::Undecided { .. })
        ));
        assert_eq!(b.cmp_rational(&close, 10_000).unwrap(), Ordering::Greater);
    }
}
