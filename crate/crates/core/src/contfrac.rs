//! Continued-fraction expansion, convergents, tails and continuants.
//!
//! Conventions: `p_{-1} = 1, q_{-1} = 0, p_{-2} = 0, q_{-2} = 1`, so that
//! `α_0^* = q_{-1}/q_0 = 0` and `q_{n+1}/q_n = a_{n+1} + α_n^*` hold from
//! `n = 0` on.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{Approximator, QuadraticSurd, Rational, RationalInterval, RealSpec, StreamRule};

/// Width used for stream tails when the caller does not ask for one.
pub const DEFAULT_TAIL_WIDTH_BITS: u32 = 96;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Convergent {
    pub n: usize,
    pub p: BigInt,
    pub q: BigInt,
}

impl Convergent {
    pub fn value(&self) -> Rational {
        Rational::new(self.p.clone(), self.q.clone())
    }
}

/// A real known either exactly or by a certified enclosure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RealValue {
    Exact(QuadraticSurd),
    Interval(RationalInterval),
}

impl RealValue {
    pub fn exact(&self) -> Option<&QuadraticSurd> {
        match self {
            RealValue::Exact(s) => Some(s),
            RealValue::Interval(_) => None,
        }
    }

    pub fn to_interval(&self, width: &Rational) -> RationalInterval {
        match self {
            RealValue::Exact(s) => s.to_interval(width),
            RealValue::Interval(iv) => iv.clone(),
        }
    }

    /// Certified ordering against `r`; `None` when an enclosure straddles it.
    pub fn cmp_rational(&self, r: &Rational) -> Option<Ordering> {
        match self {
            RealValue::Exact(s) => Some(s.cmp_rational(r)),
            RealValue::Interval(iv) => iv.cmp_rational(r),
        }
    }
}

/// `α_{n+1}` and `α_n^* = q_{n−1}/q_n` at one index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TailData {
    pub n: usize,
    pub alpha_next: RealValue,
    pub alpha_star: Rational,
}

/// `p_{n,k}/q_{n,k} = [a_{n+1}; a_{n+2}, …, a_{n+k}]`, with the previous
/// continuant kept for `α_{n,k}^*`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TailContinuants {
    pub n: usize,
    pub k: usize,
    pub p_nk: BigInt,
    pub q_nk: BigInt,
    pub q_prev: BigInt,
}

impl TailContinuants {
    /// `α_{n,k}^* = q_{n,k−1}/q_{n,k}`; zero at `k = 1`.
    pub fn alpha_star(&self) -> Rational {
        Rational::new(self.q_prev.clone(), self.q_nk.clone())
    }
}

/// Lazily extended expansion of a [`RealSpec`].
///
/// Extension takes `&mut self`, so one expansion has one writer; finished
/// prefixes are plain data and can be shared once built.
#[derive(Debug, Clone)]
pub struct CFExpansion {
    source: RealSpec,
    quotients: Vec<BigInt>,
    // p_n, q_n for every materialized quotient.
    convergents: Vec<(BigInt, BigInt)>,
    // Complete quotients α_0, α_1, … (surd sources, until a period closes).
    complete: Vec<QuadraticSurd>,
    seen: HashMap<QuadraticSurd, usize>,
    period: Option<(usize, usize)>,
    // Euclid state for rational sources.
    euclid: Option<(BigInt, BigInt)>,
    finite: bool,
}

impl CFExpansion {
    pub fn new(source: &RealSpec) -> Self {
        let mut cf = CFExpansion {
            source: source.clone(),
            quotients: Vec::new(),
            convergents: Vec::new(),
            complete: Vec::new(),
            seen: HashMap::new(),
            period: None,
            euclid: None,
            finite: false,
        };
        match source {
            RealSpec::Rational(r) => cf.euclid = Some((r.numer().clone(), r.denom().clone())),
            RealSpec::Surd(s) => {
                cf.seen.insert(s.clone(), 0);
                cf.complete.push(s.clone());
            }
            RealSpec::Stream(_) => {}
        }
        cf
    }

    /// Expansion with at least `count` quotients materialized (all of them
    /// for a rational).
    pub fn expand(source: &RealSpec, count: usize) -> Self {
        let mut cf = Self::new(source);
        cf.ensure(count.max(1));
        cf
    }

    pub fn source(&self) -> &RealSpec {
        &self.source
    }

    /// `(preperiod length, period length)` once a surd expansion has closed.
    pub fn period(&self) -> Option<(usize, usize)> {
        self.period
    }

    pub fn is_finite(&self) -> bool {
        self.finite
    }

    /// Quotients materialized so far.
    pub fn materialized(&self) -> &[BigInt] {
        &self.quotients
    }

    /// Total length of a finite expansion, once known.
    pub fn finite_len(&mut self) -> Option<usize> {
        if matches!(self.source, RealSpec::Rational(_)) {
            while !self.finite {
                self.push_next();
            }
            Some(self.quotients.len())
        } else {
            None
        }
    }

    /// Materializes quotients `a_0..a_{count−1}` where they exist.
    pub fn ensure(&mut self, count: usize) {
        while self.quotients.len() < count && !self.finite {
            self.push_next();
        }
    }

    fn push_next(&mut self) {
        let n = self.quotients.len();
        let a = match &self.source {
            RealSpec::Rational(_) => {
                let (num, den) = self.euclid.take().expect("euclid state");
                let (a, r) = num_integer::Integer::div_mod_floor(&num, &den);
                if r.is_zero() {
                    self.finite = true;
                } else {
                    self.euclid = Some((den, r));
                }
                a
            }
            RealSpec::Stream(rule) => rule.quotient(n),
            RealSpec::Surd(_) => match self.period {
                Some((pre, per)) => self.quotients[pre + (n - pre) % per].clone(),
                None => {
                    let x = self.complete[n].clone();
                    let a = x.floor();
                    let next = x
                        .sub_rational(&Rational::from_integer(a.clone()))
                        .inverse()
                        .expect("irrational surd has a nonzero fractional part");
                    match self.seen.get(&next) {
                        Some(&start) => self.period = Some((start, n + 1 - start)),
                        None => {
                            self.seen.insert(next.clone(), n + 1);
                            self.complete.push(next);
                        }
                    }
                    a
                }
            },
        };
        let (p, q) = match n {
            0 => (a.clone(), BigInt::one()),
            1 => {
                let (p0, q0) = &self.convergents[0];
                (&a * p0 + 1, &a * q0)
            }
            _ => {
                let (p1, q1) = &self.convergents[n - 1];
                let (p2, q2) = &self.convergents[n - 2];
                (&a * p1 + p2, &a * q1 + q2)
            }
        };
        self.quotients.push(a);
        self.convergents.push((p, q));
    }

    fn exhausted(&mut self, index: usize) -> Error {
        let len = self.finite_len().unwrap_or(self.quotients.len());
        Error::FiniteExpansionExhausted { index, len }
    }

    /// `a_n`.
    pub fn quotient(&mut self, n: usize) -> Result<BigInt> {
        self.ensure(n + 1);
        match self.quotients.get(n) {
            Some(a) => Ok(a.clone()),
            None => Err(self.exhausted(n)),
        }
    }

    /// `(p_n, q_n)`, with `n = −1` mapped to the seed `(1, 0)`.
    pub fn pq(&mut self, n: isize) -> Result<(BigInt, BigInt)> {
        match n {
            -2 => Ok((BigInt::zero(), BigInt::one())),
            -1 => Ok((BigInt::one(), BigInt::zero())),
            _ => {
                let n = n as usize;
                self.ensure(n + 1);
                match self.convergents.get(n) {
                    Some(pq) => Ok(pq.clone()),
                    None => Err(self.exhausted(n)),
                }
            }
        }
    }

    pub fn convergent(&mut self, n: usize) -> Result<Convergent> {
        let (p, q) = self.pq(n as isize)?;
        Ok(Convergent { n, p, q })
    }

    /// Convergents `0..=upto`.
    pub fn convergents(&mut self, upto: usize) -> Result<Vec<Convergent>> {
        (0..=upto).map(|n| self.convergent(n)).collect()
    }

    /// `α_n^* = q_{n−1}/q_n`.
    pub fn alpha_star(&mut self, n: usize) -> Result<Rational> {
        let (_, q1) = self.pq(n as isize - 1)?;
        let (_, q) = self.pq(n as isize)?;
        Ok(Rational::new(q1, q))
    }

    /// Complete quotient `α_m = [a_m; a_{m+1}, …]` as an exact surd
    /// (surd and rational sources only).
    pub fn complete_quotient(&mut self, m: usize) -> Result<Option<QuadraticSurd>> {
        match &self.source {
            RealSpec::Surd(_) => {
                self.ensure(m + 1);
                let idx = match self.period {
                    Some((pre, per)) if m >= pre => pre + (m - pre) % per,
                    _ => m,
                };
                Ok(Some(self.complete[idx].clone()))
            }
            RealSpec::Rational(_) => {
                let len = self.finite_len().unwrap_or(0);
                if m >= len {
                    return Err(self.exhausted(m));
                }
                // Evaluate the finite tail [a_m; …, a_{len−1}] backwards.
                let mut v = Rational::from_integer(self.quotients[len - 1].clone());
                for a in self.quotients[m..len - 1].iter().rev() {
                    v = Rational::from_integer(a.clone()) + v.recip();
                }
                Ok(Some(QuadraticSurd::from_rational(&v)))
            }
            RealSpec::Stream(_) => Ok(None),
        }
    }

    /// Enclosure of a stream complete quotient `α_m` of width ≤ `width`.
    pub fn complete_quotient_interval(
        &mut self,
        m: usize,
        width: &Rational,
    ) -> Result<RationalInterval> {
        match &self.source {
            RealSpec::Stream(rule) => Ok(stream_tail(*rule, m).interval(width)),
            _ => Ok(self
                .complete_quotient(m)?
                .expect("exact source")
                .to_interval(width)),
        }
    }

    /// `α_{n+1}` and `α_n^*`. Stream tails come back as an enclosure of
    /// width `2^-DEFAULT_TAIL_WIDTH_BITS`; see [`CFExpansion::tail_with_width`].
    pub fn tail(&mut self, n: usize) -> Result<TailData> {
        self.tail_with_width(n, &default_width())
    }

    pub fn tail_with_width(&mut self, n: usize, width: &Rational) -> Result<TailData> {
        if let Some(len) = self.finite_len() {
            if n + 1 >= len {
                return Err(Error::FiniteExpansionExhausted { index: n + 1, len });
            }
        }
        let alpha_star = self.alpha_star(n)?;
        let alpha_next = match self.complete_quotient(n + 1)? {
            Some(s) => RealValue::Exact(s),
            None => RealValue::Interval(self.complete_quotient_interval(n + 1, width)?),
        };
        Ok(TailData {
            n,
            alpha_next,
            alpha_star,
        })
    }

    /// `1/(q_n(α_{n+1} + α_n^*))`: exact for surds, an enclosure for streams.
    pub fn perron_error(&mut self, n: usize) -> Result<RealValue> {
        self.perron_error_with_width(n, &default_width())
    }

    pub fn perron_error_with_width(&mut self, n: usize, width: &Rational) -> Result<RealValue> {
        let t = self.tail_with_width(n, width)?;
        let (_, q) = self.pq(n as isize)?;
        let q = Rational::from_integer(q);
        Ok(match t.alpha_next {
            RealValue::Exact(s) => {
                RealValue::Exact(s.add_rational(&t.alpha_star).mul_rational(&q).inverse()?)
            }
            RealValue::Interval(iv) => {
                RealValue::Interval(iv.add_rational(&t.alpha_star).mul_rational(&q).recip()?)
            }
        })
    }

    /// `|q_n·α − p_n|` computed directly from α.
    pub fn direct_error(&mut self, n: usize, width: &Rational) -> Result<RealValue> {
        let (p, q) = self.pq(n as isize)?;
        let p = Rational::from_integer(p);
        let q = Rational::from_integer(q);
        Ok(match &self.source {
            RealSpec::Rational(r) => {
                RealValue::Exact(QuadraticSurd::from_rational(&(r * &q - p).abs()))
            }
            RealSpec::Surd(s) => RealValue::Exact(s.mul_rational(&q).sub_rational(&p).abs()),
            RealSpec::Stream(_) => {
                let iv = self.source.interval_refine(&(width / &q));
                RealValue::Interval(iv.mul_rational(&q).add_rational(&-p).abs())
            }
        })
    }

    /// Continuants of the tail `[a_{n+1}; …, a_{n+k}]` for `k = 1..=k_max`.
    pub fn tail_continuants(&mut self, n: usize, k_max: usize) -> Result<Vec<TailContinuants>> {
        let mut out = Vec::with_capacity(k_max);
        // (p, q) at depth k−1 and k−2, seeded like the main recurrence.
        let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
        let (mut p2, mut q2) = (BigInt::zero(), BigInt::one());
        for k in 1..=k_max {
            let a = self.quotient(n + k)?;
            let p = &a * &p1 + &p2;
            let q = &a * &q1 + &q2;
            out.push(TailContinuants {
                n,
                k,
                p_nk: p.clone(),
                q_nk: q.clone(),
                q_prev: q1.clone(),
            });
            p2 = std::mem::replace(&mut p1, p);
            q2 = std::mem::replace(&mut q1, q);
        }
        Ok(out)
    }

    /// Both sides of the tail Perron identity,
    /// `|q_{n,k}·α_{n+1} − p_{n,k}|` and `1/(q_{n,k}(α_{n+k+1} + α_{n,k}^*))`,
    /// exactly (surd and rational sources).
    pub fn tail_perron(
        &mut self,
        tc: &TailContinuants,
    ) -> Result<Option<(QuadraticSurd, QuadraticSurd)>> {
        let Some(a1) = self.complete_quotient(tc.n + 1)? else {
            return Ok(None);
        };
        let Some(ak) = self.complete_quotient(tc.n + tc.k + 1)? else {
            return Ok(None);
        };
        let q = Rational::from_integer(tc.q_nk.clone());
        let p = Rational::from_integer(tc.p_nk.clone());
        let lhs = a1.mul_rational(&q).sub_rational(&p).abs();
        let rhs = ak
            .add_rational(&tc.alpha_star())
            .mul_rational(&q)
            .inverse()?;
        Ok(Some((lhs, rhs)))
    }

    /// Convergents with `q_n ≤ q_bound`, in order.
    pub fn best_approximations(&mut self, q_bound: &BigInt) -> Vec<Convergent> {
        let mut out = Vec::new();
        for n in 0.. {
            match self.convergent(n) {
                Ok(c) if &c.q <= q_bound => out.push(c),
                _ => break,
            }
        }
        out
    }

    /// Index of the last convergent with `q_n ≤ q_bound`.
    pub fn last_index_within(&mut self, q_bound: &BigInt) -> Option<usize> {
        let mut last = None;
        for n in 0.. {
            match self.pq(n as isize) {
                Ok((_, q)) if &q <= q_bound => last = Some(n),
                _ => break,
            }
        }
        last
    }
}

fn default_width() -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << DEFAULT_TAIL_WIDTH_BITS)
}

fn stream_tail(rule: StreamRule, start: usize) -> Approximator {
    Approximator::stream_tail(rule, start)
}

/// Value of the finite continued fraction `[b_0; b_1, …, b_m]`.
pub fn evaluate_finite(quotients: &[BigInt]) -> Rational {
    let (last, rest) = quotients.split_last().expect("nonempty quotient list");
    let mut v = Rational::from_integer(last.clone());
    for b in rest.iter().rev() {
        v = Rational::from_integer(b.clone()) + v.recip();
    }
    v
}

/// `[0; a_n, a_{n−1}, …, a_1]`, or 0 when `n = 0`.
pub fn reversed_tail(quotients: &[BigInt], n: usize) -> Rational {
    if n == 0 {
        return Rational::zero();
    }
    let mut rev = vec![BigInt::zero()];
    rev.extend(quotients[1..=n].iter().rev().cloned());
    evaluate_finite(&rev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::ratio;

    fn sqrt2() -> RealSpec {
        RealSpec::Surd(QuadraticSurd::sqrt(2).unwrap())
    }

    fn phi() -> RealSpec {
        RealSpec::Surd(crate::exact::parse_surd("(1+sqrt 5)/2").unwrap())
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn expansions_and_periods() {
        let cf = CFExpansion::expand(&sqrt2(), 6);
        assert_eq!(
            &cf.materialized()[..6],
            ints(&[1, 2, 2, 2, 2, 2]).as_slice()
        );
        assert_eq!(cf.period(), Some((1, 1)));
        let cf = CFExpansion::expand(&phi(), 4);
        assert_eq!(cf.period(), Some((0, 1)));
        let mut cf = CFExpansion::expand(&RealSpec::Rational(ratio(355, 113)), 1);
        assert_eq!(cf.finite_len(), Some(3));
        assert_eq!(cf.materialized(), ints(&[3, 7, 16]).as_slice());
        let cf = CFExpansion::expand(&RealSpec::Stream(StreamRule::E), 9);
        assert_eq!(
            cf.materialized(),
            ints(&[2, 1, 2, 1, 1, 4, 1, 1, 6]).as_slice()
        );
        let s = crate::exact::parse_surd("sqrt 7").unwrap();
        let cf = CFExpansion::expand(&RealSpec::Surd(s), 10);
        assert_eq!(&cf.materialized()[..5], ints(&[2, 1, 1, 1, 4]).as_slice());
        assert_eq!(cf.period(), Some((1, 4)));
    }

    #[test]
    fn convergent_examples() {
        let mut cf = CFExpansion::new(&sqrt2());
        let c: Vec<_> = cf
            .convergents(3)
            .unwrap()
            .into_iter()
            .map(|c| c.value())
            .collect();
        assert_eq!(
            c,
            vec![ratio(1, 1), ratio(3, 2), ratio(7, 5), ratio(17, 12)]
        );
        let mut cf = CFExpansion::new(&phi());
        let q: Vec<_> = cf
            .convergents(4)
            .unwrap()
            .into_iter()
            .map(|c| c.q)
            .collect();
        assert_eq!(q, ints(&[1, 1, 2, 3, 5]));
    }

    #[test]
    fn tail_examples() {
        let mut cf = CFExpansion::new(&sqrt2());
        let t = cf.tail(1).unwrap();
        assert_eq!(t.alpha_star, ratio(1, 2));
        assert_eq!(
            t.alpha_next,
            RealValue::Exact(crate::exact::parse_surd("1+sqrt 2").unwrap())
        );
        assert_eq!(cf.tail(0).unwrap().alpha_star, ratio(0, 1));
        let mut cf = CFExpansion::new(&phi());
        for n in 0..5 {
            assert_eq!(
                cf.tail(n).unwrap().alpha_next,
                RealValue::Exact(crate::exact::parse_surd("(1+sqrt 5)/2").unwrap())
            );
        }
        let mut cf = CFExpansion::new(&RealSpec::Rational(ratio(355, 113)));
        assert!(cf.tail(1).is_ok());
        assert!(matches!(
            cf.tail(2),
            Err(Error::FiniteExpansionExhausted { .. })
        ));
    }

    #[test]
    fn perron_examples() {
        let mut cf = CFExpansion::new(&sqrt2());
        let e = cf.perron_error(1).unwrap();
        assert_eq!(
            e,
            RealValue::Exact(crate::exact::parse_surd("3-2*sqrt 2").unwrap())
        );
        let w = ratio(1, 1000);
        assert_eq!(cf.direct_error(2, &w).unwrap(), cf.perron_error(2).unwrap());
        let mut cf = CFExpansion::new(&phi());
        assert_eq!(
            cf.perron_error(0).unwrap(),
            RealValue::Exact(crate::exact::parse_surd("(-1+sqrt 5)/2").unwrap())
        );
    }

    #[test]
    fn stream_perron_encloses_direct_error() {
        let mut cf = CFExpansion::new(&RealSpec::Stream(StreamRule::E));
        let w = Rational::new(BigInt::one(), BigInt::one() << 80);
        for n in 0..15 {
            let a = cf.perron_error(n).unwrap().to_interval(&w);
            let b = cf.direct_error(n, &w).unwrap().to_interval(&w);
            assert!(a.overlaps(&b), "n = {n}: {a} vs {b}");
        }
    }

    #[test]
    fn tail_continuant_examples() {
        let mut cf = CFExpansion::new(&sqrt2());
        let q: Vec<_> = cf
            .tail_continuants(0, 3)
            .unwrap()
            .into_iter()
            .map(|t| t.q_nk)
            .collect();
        assert_eq!(q, ints(&[1, 2, 5]));
        let t = &cf.tail_continuants(4, 1).unwrap()[0];
        assert_eq!((t.p_nk.clone(), t.q_nk.clone()), (2.into(), 1.into()));
        let mut cf = CFExpansion::new(&phi());
        let q: Vec<_> = cf
            .tail_continuants(3, 6)
            .unwrap()
            .into_iter()
            .map(|t| t.q_nk)
            .collect();
        assert_eq!(q, ints(&[1, 1, 2, 3, 5, 8]));
    }

    #[test]
    fn best_approximation_lists() {
        let mut cf = CFExpansion::new(&sqrt2());
        let q: Vec<_> = cf
            .best_approximations(&12.into())
            .into_iter()
            .map(|c| c.q)
            .collect();
        assert_eq!(q, ints(&[1, 2, 5, 12]));
        let mut cf = CFExpansion::new(&phi());
        let q: Vec<_> = cf
            .best_approximations(&5.into())
            .into_iter()
            .map(|c| c.q)
            .collect();
        assert_eq!(q, ints(&[1, 1, 2, 3, 5]));
        assert_eq!(cf.best_approximations(&1.into()).len(), 2);
        let mut cf = CFExpansion::new(&sqrt2());
        assert_eq!(cf.best_approximations(&1.into()).len(), 1);
    }

    #[test]
    fn reversal_matches_alpha_star() {
        let mut cf = CFExpansion::new(&RealSpec::Stream(StreamRule::E));
        cf.ensure(30);
        let qs = cf.materialized().to_vec();
        for n in 0..29 {
            assert_eq!(reversed_tail(&qs, n), cf.alpha_star(n).unwrap());
        }
    }
}
