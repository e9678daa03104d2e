//! Rational-valued approximation functions `f: ℤ₊ → ℚ ∩ (0, 1]`, the
//! isolation gap `g_f`, and `ψ_ν`.

mod dsl;
mod expr;
mod psi;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::exact::rational::{coprime, format_rational};
use crate::exact::Rational;

pub use dsl::parse_function;
pub use expr::Expr;
pub use psi::{eval_psi, psi_below_mu_over_x2};

/// Largest `x` for which the exponential rule's gap is computed.
pub const DEFAULT_EXP_GAP_CAP: u64 = 16;

/// Largest bit length of `base^x` the exponential rule will build.
pub const DEFAULT_EXP_BIT_BUDGET: u64 = 1 << 26;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    /// `f(x) = A/B`.
    Constant(Rational),
    /// `f(x) = 1/x^σ`.
    PowerReciprocal(u32),
    /// `f(x) = 1/base^x`.
    ExpReciprocal(BigInt),
    /// Step function: the value at the greatest listed `x' ≤ x`; the first
    /// value below the first point and the last value past the end.
    Table(Vec<(BigInt, Rational)>),
    Composite(Expr),
}

/// A function `f` with exact lowest-terms values `A(x)/B(x)`.
///
/// Expression rules keep a cache of evaluated
/// points behind a lock; each new point is checked against its cached
/// neighbours when the function is declared decreasing.
#[derive(Debug)]
pub struct ApproxFunction {
    rule: Rule,
    decreasing: bool,
    exp_gap_cap: u64,
    exp_bit_budget: u64,
    cache: RwLock<BTreeMap<BigInt, Rational>>,
}

impl Clone for ApproxFunction {
    fn clone(&self) -> Self {
        ApproxFunction {
            rule: self.rule.clone(),
            decreasing: self.decreasing,
            exp_gap_cap: self.exp_gap_cap,
            exp_bit_budget: self.exp_bit_budget,
            cache: RwLock::new(self.cache.read().expect("cache lock").clone()),
        }
    }
}

impl PartialEq for ApproxFunction {
    fn eq(&self, other: &Self) -> bool {
        self.rule == other.rule && self.decreasing == other.decreasing
    }
}

impl Eq for ApproxFunction {}

/// `g_f(x)` with the point where `f` was evaluated inside it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapValue {
    pub x: BigInt,
    pub f_x: Rational,
    /// `A(x)·x²/f(x) + 2 = B(x)·x² + 2`.
    pub argument: BigInt,
    pub f_argument: Rational,
    pub g: Rational,
}

impl ApproxFunction {
    fn with_rule(rule: Rule, decreasing: bool) -> Self {
        ApproxFunction {
            rule,
            decreasing,
            exp_gap_cap: DEFAULT_EXP_GAP_CAP,
            exp_bit_budget: DEFAULT_EXP_BIT_BUDGET,
            cache: RwLock::new(BTreeMap::new()),
        }
    }

    pub fn constant(value: Rational) -> Result<Self> {
        if !value.is_positive() || value > Rational::one() {
            return Err(Error::RangeViolation {
                x: BigInt::one(),
                value: format_rational(&value),
            });
        }
        Ok(Self::with_rule(Rule::Constant(value), true))
    }

    pub fn power(sigma: u32) -> Result<Self> {
        if sigma == 0 {
            return Err(Error::Precondition("pow needs sigma >= 1".into()));
        }
        Ok(Self::with_rule(Rule::PowerReciprocal(sigma), true))
    }

    pub fn exp(base: BigInt) -> Result<Self> {
        if base < BigInt::from(2) {
            return Err(Error::Precondition("exp needs an integer base >= 2".into()));
        }
        Ok(Self::with_rule(Rule::ExpReciprocal(base), true))
    }

    /// Table rule; sorted by `x` and deduplicated. `decreasing` is forced on
    /// when the listed values never increase, and rejected when they do.
    pub fn table(mut points: Vec<(BigInt, Rational)>, decreasing: bool) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Precondition("empty table".into()));
        }
        points.sort_by(|a, b| a.0.cmp(&b.0));
        for w in points.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::Precondition(format!(
                    "duplicate table point x = {}",
                    w[0].0
                )));
            }
        }
        for (x, v) in &points {
            if !x.is_positive() {
                return Err(Error::Precondition(format!(
                    "table point x = {x} is not positive"
                )));
            }
            if !v.is_positive() || *v > Rational::one() {
                return Err(Error::RangeViolation {
                    x: x.clone(),
                    value: format_rational(v),
                });
            }
        }
        let monotone = points.windows(2).all(|w| w[1].1 <= w[0].1);
        if decreasing && !monotone {
            let w = points.windows(2).find(|w| w[1].1 > w[0].1).unwrap();
            return Err(Error::MonotonicityViolation {
                lo: w[0].0.clone(),
                lo_value: format_rational(&w[0].1),
                hi: w[1].0.clone(),
                hi_value: format_rational(&w[1].1),
            });
        }
        Ok(Self::with_rule(Rule::Table(points), monotone))
    }

    pub fn composite(expr: Expr, decreasing: bool) -> Self {
        Self::with_rule(Rule::Composite(expr), decreasing)
    }

    pub fn rule(&self) -> &Rule {
        &self.rule
    }

    pub fn is_decreasing(&self) -> bool {
        self.decreasing
    }

    pub fn with_exp_gap_cap(mut self, cap: u64) -> Self {
        self.exp_gap_cap = cap;
        self
    }

    pub fn with_exp_bit_budget(mut self, bits: u64) -> Self {
        self.exp_bit_budget = bits;
        self
    }

    fn raw(&self, x: &BigInt) -> Result<Rational> {
        Ok(match &self.rule {
            Rule::Constant(v) => v.clone(),
            Rule::PowerReciprocal(s) => coprime(BigInt::one(), x.pow(*s)),
            Rule::ExpReciprocal(base) => {
                let e = x
                    .to_u32()
                    .filter(|&e| u64::from(e) * base.bits() <= self.exp_bit_budget)
                    .ok_or_else(|| {
                        Error::BudgetExceeded(format!(
                            "{base}^{x} exceeds {} bits",
                            self.exp_bit_budget
                        ))
                    })?;
                coprime(BigInt::one(), base.pow(e))
            }
            Rule::Table(points) => {
                let i = points.partition_point(|(px, _)| px <= x);
                points[i.saturating_sub(1)].1.clone()
            }
            Rule::Composite(e) => e.eval(x)?,
        })
    }

    fn is_user_rule(&self) -> bool {
        matches!(self.rule, Rule::Composite(_))
    }

    /// `f(x) = A(x)/B(x)` in lowest terms.
    pub fn eval_f(&self, x: &BigInt) -> Result<Rational> {
        if !x.is_positive() {
            return Err(Error::Precondition(format!("f evaluated at x = {x} < 1")));
        }
        if self.is_user_rule() {
            if let Some(v) = self.cache.read().expect("cache lock").get(x) {
                return Ok(v.clone());
            }
        }
        let v = self.raw(x)?;
        if !v.is_positive() || v > Rational::one() {
            return Err(Error::RangeViolation {
                x: x.clone(),
                value: format_rational(&v),
            });
        }
        if self.is_user_rule() {
            let mut cache = self.cache.write().expect("cache lock");
            if self.decreasing {
                if let Some((px, pv)) = cache.range(..x.clone()).next_back() {
                    if *pv < v {
                        return Err(monotonicity(px, pv, x, &v));
                    }
                }
                if let Some((nx, nv)) = cache.range(x.clone()..).next() {
                    if *nv > v {
                        return Err(monotonicity(x, &v, nx, nv));
                    }
                }
            }
            cache.insert(x.clone(), v.clone());
        }
        Ok(v)
    }

    pub fn eval_f_u64(&self, x: u64) -> Result<Rational> {
        self.eval_f(&BigInt::from(x))
    }

    /// `g_f(x) = f(x)²·f(B(x)x² + 2)/(A(x)x)²`.
    ///
    /// With `f(x) = A/B` and `f(B x² + 2) = A'/B'` this is `A'/(B²·B'·x²)`;
    /// `A'` is coprime to `B'`, so only `gcd(A', B²x²)` needs removing.
    pub fn eval_gap(&self, x: &BigInt) -> Result<GapValue> {
        if let Rule::ExpReciprocal(_) = self.rule {
            if *x > BigInt::from(self.exp_gap_cap) {
                return Err(Error::BudgetExceeded(format!(
                    "exponential gap capped at x <= {}, asked for x = {x}",
                    self.exp_gap_cap
                )));
            }
        }
        let f_x = self.eval_f(x)?;
        let b = f_x.denom();
        let x2 = x * x;
        let argument = b * &x2 + 2;
        let f_argument = self.eval_f(&argument)?;
        let small = b * b * &x2;
        let g0 = f_argument.numer().gcd(&small);
        let g = coprime(f_argument.numer() / &g0, small / &g0 * f_argument.denom());
        Ok(GapValue {
            x: x.clone(),
            f_x,
            argument,
            f_argument,
            g,
        })
    }

    pub fn eval_gap_u64(&self, x: u64) -> Result<GapValue> {
        self.eval_gap(&BigInt::from(x))
    }

    /// Smallest `x ≥ 1` with `f(x) ≤ threshold`, searched up to `limit`.
    /// Relies on `f` being decreasing; `None` if no such `x ≤ limit`.
    pub fn first_at_most(&self, threshold: &Rational, limit: &BigInt) -> Result<Option<BigInt>> {
        if !self.decreasing {
            return Err(Error::Precondition(
                "threshold search needs a decreasing f".into(),
            ));
        }
        let one = BigInt::one();
        if self.eval_f(&one)? <= *threshold {
            return Ok(Some(one));
        }
        // f(lo) > threshold; grow hi until f(hi) <= threshold.
        let mut lo = one.clone();
        let mut hi = BigInt::from(2);
        loop {
            if hi > *limit {
                if self.eval_f(limit)? > *threshold {
                    return Ok(None);
                }
                hi = limit.clone();
                break;
            }
            if self.eval_f(&hi)? <= *threshold {
                break;
            }
            lo = hi.clone();
            hi <<= 1;
        }
        while &hi - &lo > one {
            let mid: BigInt = (&lo + &hi) >> 1;
            if self.eval_f(&mid)? <= *threshold {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(Some(hi))
    }
}

fn monotonicity(lo: &BigInt, lo_value: &Rational, hi: &BigInt, hi_value: &Rational) -> Error {
    Error::MonotonicityViolation {
        lo: lo.clone(),
        lo_value: format_rational(lo_value),
        hi: hi.clone(),
        hi_value: format_rational(hi_value),
    }
}

/// DSL form; parses back to an equal function.
impl fmt::Display for ApproxFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.rule {
            Rule::Constant(v) => write!(f, "const {}", format_rational(v)),
            Rule::PowerReciprocal(s) => write!(f, "pow {s}"),
            Rule::ExpReciprocal(b) => write!(f, "exp {b}"),
            Rule::Table(points) => {
                let body: Vec<String> = points
                    .iter()
                    .map(|(x, v)| format!("{x}:{}", format_rational(v)))
                    .collect();
                write!(f, "table {}", body.join(","))
            }
            Rule::Composite(e) => {
                write!(f, "expr {e}")?;
                if self.decreasing {
                    write!(f, " decreasing")?;
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, ratio};

    #[test]
    fn eval_examples() {
        let c = ApproxFunction::constant(ratio(1, 2)).unwrap();
        let v = c.eval_f_u64(7).unwrap();
        assert_eq!((v.numer().clone(), v.denom().clone()), (1.into(), 2.into()));
        assert_eq!(
            ApproxFunction::power(2).unwrap().eval_f_u64(3).unwrap(),
            ratio(1, 9)
        );
        let e = ApproxFunction::exp(2.into()).unwrap();
        assert_eq!(e.eval_f_u64(4).unwrap(), ratio(1, 16));
        assert!(matches!(
            ApproxFunction::constant(ratio(3, 2)),
            Err(Error::RangeViolation { .. })
        ));
        assert!(matches!(
            e.eval_f(&BigInt::from(0)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn gap_closed_forms_small() {
        let c = ApproxFunction::constant(ratio(3, 7)).unwrap();
        let g = c.eval_gap_u64(5).unwrap();
        assert_eq!(g.g, ratio(3, 343 * 25));
        assert_eq!(g.argument, BigInt::from(7 * 25 + 2));
        let p = ApproxFunction::power(1).unwrap();
        // 1/((x^3 + 2)·x^4) at x = 2
        assert_eq!(p.eval_gap_u64(2).unwrap().g, ratio(1, 10 * 16));
        let e = ApproxFunction::exp(2.into()).unwrap();
        // 1/(x²·2^(x²2^x + 2x + 2)) at x = 1: 1/2^6
        assert_eq!(e.eval_gap_u64(1).unwrap().g, ratio(1, 64));
        assert!(matches!(e.eval_gap_u64(17), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn table_steps() {
        let t = ApproxFunction::table(
            vec![(10.into(), ratio(1, 3)), (1.into(), ratio(1, 2))],
            false,
        )
        .unwrap();
        assert!(t.is_decreasing());
        assert_eq!(t.eval_f_u64(1).unwrap(), ratio(1, 2));
        assert_eq!(t.eval_f_u64(9).unwrap(), ratio(1, 2));
        assert_eq!(t.eval_f_u64(10).unwrap(), ratio(1, 3));
        assert_eq!(t.eval_f_u64(1000).unwrap(), ratio(1, 3));
        let t = ApproxFunction::table(vec![(5.into(), ratio(1, 4))], false).unwrap();
        assert_eq!(t.eval_f_u64(2).unwrap(), ratio(1, 4));
        assert!(ApproxFunction::table(
            vec![(1.into(), ratio(1, 4)), (2.into(), ratio(1, 2))],
            true
        )
        .is_err());
    }

    #[test]
    fn lazy_monotonicity_check() {
        let f = parse_function("expr (x - 3)^2/(x^2 + 100) decreasing").unwrap();
        f.eval_f_u64(1).unwrap();
        f.eval_f_u64(2).unwrap();
        assert!(matches!(
            f.eval_f_u64(20),
            Err(Error::MonotonicityViolation { .. })
        ));
        let f = parse_function("expr 2*x/(x+1)").unwrap();
        assert!(matches!(f.eval_f_u64(3), Err(Error::RangeViolation { .. })));
    }

    #[test]
    fn first_at_most_search() {
        let p = ApproxFunction::power(1).unwrap();
        let x0 = p.first_at_most(&ratio(1, 2), &1000.into()).unwrap();
        assert_eq!(x0, Some(2.into()));
        let c = ApproxFunction::constant(int(1)).unwrap();
        assert_eq!(c.first_at_most(&ratio(1, 2), &1000.into()).unwrap(), None);
        let t = ApproxFunction::table(vec![(1.into(), int(1)), (77.into(), ratio(1, 2))], true)
            .unwrap();
        assert_eq!(
            t.first_at_most(&ratio(1, 2), &1000.into()).unwrap(),
            Some(77.into())
        );
        assert_eq!(t.first_at_most(&ratio(1, 2), &50.into()).unwrap(), None);
    }
}
