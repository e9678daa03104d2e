//! Per-convergent trace of the isolation argument.
//!
//! Each entry classifies `n` into the two cases, and when
//! `1/(α_{n+1} + α_n^*) < f_n` computes `δ_n`, `C_n`, the depth `k` and
//! every intermediate inequality separately. Surd α gives exact values;
//! stream α gives enclosures, retried at higher precision until they
//! separate.

use std::cmp::Ordering;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::serial;
use super::value::{self, Ctx};
use super::Budget;
use crate::contfrac::{reversed_tail, CFExpansion, RealValue};
use crate::error::{Error, Result};
use crate::exact::{QuadraticSurd, Rational, RealSpec};
use crate::funcspec::ApproxFunction;

/// First enclosure precision tried for stream α, in bits.
pub const TRACE_START_BITS: u32 = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Case {
    /// `1/(α_{n+1} + α_n^*) < f_n·(1 − (f_n/q_n)²)`.
    CaseOne,
    CaseTwo,
}

/// Outcome of each checked relation; `None` where it does not apply.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TraceChecks {
    /// `p_n q_{n−1} − p_{n−1} q_n = (−1)^{n−1}`.
    pub determinant: bool,
    /// `q_{n−1}/q_n = [0; a_n, …, a_1]`.
    pub reversal: bool,
    /// `|q_n α − p_n| = 1/(q_n(α_{n+1} + α_n^*))`.
    pub perron: bool,
    /// Exactly one of the two case conditions holds, each decided on its own.
    pub dichotomy: bool,
    /// `1/(α_{n+1} + α_n^*) < f_n`.
    pub c3: bool,
    /// `δ_n > 0` and `α_{n+1} + α_n^* − 1/f_n = α_{n+1} − C_n/(A_n q_n)`.
    pub c_identity: Option<bool>,
    /// `q_{n,k} ≤ A_n q_n < q_{n,k+1}`.
    pub k_selection: bool,
    /// `A_n q_n δ_n ≥ |q_{n,k} α_{n+1} − p_{n,k}|`.
    pub c5: Option<bool>,
    /// `|q_{n,k} α_{n+1} − p_{n,k}| = 1/(q_{n,k}(α_{n+k+1} + α_{n,k}^*))`.
    pub perron1: Option<bool>,
    /// `|α_{n+k}^* − α_{n,k}^*| ≤ 1/q_{n,k}²`.
    pub proximity: Option<bool>,
    /// `q_{n+k} ≤ (q_{n+1} + q_n)·q_{n,k}`.
    pub continuant: Option<bool>,
    /// `q_{n+1}/q_n = a_{n+1} + α_n^* < α_{n+1} + α_n^* ≤ 1/(f_n(1 − (f_n/q_n)²))`.
    pub continuant_c22: Option<bool>,
    /// Whether `n + k` is itself in the second case.
    pub c2_at_n_plus_k: Option<bool>,
    /// `A_n q_n δ_n ≥ 1/(q_{n,k}(α_{n+k+1} + α_{n+k}^* + 1/q_{n,k}²))`.
    pub chain: Option<bool>,
    /// `A_n q_n δ_n > (f_{n+k}/q_{n,k})(1 − 2f_{n+k}/q_{n,k}²)`; expected for
    /// large `n` only.
    pub large_n_estimate: Option<bool>,
    /// `|α − p_n/q_n| < (f_n − (1 − ε)g_f(q_n))/q_n²`.
    pub strong_at_n: Option<bool>,
    /// First case at `n` implies `strong_at_n`.
    pub case_one_implies_strong: Option<bool>,
}

impl TraceChecks {
    /// Names of relations that must hold at every index and failed.
    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        let always = [
            ("determinant", self.determinant),
            ("reversal", self.reversal),
            ("perron", self.perron),
            ("dichotomy", self.dichotomy),
            ("k_selection", self.k_selection),
        ];
        for (name, ok) in always {
            if !ok {
                out.push(name);
            }
        }
        let when = [
            ("c_identity", self.c_identity),
            ("c5", self.c5),
            ("perron1", self.perron1),
            ("proximity", self.proximity),
            ("continuant", self.continuant),
            ("continuant_c22", self.continuant_c22),
            ("chain", self.chain),
            ("case_one_implies_strong", self.case_one_implies_strong),
        ];
        for (name, ok) in when {
            if ok == Some(false) {
                out.push(name);
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub n: usize,
    #[serde(with = "serial::big")]
    pub p_n: BigInt,
    #[serde(with = "serial::big")]
    pub q_n: BigInt,
    pub case: Case,
    #[serde(with = "serial::rational")]
    pub f_n: Rational,
    #[serde(with = "serial::big")]
    pub a_n: BigInt,
    #[serde(with = "serial::big")]
    pub b_n: BigInt,
    /// Present when (c3) holds.
    #[serde(with = "serial::opt_real_value", default)]
    pub delta_n: Option<RealValue>,
    #[serde(with = "serial::opt_big", default)]
    pub c_n: Option<BigInt>,
    pub k: usize,
    #[serde(with = "serial::big")]
    pub p_nk: BigInt,
    #[serde(with = "serial::big")]
    pub q_nk: BigInt,
    /// `δ_n > (1 − ε)·f(A_n q_n²/f_n + 2)/(A_n q_n)²`, when (c3) holds.
    pub final_bound_holds: Option<bool>,
    pub checks: TraceChecks,
}

impl TraceEntry {
    /// (c3) active in the second case.
    pub fn c3_active(&self) -> bool {
        self.case == Case::CaseTwo && self.checks.c3
    }
}

/// Counts over a trace, with thresholds read off the traced range.
///
/// The `*_from` fields are observational: the smallest traced `n` from
/// which the property held at every larger traced index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceSummary {
    pub entries: usize,
    pub case_one: usize,
    pub case_two: usize,
    pub c3_holds: usize,
    pub c3_active: usize,
    /// Neither case one nor (c3) occurs in the upper half of the range.
    pub no_active_case: bool,
    pub case_one_from: Option<usize>,
    pub final_bound_from: Option<usize>,
    pub strong_from: Option<usize>,
    pub violations: Vec<String>,
}

/// Smallest `n` such that `pred` holds at every later entry where it is
/// defined; `None` when it fails at the last such entry or is never defined.
fn holds_from(entries: &[TraceEntry], pred: impl Fn(&TraceEntry) -> Option<bool>) -> Option<usize> {
    let mut from = None;
    for e in entries.iter().rev() {
        match pred(e) {
            Some(true) => from = Some(e.n),
            Some(false) => break,
            None => {}
        }
    }
    from
}

impl TraceSummary {
    pub fn from_entries(entries: &[TraceEntry]) -> Self {
        let case_one = entries.iter().filter(|e| e.case == Case::CaseOne).count();
        let active = |e: &TraceEntry| e.case == Case::CaseOne || e.checks.c3;
        let upper = &entries[entries.len() / 2..];
        let mut violations = Vec::new();
        for e in entries {
            for name in e.checks.failures() {
                violations.push(format!("n = {}: {name}", e.n));
            }
        }
        TraceSummary {
            entries: entries.len(),
            case_one,
            case_two: entries.len() - case_one,
            c3_holds: entries.iter().filter(|e| e.checks.c3).count(),
            c3_active: entries.iter().filter(|e| e.c3_active()).count(),
            no_active_case: !upper.is_empty() && !upper.iter().any(active),
            case_one_from: holds_from(entries, |e| Some(e.case == Case::CaseOne)),
            final_bound_from: holds_from(entries, |e| e.final_bound_holds),
            strong_from: holds_from(entries, |e| e.checks.strong_at_n),
            violations,
        }
    }
}

/// Traces `n` over `range` with the default budget.
pub fn trace_theorem2(
    alpha: &RealSpec,
    f: &ApproxFunction,
    epsilon: &Rational,
    range: RangeInclusive<usize>,
) -> Result<Vec<TraceEntry>> {
    trace_theorem2_with(alpha, f, epsilon, range, &Budget::default())
}

pub fn trace_theorem2_with(
    alpha: &RealSpec,
    f: &ApproxFunction,
    epsilon: &Rational,
    range: RangeInclusive<usize>,
    budget: &Budget,
) -> Result<Vec<TraceEntry>> {
    if !alpha.is_irrational() {
        return Err(Error::Precondition(
            "the trace needs an irrational alpha".into(),
        ));
    }
    if *epsilon <= Rational::zero() || *epsilon >= Rational::one() {
        return Err(Error::Precondition("epsilon must lie in (0, 1)".into()));
    }
    let mut cf = CFExpansion::new(alpha);
    let mut out = Vec::new();
    for n in range {
        let mut bits = TRACE_START_BITS;
        loop {
            let ctx = Ctx {
                width: Rational::new(BigInt::one(), BigInt::one() << bits),
            };
            match entry(&mut cf, alpha, f, epsilon, n, &ctx) {
                Ok(e) => {
                    out.push(e);
                    break;
                }
                Err(Error::Ambiguous) if bits < budget.max_precision_bits => bits *= 2,
                Err(Error::Ambiguous) => {
                    return Err(Error::Undecided {
                        what: format!("trace entry n = {n} for {alpha}"),
                        refinements: bits as usize,
                    })
                }
                Err(e) => return Err(e),
            }
        }
    }
    Ok(out)
}

/// `α_m` exactly, or as an enclosure.
fn complete(cf: &mut CFExpansion, m: usize, ctx: &Ctx) -> Result<RealValue> {
    Ok(match cf.complete_quotient(m)? {
        Some(s) => RealValue::Exact(s),
        None => RealValue::Interval(cf.complete_quotient_interval(m, &ctx.width)?),
    })
}

fn int(x: &BigInt) -> Rational {
    Rational::from_integer(x.clone())
}

/// `f_n(1 − (f_n/q_n)²)`.
fn case_bound(f_n: &Rational, q: &BigInt) -> Rational {
    let r = f_n / int(q);
    f_n * (Rational::one() - &r * &r)
}

/// Whether `n` falls in the second case: `(α_{n+1} + α_n^*)·bound ≤ 1`.
fn in_case_two(s: &RealValue, bound: &Rational) -> Result<bool> {
    Ok(value::cmp_rational(&value::mul_rational(s, bound), &Rational::one())? != Ordering::Greater)
}

fn entry(
    cf: &mut CFExpansion,
    alpha: &RealSpec,
    f: &ApproxFunction,
    epsilon: &Rational,
    n: usize,
    ctx: &Ctx,
) -> Result<TraceEntry> {
    let ni = n as isize;
    let (p_n, q_n) = cf.pq(ni)?;
    let (p_m, q_m) = cf.pq(ni - 1)?;
    let (_, q_next) = cf.pq(ni + 1)?;
    let mut checks = TraceChecks::default();

    let sign = if n % 2 == 1 { 1 } else { -1 };
    checks.determinant = &p_n * &q_m - &p_m * &q_n == BigInt::from(sign);

    let tail = cf.tail_with_width(n, &ctx.width)?;
    cf.ensure(n + 1);
    checks.reversal = reversed_tail(cf.materialized(), n) == tail.alpha_star
        && tail.alpha_star == Rational::new(q_m.clone(), q_n.clone());

    let s = value::add_rational(&tail.alpha_next, &tail.alpha_star);
    let inv_s = value::recip(&s)?;
    let q_r = int(&q_n);

    // |q_n α − p_n| from α itself against the tail formula.
    let alpha_val = match alpha {
        RealSpec::Surd(x) => RealValue::Exact(x.clone()),
        RealSpec::Rational(r) => RealValue::Exact(QuadraticSurd::from_rational(r)),
        RealSpec::Stream(_) => RealValue::Interval(alpha.interval_refine(&(&ctx.width / &q_r))),
    };
    let direct = value::abs(&value::add_rational(
        &value::mul_rational(&alpha_val, &q_r),
        &-int(&p_n),
    ));
    let perron = value::mul_rational(&inv_s, &q_r.recip());
    checks.perron = ctx.agree(&direct, &perron);

    let f_n = f.eval_f(&q_n)?;
    let a_n = f_n.numer().clone();
    let b_n = f_n.denom().clone();
    let bound1 = case_bound(&f_n, &q_n);
    let c1 = value::cmp_rational(&inv_s, &bound1)? == Ordering::Less;
    let c2 = in_case_two(&s, &bound1)?;
    checks.dichotomy = c1 != c2;
    let case = if c1 { Case::CaseOne } else { Case::CaseTwo };
    checks.c3 = value::cmp_rational(&s, &f_n.recip())? == Ordering::Greater;

    // Depth k: q_{n,k} ≤ A_n q_n < q_{n,k+1}, with q_{n,0} = 0, p_{n,0} = 1.
    let aq = &a_n * &q_n;
    let (mut p_k, mut q_k) = (BigInt::one(), BigInt::zero());
    let (mut p_prev, mut q_prev) = (BigInt::zero(), BigInt::one());
    let mut k = 0;
    let q_k_next = loop {
        let a = cf.quotient(n + k + 1)?;
        let p = &a * &p_k + &p_prev;
        let q = &a * &q_k + &q_prev;
        if q > aq {
            break q;
        }
        p_prev = std::mem::replace(&mut p_k, p);
        q_prev = std::mem::replace(&mut q_k, q);
        k += 1;
    };
    checks.k_selection = q_k <= aq && aq < q_k_next;

    let alpha_far = complete(cf, n + k + 1, ctx)?;
    let (_, q_nk_idx) = cf.pq((n + k) as isize)?;
    let (_, q_nk_idx_prev) = cf.pq((n + k) as isize - 1)?;
    let qk_r = int(&q_k);
    // α_{n,k}^* = q_{n,k−1}/q_{n,k} and α_{n+k}^* = q_{n+k−1}/q_{n+k}.
    let star_nk = if k >= 1 {
        Some(Rational::new(q_prev.clone(), q_k.clone()))
    } else {
        None
    };
    let star_at = Rational::new(q_nk_idx_prev, q_nk_idx.clone());
    // |q_{n,k} α_{n+1} − p_{n,k}|
    let tail_err = value::abs(&value::add_rational(
        &value::mul_rational(&tail.alpha_next, &qk_r),
        &-int(&p_k),
    ));

    if let Some(star) = &star_nk {
        let rhs = value::recip(&value::mul_rational(
            &value::add_rational(&alpha_far, star),
            &qk_r,
        ))?;
        checks.perron1 = Some(ctx.agree(&tail_err, &rhs));
        let d = (&star_at - star).abs();
        checks.proximity = Some(d <= (&qk_r * &qk_r).recip());
        checks.continuant = Some(q_nk_idx <= (&q_next + &q_n) * &q_k);
    }

    if case == Case::CaseTwo {
        let a_next = cf.quotient(n + 1)?;
        let ratio = Rational::new(q_next.clone(), q_n.clone());
        let lower = int(&a_next) + &tail.alpha_star;
        let strict = value::cmp_rational(&s, &lower)? == Ordering::Greater;
        checks.continuant_c22 = Some(ratio == lower && strict && c2);
    }

    let mut delta_n = None;
    let mut c_n = None;
    let mut final_bound_holds = None;
    if checks.c3 {
        let delta = value::add_rational(&s, &-f_n.recip());
        let c = &q_n * &b_n - &q_m * &a_n;
        let aq_r = int(&aq);
        let delta2 = value::add_rational(&tail.alpha_next, &-Rational::new(c.clone(), aq.clone()));
        let positive = value::cmp_rational(&delta, &Rational::zero())? == Ordering::Greater;
        checks.c_identity = Some(positive && ctx.agree(&delta, &delta2));

        let lhs = value::mul_rational(&delta, &aq_r);
        // Equal sides cannot be separated by enclosures; recognise them.
        let same = q_k == aq && p_k == c;
        checks.c5 = Some(same || ctx.cmp(&lhs, &tail_err)? != Ordering::Less);

        if k >= 1 {
            let f_nk = f.eval_f(&q_nk_idx)?;
            let s_nk = value::add_rational(&alpha_far, &star_at);
            checks.c2_at_n_plus_k = Some(in_case_two(&s_nk, &case_bound(&f_nk, &q_nk_idx))?);
            let inner = value::add_rational(&s_nk, &(&qk_r * &qk_r).recip());
            let chain_rhs = value::recip(&value::mul_rational(&inner, &qk_r))?;
            checks.chain = Some(ctx.cmp(&lhs, &chain_rhs)? != Ordering::Less);
            let est = &f_nk / &qk_r
                * (Rational::one() - Rational::from_integer(2.into()) * &f_nk / (&qk_r * &qk_r));
            checks.large_n_estimate = Some(value::cmp_rational(&lhs, &est)? == Ordering::Greater);
        }

        let arg = &b_n * &q_n * &q_n + 2;
        let target = (Rational::one() - epsilon) * f.eval_f(&arg)? / (&aq_r * &aq_r);
        final_bound_holds = Some(value::cmp_rational(&delta, &target)? == Ordering::Greater);
        delta_n = Some(delta);
        c_n = Some(c);
    }

    if c1 || checks.c3 {
        let g = f.eval_gap(&q_n)?.g;
        let strong = (&f_n - (Rational::one() - epsilon) * g) / (&q_r * &q_r);
        let err = value::mul_rational(&perron, &q_r.recip());
        let ok = value::cmp_rational(&err, &strong)? == Ordering::Less;
        checks.strong_at_n = Some(ok);
        if c1 {
            checks.case_one_implies_strong = Some(ok);
        }
    }

    Ok(TraceEntry {
        n,
        p_n,
        q_n,
        case,
        f_n,
        a_n,
        b_n,
        delta_n,
        c_n,
        k,
        p_nk: p_k,
        q_nk: q_k,
        final_bound_holds,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse_real;
    use crate::exact::rational::ratio;
    use crate::funcspec::parse_function;

    fn run(a: &str, f: &str, range: RangeInclusive<usize>) -> Vec<TraceEntry> {
        trace_theorem2(
            &parse_real(a).unwrap(),
            &parse_function(f).unwrap(),
            &ratio(1, 10),
            range,
        )
        .unwrap()
    }

    #[test]
    fn sqrt2_half_is_case_one() {
        let t = run("surd:sqrt 2", "const 1/2", 0..=40);
        let s = TraceSummary::from_entries(&t);
        assert!(s.violations.is_empty(), "{:?}", s.violations);
        assert!(t[5..].iter().all(|e| e.case == Case::CaseOne));
        assert!(t[5..].iter().all(|e| e.checks.c5 == Some(true)));
        assert!(matches!(t[10].delta_n, Some(RealValue::Exact(_))));
    }

    #[test]
    fn golden_ratio_cases() {
        let t = run("surd:(1+sqrt 5)/2", "const 1/2", 0..=30);
        assert_eq!(t.len(), 31);
        assert!(t[3..].iter().all(|e| e.case == Case::CaseOne));
        assert!(TraceSummary::from_entries(&t).violations.is_empty());

        let t = run("surd:(1+sqrt 5)/2", "const 4/9", 0..=30);
        let s = TraceSummary::from_entries(&t);
        assert!(s.violations.is_empty(), "{:?}", s.violations);
        assert!(t[10..]
            .iter()
            .all(|e| !e.checks.c3 && e.case == Case::CaseTwo));
        assert!(s.no_active_case);
    }

    #[test]
    fn stream_with_intervals() {
        let t = run("stream:e", "const 1/2", 0..=25);
        let s = TraceSummary::from_entries(&t);
        assert!(s.violations.is_empty(), "{:?}", s.violations);
        assert!(t
            .iter()
            .any(|e| matches!(e.delta_n, Some(RealValue::Interval(_)))));
    }

    #[test]
    fn pow_functions() {
        for a in ["surd:sqrt 7", "surd:1+sqrt 3"] {
            for f in ["pow 1", "pow 2", "const 1/3"] {
                let t = run(a, f, 0..=20);
                let s = TraceSummary::from_entries(&t);
                assert!(s.violations.is_empty(), "{a} {f}: {:?}", s.violations);
            }
        }
    }

    #[test]
    fn rational_alpha_rejected() {
        let f = parse_function("const 1/2").unwrap();
        assert!(trace_theorem2(
            &parse_real("rat:355/113").unwrap(),
            &f,
            &ratio(1, 10),
            0..=3
        )
        .is_err());
    }
}
