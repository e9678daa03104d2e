//! Finite spot checks around the discrete spectrum constants `μ_ν`.
//!
//! Every `μ_ν` lies below 1/2, so only convergents can satisfy
//! `|α − p/q| < μ_ν/q²`. Comparisons against `μ_ν` go through `μ_ν²`,
//! which is rational: for surd α they are exact.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use super::value::{self, Ctx};
use super::{error_interval, fast_solutions_with, serial, Budget, SolutionRecord};
use crate::contfrac::{CFExpansion, RealValue};
use crate::error::{Error, Result};
use crate::exact::rational::format_rational;
use crate::exact::{QuadraticSurd, Rational, RealSpec};
use crate::funcspec::ApproxFunction;
use crate::markoff::{spectrum, SpectrumConstant};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pair {
    #[serde(with = "serial::big")]
    pub p: BigInt,
    #[serde(with = "serial::big")]
    pub q: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremAReport {
    pub nu: usize,
    #[serde(with = "serial::rational")]
    pub gamma: Rational,
    #[serde(with = "serial::surd")]
    pub mu_nu: QuadraticSurd,
    #[serde(with = "serial::surd")]
    pub mu_next: QuadraticSurd,
    #[serde(with = "serial::real_spec")]
    pub alpha: RealSpec,
    pub q_bound: u64,
    /// Solutions of `|α − p/q| < γ/q²`.
    pub gamma_solutions: Vec<SolutionRecord>,
    pub gamma_count_at_half: usize,
    /// Solutions of `|α − p/q| < μ_{ν+1}/q²`.
    pub mu_next_solutions: Vec<Pair>,
    pub mu_next_count_at_half: usize,
    /// The γ count did not change between `q_bound/2` and `q_bound`.
    pub gamma_stabilized: bool,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PsiCheck {
    #[serde(with = "serial::big")]
    pub p: BigInt,
    #[serde(with = "serial::big")]
    pub q: BigInt,
    /// `|α − p/q| ≤ ψ_ν(q)`.
    pub below_psi: bool,
    /// `|α − p/q| = ψ_ν(q)` exactly.
    pub equality: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremBReport {
    pub nu: usize,
    #[serde(with = "serial::surd")]
    pub mu: QuadraticSurd,
    #[serde(with = "serial::real_spec")]
    pub alpha: RealSpec,
    pub q_bound: u64,
    pub checks: Vec<PsiCheck>,
    pub note: String,
}

const SPOT_START_BITS: u32 = 64;

/// Runs `step` at increasing precision until it stops being ambiguous.
fn decide<T>(budget: &Budget, what: &str, mut step: impl FnMut(&Ctx) -> Result<T>) -> Result<T> {
    let mut bits = SPOT_START_BITS;
    loop {
        let ctx = Ctx {
            width: Rational::new(BigInt::one(), BigInt::one() << bits),
        };
        match step(&ctx) {
            Err(Error::Ambiguous) if bits < budget.max_precision_bits => bits *= 2,
            Err(Error::Ambiguous) => {
                return Err(Error::Undecided {
                    what: what.to_string(),
                    refinements: bits as usize,
                })
            }
            other => return other,
        }
    }
}

/// `q²·|α − p/q|`, exact or enclosed.
fn scaled_error(alpha: &RealSpec, p: &BigInt, q: &BigInt, ctx: &Ctx) -> RealValue {
    let q2 = Rational::from_integer(q * q);
    let r = Rational::new(p.clone(), q.clone());
    match alpha {
        RealSpec::Rational(a) => {
            RealValue::Exact(QuadraticSurd::from_rational(&((a - r).abs() * q2)))
        }
        RealSpec::Surd(a) => RealValue::Exact(a.sub_rational(&r).abs().mul_rational(&q2)),
        RealSpec::Stream(_) => {
            let iv = alpha.interval_refine(&(&ctx.width / &q2));
            RealValue::Interval(error_interval(&iv, p, q).mul_rational(&q2))
        }
    }
}

/// Ordering of `t²` against `target` for `t ≥ 0`.
fn cmp_square(ctx: &Ctx, t: &RealValue, target: &Rational) -> Result<Ordering> {
    value::cmp_rational(&ctx.mul(t, t)?, target)
}

/// Convergents `p/q` with `q ≤ q_bound` and `|α − p/q| < μ/q²`.
fn mu_solutions(
    alpha: &RealSpec,
    c: &SpectrumConstant,
    q_bound: u64,
    budget: &Budget,
) -> Result<Vec<Pair>> {
    let mu2 = c.mu_squared();
    let mut out = Vec::new();
    for conv in CFExpansion::new(alpha).best_approximations(&BigInt::from(q_bound)) {
        let what = format!("|alpha - {}/{}| against mu_{}", conv.p, conv.q, c.nu);
        let o = decide(budget, &what, |ctx| {
            cmp_square(ctx, &scaled_error(alpha, &conv.p, &conv.q, ctx), &mu2)
        })?;
        if o == Ordering::Less {
            out.push(Pair {
                p: conv.p,
                q: conv.q,
            });
        }
    }
    Ok(out)
}

fn constants(nu: usize) -> Result<(SpectrumConstant, SpectrumConstant)> {
    if nu == 0 {
        return Err(Error::Precondition("nu starts at 1".into()));
    }
    let mut s = spectrum(nu + 1)?;
    let next = s.pop().expect("nu + 1 constants");
    let cur = s.pop().expect("nu constants");
    Ok((cur, next))
}

/// Counts for `γ` and `μ_{ν+1}` at `q_bound` and `q_bound/2`, after checking
/// `μ_{ν+1} < γ < μ_ν` exactly.
pub fn check_theorem_a(
    nu: usize,
    gamma: &Rational,
    alpha: &RealSpec,
    q_bound: u64,
) -> Result<TheoremAReport> {
    check_theorem_a_with(nu, gamma, alpha, q_bound, &Budget::default())
}

pub fn check_theorem_a_with(
    nu: usize,
    gamma: &Rational,
    alpha: &RealSpec,
    q_bound: u64,
    budget: &Budget,
) -> Result<TheoremAReport> {
    if q_bound == 0 {
        return Err(Error::Precondition("q_bound must be at least 1".into()));
    }
    let (cur, next) = constants(nu)?;
    let g2 = gamma * gamma;
    if !gamma.is_positive() || g2 <= next.mu_squared() || g2 >= cur.mu_squared() {
        return Err(Error::GammaOutOfRange {
            gamma: format_rational(gamma),
            nu,
        });
    }
    let f = ApproxFunction::constant(gamma.clone())?;
    let half = (q_bound / 2).max(1);
    let gamma_solutions = fast_solutions_with(alpha, &f, q_bound, None, budget)?.weak;
    let gamma_count_at_half = gamma_solutions
        .iter()
        .filter(|s| s.q <= BigInt::from(half))
        .count();
    let mu_next_solutions = mu_solutions(alpha, &next, q_bound, budget)?;
    let mu_next_count_at_half = mu_next_solutions
        .iter()
        .filter(|s| s.q <= BigInt::from(half))
        .count();
    let gamma_stabilized = gamma_count_at_half == gamma_solutions.len();
    let note = format!(
        "finite check up to q = {q_bound}; whether either count is infinite is not decided here{}",
        if gamma_stabilized {
            "; the gamma count did not change after q_bound/2"
        } else {
            ""
        }
    );
    Ok(TheoremAReport {
        nu,
        gamma: gamma.clone(),
        mu_nu: cur.mu,
        mu_next: next.mu,
        alpha: alpha.clone(),
        q_bound,
        gamma_solutions,
        gamma_count_at_half,
        mu_next_solutions,
        mu_next_count_at_half,
        gamma_stabilized,
        note,
    })
}

/// For each solution of `|α − p/q| < μ_ν/q²` with `q ≤ q_bound`, whether
/// `|α − p/q| ≤ ψ_ν(q)`.
///
/// With `t = q²|α − p/q|`, `t ≤ q²ψ_ν(q)` iff `t/(1 − t²/q²) ≤ μ_ν`, and
/// both sides are nonnegative, so the test squares into `μ_ν²`.
pub fn check_theorem_b(nu: usize, alpha: &RealSpec, q_bound: u64) -> Result<TheoremBReport> {
    check_theorem_b_with(nu, alpha, q_bound, &Budget::default())
}

pub fn check_theorem_b_with(
    nu: usize,
    alpha: &RealSpec,
    q_bound: u64,
    budget: &Budget,
) -> Result<TheoremBReport> {
    if q_bound == 0 {
        return Err(Error::Precondition("q_bound must be at least 1".into()));
    }
    let (cur, _) = constants(nu)?;
    let mu2 = cur.mu_squared();
    let mut checks = Vec::new();
    for pair in mu_solutions(alpha, &cur, q_bound, budget)? {
        let q2 = Rational::from_integer(&pair.q * &pair.q);
        let what = format!("|alpha - {}/{}| against psi_{nu}", pair.p, pair.q);
        let o = decide(budget, &what, |ctx| {
            let t = scaled_error(alpha, &pair.p, &pair.q, ctx);
            let t2 = ctx.mul(&t, &t)?;
            let den =
                value::add_rational(&value::mul_rational(&t2, &-q2.recip()), &Rational::one());
            let h = ctx.mul(&t, &value::recip(&den)?)?;
            cmp_square(ctx, &h, &mu2)
        })?;
        checks.push(PsiCheck {
            p: pair.p,
            q: pair.q,
            below_psi: o != Ordering::Greater,
            equality: o == Ordering::Equal,
        });
    }
    let note = if matches!(alpha, RealSpec::Stream(_)) {
        "certified by rational enclosures".to_string()
    } else {
        "decided exactly".to_string()
    };
    Ok(TheoremBReport {
        nu,
        mu: cur.mu,
        alpha: alpha.clone(),
        q_bound,
        checks,
        note,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse_real;
    use crate::exact::rational::ratio;

    fn real(s: &str) -> RealSpec {
        parse_real(s).unwrap()
    }

    #[test]
    fn window() {
        let a = real("surd:sqrt 2");
        assert!(matches!(
            check_theorem_a(1, &ratio(1, 2), &a, 100),
            Err(Error::GammaOutOfRange { .. })
        ));
        assert!(matches!(
            check_theorem_a(1, &ratio(1, 3), &a, 100),
            Err(Error::GammaOutOfRange { .. })
        ));
    }

    #[test]
    fn sqrt2_and_golden_ratio() {
        let r = check_theorem_a(1, &ratio(2, 5), &real("surd:sqrt 2"), 20_000).unwrap();
        assert!(r.gamma_solutions.len() > r.gamma_count_at_half);
        assert!(r.mu_next_solutions.len() > r.mu_next_count_at_half);

        let r = check_theorem_a(1, &ratio(2, 5), &real("surd:(1+sqrt 5)/2"), 10_000).unwrap();
        assert!(r.gamma_stabilized);
        assert!(r.gamma_solutions.len() <= 3);
    }

    #[test]
    fn psi_checks() {
        // The conclusion is about infinitely many solutions, so small q may fail.
        let r = check_theorem_b(1, &real("surd:sqrt 2"), 1000).unwrap();
        assert!(r.checks.len() >= 5);
        assert!(r
            .checks
            .iter()
            .filter(|c| c.q >= BigInt::from(5))
            .all(|c| c.below_psi));
        let r = check_theorem_b(1, &real("surd:(1+sqrt 5)/2"), 100_000).unwrap();
        assert!(r.checks.iter().filter(|c| c.below_psi).count() >= 10);
        assert!(r.checks.iter().any(|c| c.equality));
        let r = check_theorem_b(2, &real("stream:e"), 10_000).unwrap();
        assert!(r.checks.iter().all(|c| !c.equality));
    }
}
