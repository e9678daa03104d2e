//! Solutions of `|α − p/q| < f(q)/q²`, the strengthened inequality with
//! `f − (1 − ε)·g_f`, and per-convergent traces of the isolation argument.

mod alpha;
pub mod report;
pub mod serial;
pub mod spectrum;
pub mod trace;
mod value;

use std::cmp::Ordering;
use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::contfrac::CFExpansion;
use crate::error::{Error, Result};
use crate::exact::real::DEFAULT_REFINEMENT_CAP;
use crate::exact::{QuadraticSurd, Rational, RealSpec};
use crate::funcspec::ApproxFunction;

pub use alpha::{error_interval, AlphaOracle};
pub use spectrum::{
    check_theorem_a, check_theorem_a_with, check_theorem_b, check_theorem_b_with, PsiCheck,
    TheoremAReport, TheoremBReport,
};
pub use trace::{trace_theorem2, trace_theorem2_with, Case, TraceChecks, TraceEntry, TraceSummary};

/// Refinement limits shared by every certified comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Convergent steps per comparison against a stream α.
    pub refinement_cap: usize,
    /// Largest enclosure precision, in bits, tried before giving up.
    pub max_precision_bits: u32,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            refinement_cap: DEFAULT_REFINEMENT_CAP,
            max_precision_bits: 1 << 14,
        }
    }
}

impl Budget {
    /// Scales both limits by `factor`.
    pub fn scaled(factor: u32) -> Self {
        let d = Budget::default();
        Budget {
            refinement_cap: d.refinement_cap.saturating_mul(factor as usize),
            max_precision_bits: d.max_precision_bits.saturating_mul(factor),
        }
    }
}

/// One solution `p/q` in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionRecord {
    #[serde(with = "serial::big")]
    pub p: BigInt,
    #[serde(with = "serial::big")]
    pub q: BigInt,
    pub is_convergent: bool,
    /// Sign of `bound − |α − p/q|`; positive for every recorded solution.
    #[serde(with = "serial::sign")]
    pub margin: Ordering,
    /// `bound − |α − p/q|` when α is exact.
    #[serde(with = "serial::opt_surd", default)]
    pub exact_margin: Option<QuadraticSurd>,
}

impl SolutionRecord {
    pub fn key(&self) -> (BigInt, BigInt) {
        (self.q.clone(), self.p.clone())
    }
}

/// Weak and strengthened solution lists from one scan.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolutionLists {
    pub weak: Vec<SolutionRecord>,
    pub strong: Vec<SolutionRecord>,
}

struct Scanner<'a> {
    oracle: AlphaOracle,
    f: &'a ApproxFunction,
    epsilon: Option<&'a Rational>,
    convergents: HashSet<(BigInt, BigInt)>,
}

impl<'a> Scanner<'a> {
    fn new(
        alpha: &RealSpec,
        f: &'a ApproxFunction,
        q_bound: u64,
        epsilon: Option<&'a Rational>,
        budget: &Budget,
    ) -> Self {
        let convergents = CFExpansion::new(alpha)
            .best_approximations(&BigInt::from(q_bound))
            .into_iter()
            .map(|c| (c.p, c.q))
            .collect();
        Scanner {
            oracle: AlphaOracle::new(alpha, budget.refinement_cap),
            f,
            epsilon,
            convergents,
        }
    }

    fn record(&self, p: &BigInt, q: &BigInt, bound: &Rational) -> SolutionRecord {
        let exact_margin = self
            .oracle
            .exact_error(p, q)
            .map(|e| e.neg().add_rational(bound));
        SolutionRecord {
            p: p.clone(),
            q: q.clone(),
            is_convergent: self.convergents.contains(&(p.clone(), q.clone())),
            margin: Ordering::Greater,
            exact_margin,
        }
    }

    /// Tests one coprime pair, pushing it onto the lists it solves.
    fn test(&mut self, p: &BigInt, q: &BigInt, out: &mut SolutionLists) -> Result<()> {
        let f_q = self.f.eval_f(q)?;
        let q2 = Rational::from_integer(q * q);
        let weak = &f_q / &q2;
        if self.oracle.cmp_error(p, q, &weak)? != Ordering::Less {
            return Ok(());
        }
        out.weak.push(self.record(p, q, &weak));
        if let Some(eps) = self.epsilon {
            let g = self.f.eval_gap(q)?.g;
            let strong = (f_q - (Rational::one() - eps) * g) / &q2;
            if strong.is_positive() && self.oracle.cmp_error(p, q, &strong)? == Ordering::Less {
                out.strong.push(self.record(p, q, &strong));
            }
        }
        Ok(())
    }

    /// Every `q` in `lo..=hi`, testing the integers next to `qα`.
    fn direct(&mut self, lo: u64, hi: u64, out: &mut SolutionLists) -> Result<()> {
        if lo > hi {
            return Ok(());
        }
        let width = Rational::new(BigInt::one(), BigInt::from(hi));
        let enclosure = self.oracle.enclosure(&width);
        for q in lo..=hi {
            let q = BigInt::from(q);
            for p in self.oracle.candidates(&q, &enclosure) {
                if p.gcd(&q).is_one() {
                    self.test(&p, &q, out)?;
                }
            }
        }
        Ok(())
    }
}

fn check_inputs(q_bound: u64, epsilon: Option<&Rational>) -> Result<()> {
    if q_bound == 0 {
        return Err(Error::Precondition("q_bound must be at least 1".into()));
    }
    if let Some(e) = epsilon {
        if !e.is_positive() || *e >= Rational::one() {
            return Err(Error::Precondition("epsilon must lie in (0, 1)".into()));
        }
    }
    Ok(())
}

/// Direct scan over `q = 1..=q_bound`, returning both lists. The strong
/// list stays empty without `epsilon`.
pub fn scan_solutions(
    alpha: &RealSpec,
    f: &ApproxFunction,
    q_bound: u64,
    epsilon: Option<&Rational>,
    budget: &Budget,
) -> Result<SolutionLists> {
    check_inputs(q_bound, epsilon)?;
    let mut s = Scanner::new(alpha, f, q_bound, epsilon, budget);
    let mut out = SolutionLists::default();
    s.direct(1, q_bound, &mut out)?;
    Ok(out)
}

/// Coprime `(p, q)` with `q ≤ q_bound` solving `|α − p/q| < f(q)/q²`, or the
/// strengthened inequality when `strengthened` carries `ε`.
///
/// For `f ≤ 1` a solution has `|qα − p| < 1`, so only `⌊qα⌋` and `⌈qα⌉`
/// are tested.
pub fn enumerate_solutions(
    alpha: &RealSpec,
    f: &ApproxFunction,
    q_bound: u64,
    strengthened: Option<&Rational>,
) -> Result<Vec<SolutionRecord>> {
    enumerate_solutions_with(alpha, f, q_bound, strengthened, &Budget::default())
}

pub fn enumerate_solutions_with(
    alpha: &RealSpec,
    f: &ApproxFunction,
    q_bound: u64,
    strengthened: Option<&Rational>,
    budget: &Budget,
) -> Result<Vec<SolutionRecord>> {
    let lists = scan_solutions(alpha, f, q_bound, strengthened, budget)?;
    Ok(if strengthened.is_some() {
        lists.strong
    } else {
        lists.weak
    })
}

/// Same output as [`enumerate_solutions`] without the strengthening, in
/// time proportional to the number of convergents.
///
/// Where `f(q) ≤ 1/2` every solution is a convergent (Legendre), so only
/// `q < x₀ = min{x : f(x) ≤ 1/2}` is scanned directly.
pub fn fast_solutions(
    alpha: &RealSpec,
    f: &ApproxFunction,
    q_bound: u64,
) -> Result<Vec<SolutionRecord>> {
    Ok(fast_solutions_with(alpha, f, q_bound, None, &Budget::default())?.weak)
}

pub fn fast_solutions_with(
    alpha: &RealSpec,
    f: &ApproxFunction,
    q_bound: u64,
    epsilon: Option<&Rational>,
    budget: &Budget,
) -> Result<SolutionLists> {
    check_inputs(q_bound, epsilon)?;
    if !f.is_decreasing() {
        return Err(Error::Precondition(
            "the convergent path needs a decreasing f".into(),
        ));
    }
    if !alpha.is_irrational() {
        return scan_solutions(alpha, f, q_bound, epsilon, budget);
    }
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let limit = BigInt::from(q_bound);
    let Some(x0) = f.first_at_most(&half, &limit)? else {
        return scan_solutions(alpha, f, q_bound, epsilon, budget);
    };
    let x0: u64 = x0.try_into().expect("x0 <= q_bound");
    let mut s = Scanner::new(alpha, f, q_bound, epsilon, budget);
    let mut out = SolutionLists::default();
    s.direct(1, x0 - 1, &mut out)?;
    let mut pairs: Vec<(BigInt, BigInt)> = s
        .convergents
        .iter()
        .filter(|(_, q)| *q >= BigInt::from(x0))
        .cloned()
        .collect();
    pairs.sort_by(|a, b| (&a.1, &a.0).cmp(&(&b.1, &b.0)));
    for (p, q) in pairs {
        s.test(&p, &q, &mut out)?;
    }
    Ok(out)
}

/// Outcome of a verification; never a refutation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Confirmed,
    InsufficientData,
}

/// Counts from the re-run at twice the bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rerun {
    pub q_bound: u64,
    pub weak_count: usize,
    pub strong_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsolationReport {
    #[serde(with = "serial::real_spec")]
    pub alpha: RealSpec,
    #[serde(with = "serial::function")]
    pub f: ApproxFunction,
    #[serde(with = "serial::rational")]
    pub epsilon: Rational,
    pub q_bound: u64,
    pub min_weak: usize,
    pub weak_solutions: Vec<SolutionRecord>,
    pub strong_solutions: Vec<SolutionRecord>,
    pub trace: Vec<TraceEntry>,
    pub trace_summary: Option<TraceSummary>,
    pub rerun: Option<Rerun>,
    pub verdict: Verdict,
    pub diagnostics: Vec<String>,
}

pub const DEFAULT_MIN_WEAK: usize = 5;

/// Both solution lists at `q_bound`, a re-run at `2·q_bound`, and a trace
/// over the convergents with `q_n ≤ q_bound`.
///
/// `Confirmed` when fewer than `min_weak` weak solutions exist, or when the
/// strong list is nonempty and its count does not drop at `2·q_bound`.
pub fn verify_theorem2(
    alpha: &RealSpec,
    f: &ApproxFunction,
    epsilon: &Rational,
    q_bound: u64,
    min_weak: usize,
) -> Result<IsolationReport> {
    verify_theorem2_with(alpha, f, epsilon, q_bound, min_weak, &Budget::default())
}

pub fn verify_theorem2_with(
    alpha: &RealSpec,
    f: &ApproxFunction,
    epsilon: &Rational,
    q_bound: u64,
    min_weak: usize,
    budget: &Budget,
) -> Result<IsolationReport> {
    check_inputs(q_bound, Some(epsilon))?;
    let mut report = IsolationReport {
        alpha: alpha.clone(),
        f: f.clone(),
        epsilon: epsilon.clone(),
        q_bound,
        min_weak,
        weak_solutions: Vec::new(),
        strong_solutions: Vec::new(),
        trace: Vec::new(),
        trace_summary: None,
        rerun: None,
        verdict: Verdict::InsufficientData,
        diagnostics: Vec::new(),
    };
    if !alpha.is_irrational() {
        let lists = scan_solutions(alpha, f, q_bound, Some(epsilon), budget)?;
        report.weak_solutions = lists.weak;
        report.strong_solutions = lists.strong;
        report
            .diagnostics
            .push("alpha is rational: solution lists are finite and the isolation argument does not apply".into());
        return Ok(report);
    }
    let lists = fast_solutions_with(alpha, f, q_bound, Some(epsilon), budget)?;
    let doubled = q_bound.saturating_mul(2);
    let again = fast_solutions_with(alpha, f, doubled, Some(epsilon), budget)?;
    report.rerun = Some(Rerun {
        q_bound: doubled,
        weak_count: again.weak.len(),
        strong_count: again.strong.len(),
    });
    report.weak_solutions = lists.weak;
    report.strong_solutions = lists.strong;

    let weak_keys: HashSet<_> = report
        .weak_solutions
        .iter()
        .map(SolutionRecord::key)
        .collect();
    let subset = report
        .strong_solutions
        .iter()
        .all(|s| weak_keys.contains(&s.key()));
    if !subset {
        report
            .diagnostics
            .push("invariant: a strong solution is missing from the weak list".into());
    }

    if let Some(last) = CFExpansion::new(alpha).last_index_within(&BigInt::from(q_bound)) {
        match trace_theorem2_with(alpha, f, epsilon, 0..=last, budget) {
            Ok(entries) => {
                let summary = TraceSummary::from_entries(&entries);
                for v in &summary.violations {
                    report.diagnostics.push(format!("trace: {v}"));
                }
                report.trace = entries;
                report.trace_summary = Some(summary);
            }
            Err(e) => report.diagnostics.push(format!("trace skipped: {e}")),
        }
    }

    let weak = report.weak_solutions.len();
    let strong = report.strong_solutions.len();
    let rerun = report.rerun.as_ref().expect("set above");
    report.verdict = if !subset {
        Verdict::InsufficientData
    } else if weak < min_weak {
        report.diagnostics.push(format!(
            "{weak} weak solutions, fewer than {min_weak}: confirmed vacuously"
        ));
        Verdict::Confirmed
    } else if strong == 0 {
        report.diagnostics.push(format!(
            "{weak} weak solutions but no strong solution up to {q_bound}"
        ));
        Verdict::InsufficientData
    } else if rerun.strong_count < strong {
        report.diagnostics.push(format!(
            "strong count fell from {strong} to {} at {}",
            rerun.strong_count, rerun.q_bound
        ));
        Verdict::InsufficientData
    } else {
        if rerun.strong_count == strong {
            report.diagnostics.push(format!(
                "strong count did not grow strictly between {q_bound} and {}",
                rerun.q_bound
            ));
        }
        Verdict::Confirmed
    };
    Ok(report)
}

/// One verification job.
#[derive(Debug, Clone)]
pub struct VerifyJob {
    pub alpha: RealSpec,
    pub f: ApproxFunction,
    pub epsilon: Rational,
    pub q_bound: u64,
    pub min_weak: usize,
}

/// Runs jobs in parallel; results come back in input order.
pub fn verify_batch(jobs: &[VerifyJob], budget: &Budget) -> Vec<Result<IsolationReport>> {
    jobs.par_iter()
        .map(|j| verify_theorem2_with(&j.alpha, &j.f, &j.epsilon, j.q_bound, j.min_weak, budget))
        .collect()
}
