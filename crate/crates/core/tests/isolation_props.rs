use std::cmp::Ordering;
use std::collections::HashSet;

use isoverify::exact::rational::ratio;
use isoverify::exact::{parse_real, QuadraticSurd, Rational, RealSpec};
use isoverify::funcspec::{parse_function, ApproxFunction};
use isoverify::isolation::{
    enumerate_solutions, fast_solutions, fast_solutions_with, scan_solutions, verify_theorem2,
    Budget, SolutionRecord, Verdict,
};
use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use proptest::prelude::*;

fn pairs(v: &[SolutionRecord]) -> Vec<(BigInt, BigInt)> {
    v.iter().map(|s| (s.p.clone(), s.q.clone())).collect()
}

/// `|α − p/q| < bound/q²` tested with surd arithmetic alone, over the
/// window of `p` around `qα` where `|qα − p| < 2`.
fn oracle(
    alpha: &QuadraticSurd,
    f: &ApproxFunction,
    q_bound: u64,
    eps: Option<&Rational>,
) -> Vec<(BigInt, BigInt)> {
    let mut out = Vec::new();
    for q in 1..=q_bound {
        let qb = BigInt::from(q);
        let mut bound = f.eval_f_u64(q).unwrap();
        if let Some(e) = eps {
            let g = f.eval_gap_u64(q).unwrap().g;
            bound -= (Rational::from_integer(1.into()) - e) * g;
        }
        let bound = bound / Rational::from_integer(&qb * &qb);
        let fl = alpha.mul_integer(&qb).floor();
        for p in [&fl - 1, fl.clone(), &fl + 1, &fl + 2] {
            if p.gcd(&qb) != BigInt::from(1) {
                continue;
            }
            let err = alpha
                .sub_rational(&Rational::new(p.clone(), qb.clone()))
                .abs();
            if err.cmp_rational(&bound) == Ordering::Less {
                out.push((p, qb.clone()));
            }
        }
    }
    out
}

fn surd_alpha() -> impl Strategy<Value = QuadraticSurd> {
    (-5i64..5, 1i64..4, 1i64..4, 2u64..300)
        .prop_filter("non-square", |(_, _, _, d)| d.sqrt() * d.sqrt() != *d)
        .prop_map(|(a, b, c, d)| {
            QuadraticSurd::new(a.into(), b.into(), c.into(), d.into()).unwrap()
        })
}

fn function() -> impl Strategy<Value = ApproxFunction> {
    prop_oneof![
        (1i64..10, 10i64..30).prop_map(|(a, b)| ApproxFunction::constant(ratio(a, b)).unwrap()),
        Just(ApproxFunction::constant(ratio(1, 1)).unwrap()),
        (1u32..3).prop_map(|s| ApproxFunction::power(s).unwrap()),
        Just(parse_function("table 1:1,3:1/2,20:1/3").unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn scans_match_exact_oracle(alpha in surd_alpha(), f in function(), q_bound in 1u64..400, e in 1i64..10) {
        let spec = RealSpec::surd(alpha.clone());
        let eps = ratio(e, 10);
        let lists = scan_solutions(&spec, &f, q_bound, Some(&eps), &Budget::default()).unwrap();
        prop_assert_eq!(pairs(&lists.weak), oracle(&alpha, &f, q_bound, None));
        prop_assert_eq!(pairs(&lists.strong), oracle(&alpha, &f, q_bound, Some(&eps)));
        let fast = fast_solutions_with(&spec, &f, q_bound, Some(&eps), &Budget::default()).unwrap();
        prop_assert_eq!(&fast, &lists);
        let weak: HashSet<_> = pairs(&lists.weak).into_iter().collect();
        prop_assert!(pairs(&lists.strong).iter().all(|p| weak.contains(p)));
    }

    #[test]
    fn strong_count_is_monotone(alpha in surd_alpha(), f in function(), q_bound in 1u64..2000) {
        let spec = RealSpec::surd(alpha);
        let eps = ratio(1, 10);
        let b = Budget::default();
        let small = fast_solutions_with(&spec, &f, q_bound, Some(&eps), &b).unwrap();
        let large = fast_solutions_with(&spec, &f, 2 * q_bound, Some(&eps), &b).unwrap();
        prop_assert!(large.strong.len() >= small.strong.len());
        prop_assert_eq!(&large.strong[..small.strong.len()], &small.strong[..]);
        prop_assert_eq!(&large.weak[..small.weak.len()], &small.weak[..]);
    }
}

#[test]
fn streams_fast_equals_direct() {
    for src in ["stream:e", "stream:tan1", "stream:coth-half"] {
        let alpha = parse_real(src).unwrap();
        for f in ["const 1/2", "pow 1", "const 1/3"] {
            let f = parse_function(f).unwrap();
            assert_eq!(
                fast_solutions(&alpha, &f, 3000).unwrap(),
                enumerate_solutions(&alpha, &f, 3000, None).unwrap(),
                "{src} {f}"
            );
        }
    }
}

#[test]
fn golden_ratio_half_lists_fibonacci_ratios() {
    let alpha = parse_real("surd:(1+sqrt 5)/2").unwrap();
    let f = parse_function("const 1/2").unwrap();
    let got = pairs(&enumerate_solutions(&alpha, &f, 100, None).unwrap());
    let fib = [1u32, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144];
    let want: Vec<(BigInt, BigInt)> = fib
        .windows(2)
        .map(|w| (BigInt::from(w[1]), BigInt::from(w[0])))
        .filter(|(p, q)| p > &BigInt::from(1) && q <= &BigInt::from(100))
        .collect();
    assert_eq!(got, want);
}

#[test]
fn hurwitz_constant_separates() {
    // The golden ratio has infinitely many solutions for a constant above
    // 1/√5 and finitely many below it. At desk scale: const 9/20 keeps
    // finding Fibonacci ratios, const 1/3 stops early.
    let alpha = parse_real("surd:(1+sqrt 5)/2").unwrap();
    let n = |f: &str, q: u64| {
        fast_solutions(&alpha, &parse_function(f).unwrap(), q)
            .unwrap()
            .len()
    };
    assert!(n("const 9/20", 100_000) > n("const 9/20", 1000));
    assert_eq!(n("const 1/3", 1000), n("const 1/3", 100_000));
}

#[test]
fn verification_verdicts() {
    let f = parse_function("const 1/2").unwrap();
    let eps = ratio(1, 10);
    for src in [
        "surd:sqrt 2",
        "surd:(1+sqrt 5)/2",
        "surd:sqrt 7",
        "stream:e",
    ] {
        let r = verify_theorem2(&parse_real(src).unwrap(), &f, &eps, 5000, 5).unwrap();
        assert_eq!(r.verdict, Verdict::Confirmed, "{src}: {:?}", r.diagnostics);
        assert!(r.strong_solutions.len() >= 5, "{src}");
        assert!(r.rerun.unwrap().strong_count >= r.strong_solutions.len());
    }
    let r = verify_theorem2(&parse_real("rat:22/7").unwrap(), &f, &eps, 1000, 5).unwrap();
    assert_eq!(r.verdict, Verdict::InsufficientData);
    assert!(verify_theorem2(
        &parse_real("surd:sqrt 2").unwrap(),
        &f,
        &ratio(1, 1),
        100,
        5
    )
    .is_err());
}
