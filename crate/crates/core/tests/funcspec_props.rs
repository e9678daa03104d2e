use isoverify::exact::rational::ratio;
use isoverify::exact::{Rational, RationalInterval};
use isoverify::funcspec::{eval_psi, parse_function, psi_below_mu_over_x2, ApproxFunction};
use isoverify::markoff::spectrum;
use isoverify::Error;
use num_bigint::BigInt;
use num_traits::{One, Pow};
use proptest::prelude::*;

fn int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

fn cube_over_x2(f: &Rational, x: u64) -> Rational {
    f * f * f / int(x * x)
}

fn decreasing_table() -> impl Strategy<Value = ApproxFunction> {
    prop::collection::vec((1u64..50, 1i64..40), 1..6).prop_map(|steps| {
        let mut x = 0u64;
        let mut den = 1i64;
        let points = steps
            .into_iter()
            .map(|(dx, dd)| {
                x += dx;
                den += dd;
                (BigInt::from(x), ratio(1, den))
            })
            .collect();
        ApproxFunction::table(points, true).unwrap()
    })
}

proptest! {
    #[test]
    fn const_gap_closed_form(a in 1i64..50, b in 1i64..50, x in 1u64..2000) {
        prop_assume!(a <= b);
        let f = ApproxFunction::constant(ratio(a, b)).unwrap();
        let g = f.eval_gap_u64(x).unwrap();
        let v = ratio(a, b);
        // A/(B³x²) with A/B in lowest terms.
        prop_assert_eq!(&g.g, &(int(v.numer().clone()) / int(v.denom().pow(3u32) * BigInt::from(x * x))));
        prop_assert!(g.g > Rational::from_integer(0.into()) && g.g < g.f_x);
        prop_assert!(g.g <= cube_over_x2(&g.f_x, x));
    }

    #[test]
    fn pow_gap_closed_form(sigma in 1u32..5, x in 1u64..300) {
        let f = ApproxFunction::power(sigma).unwrap();
        let g = f.eval_gap_u64(x).unwrap();
        let xs = BigInt::from(x).pow(sigma);
        let arg: BigInt = BigInt::from(x).pow(sigma + 2) + 2;
        let want = Rational::one() / int(&xs * &xs * arg.pow(sigma) * BigInt::from(x * x));
        prop_assert_eq!(&g.g, &want);
        prop_assert!(g.g <= cube_over_x2(&g.f_x, x));
    }

    #[test]
    fn table_gaps_are_bounded(f in decreasing_table(), x in 1u64..400) {
        let g = f.eval_gap_u64(x).unwrap();
        prop_assert!(g.g > Rational::from_integer(0.into()));
        prop_assert!(g.g < g.f_x);
        prop_assert!(g.g <= cube_over_x2(&g.f_x, x));
        prop_assert!(g.f_argument <= g.f_x);
    }

    #[test]
    fn dsl_round_trips(f in decreasing_table(), a in 1i64..20, b in 20i64..40, s in 1u32..6) {
        for f in [f, ApproxFunction::constant(ratio(a, b)).unwrap(), ApproxFunction::power(s).unwrap()] {
            let back = parse_function(&f.to_string()).unwrap();
            prop_assert_eq!(&back, &f);
            for x in [1u64, 2, 7, 100] {
                prop_assert_eq!(back.eval_f_u64(x).unwrap(), f.eval_f_u64(x).unwrap());
            }
        }
    }

    #[test]
    fn psi_below_and_increasing(nu in 1usize..12, x in 1u64..500) {
        let c = spectrum(nu).unwrap().pop().unwrap();
        prop_assert!(psi_below_mu_over_x2(&c.mu, &BigInt::from(x)).unwrap());
        // x²ψ(x) increases towards μ.
        let w = Rational::new(BigInt::one(), BigInt::one() << 80);
        let scaled = |x: u64| eval_psi(&c.mu, &BigInt::from(x), &w).unwrap().mul_rational(&int(x * x));
        let here: RationalInterval = scaled(x);
        let next = scaled(x + 1);
        prop_assert!(here.hi() < next.lo());
        prop_assert!(c.mu.cmp_rational(next.hi()) == std::cmp::Ordering::Greater);
    }
}

#[test]
fn exp_gap_closed_form() {
    for (base, top) in [(2u32, 8u32), (3, 5)] {
        let f = ApproxFunction::exp(base.into()).unwrap();
        for x in 1..=top {
            let g = f.eval_gap_u64(x as u64).unwrap().g;
            let bx = BigInt::from(base).pow(x);
            let arg: BigInt = &bx * BigInt::from(x * x) + 2;
            let exponent: u32 = (&arg).try_into().unwrap();
            let want = Rational::one()
                / int(&bx * &bx * BigInt::from(base).pow(exponent) * BigInt::from(x * x));
            assert_eq!(g, want, "base {base}, x = {x}");
        }
    }
}

#[test]
fn range_and_monotonicity_violations() {
    let f = parse_function("expr 2/x").unwrap();
    assert!(matches!(f.eval_f_u64(1), Err(Error::RangeViolation { .. })));
    assert!(f.eval_f_u64(2).is_ok());

    let f = parse_function("expr 1/((x-5)^2+2) decreasing").unwrap();
    assert!(f.eval_f_u64(3).is_ok());
    assert!(matches!(
        f.eval_f_u64(5),
        Err(Error::MonotonicityViolation { .. })
    ));
    // Without the flag nothing is checked.
    let f = parse_function("expr 1/((x-5)^2+2)").unwrap();
    assert!(f.eval_f_u64(3).is_ok() && f.eval_f_u64(5).is_ok());

    assert!(
        ApproxFunction::table(vec![(1.into(), ratio(1, 3)), (5.into(), ratio(1, 2))], true)
            .is_err()
    );
    assert!(ApproxFunction::constant(ratio(3, 2)).is_err());
}

#[test]
fn malformed_dsl_positions() {
    for (text, offset) in [
        ("const 1/", 8),
        ("pow x", 4),
        ("table 1:1/2,3", 12),
        ("sin 2", 0),
        ("", 0),
    ] {
        match parse_function(text) {
            Err(e) => assert_eq!(e.offset, offset, "{text:?}: {}", e.message),
            Ok(f) => panic!("{text:?} parsed as {f}"),
        }
    }
}
