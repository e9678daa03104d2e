use std::collections::BTreeSet;

use isoverify::exact::rational::ratio;
use isoverify::markoff::{
    markoff_numbers, markoff_numbers_with_triples, markoff_triples, spectrum,
};
use num_bigint::BigInt;

/// Every solution `(a, b, c)` with `a ≥ b ≥ c` and `a ≤ bound`, from the
/// quadratic `a² − 3bc·a + b² + c² = 0` in the largest coordinate.
fn brute_force(bound: u64) -> BTreeSet<(u64, u64, u64)> {
    let mut out = BTreeSet::new();
    for b in 1..=bound as u128 {
        for c in 1..=b {
            let disc = 9 * b * b * c * c - 4 * (b * b + c * c);
            let r = (disc as f64).sqrt() as u128;
            for s in r.saturating_sub(2)..=r + 2 {
                if s * s != disc {
                    continue;
                }
                for twice in [3 * b * c + s, 3 * b * c - s] {
                    let a = twice / 2;
                    if twice % 2 == 0 && a >= b && a <= bound as u128 {
                        out.insert((a as u64, b as u64, c as u64));
                    }
                }
            }
        }
    }
    out
}

#[test]
fn triples_match_brute_force_to_ten_thousand() {
    let bound = 10_000;
    let brute = brute_force(bound);
    let tree: BTreeSet<(u64, u64, u64)> = markoff_triples(&BigInt::from(bound))
        .into_iter()
        .map(|t| {
            assert!(t.is_solution());
            let u = |x: &BigInt| u64::try_from(x).unwrap();
            (u(&t.m), u(&t.m1), u(&t.m2))
        })
        .collect();
    assert_eq!(tree, brute);

    let maxima: Vec<u64> = brute
        .iter()
        .map(|t| t.0)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    // Unicity holds this far: one triple per maximum.
    assert_eq!(maxima.len(), brute.len());
    let numbers = markoff_numbers(maxima.len()).unwrap();
    assert_eq!(
        numbers,
        maxima.iter().map(|&m| BigInt::from(m)).collect::<Vec<_>>()
    );
}

#[test]
fn numbers_with_triples_are_consistent() {
    let triples = markoff_numbers_with_triples(40).unwrap();
    for w in triples.windows(2) {
        assert!(w[0].m < w[1].m);
    }
    for t in &triples {
        assert!(t.is_solution());
        assert!(t.m >= t.m1 && t.m1 >= t.m2);
    }
}

#[test]
fn spectrum_is_decreasing_inside_hurwitz_window() {
    let s = spectrum(50).unwrap();
    let (fifth, ninth) = (ratio(1, 5), ratio(1, 9));
    assert_eq!(s[0].mu_squared(), fifth);
    for c in &s {
        let m2 = c.mu_squared();
        assert!(m2 > ninth && m2 <= fifth, "nu = {}", c.nu);
        // μ² from the surd agrees with the closed form.
        assert_eq!(c.mu.checked_mul(&c.mu).unwrap().to_rational().unwrap(), m2);
    }
    for w in s.windows(2) {
        assert!(w[1].mu_squared() < w[0].mu_squared());
    }
}
