//! Square-free decomposition `n = s² · d` with `d` square-free.
//!
//! Trial division up to a configurable bound, then Miller–Rabin and
//! Pollard–Brent on whatever cofactor is left. A cofactor that cannot be
//! split inside the rho budget is an error, never silently left unreduced.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub const DEFAULT_TRIAL_BOUND: u64 = 1_000_000;
pub const DEFAULT_RHO_ITERATIONS: u64 = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SquareFreeReducer {
    pub trial_bound: u64,
    pub rho_iterations: u64,
}

impl Default for SquareFreeReducer {
    fn default() -> Self {
        SquareFreeReducer {
            trial_bound: DEFAULT_TRIAL_BOUND,
            rho_iterations: DEFAULT_RHO_ITERATIONS,
        }
    }
}

/// Result of a decomposition: `value = root² · core`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareFreeSplit {
    pub root: BigUint,
    pub core: BigUint,
}

impl SquareFreeReducer {
    pub fn split(&self, n: &BigUint) -> Result<SquareFreeSplit> {
        if n.is_zero() {
            return Ok(SquareFreeSplit {
                root: BigUint::one(),
                core: BigUint::zero(),
            });
        }
        let mut root = BigUint::one();
        let mut core = BigUint::one();
        let (rest, last_trial) = match n.to_u64() {
            Some(small) => {
                let (r, c, rest, last) = trial_u64(small, self.trial_bound);
                root = BigUint::from(r);
                core = BigUint::from(c);
                (BigUint::from(rest), last)
            }
            None => trial_big(n, self.trial_bound, &mut root, &mut core),
        };
        if rest.is_one() {
            return Ok(SquareFreeSplit { root, core });
        }
        // Every prime factor of `rest` exceeds `last_trial`.
        let lt = BigUint::from(last_trial);
        if &lt * &lt >= rest {
            core *= rest;
            return Ok(SquareFreeSplit { root, core });
        }
        let mut primes = Vec::new();
        // Below floor³ a non-square `rest` has at most two distinct primes.
        let s = rest.sqrt();
        if &s * &s != rest && &lt * &lt * &lt >= rest {
            core *= rest;
            return Ok(SquareFreeSplit { root, core });
        }
        self.factor_into(&rest, &lt, &mut primes, n)?;
        primes.sort();
        let mut i = 0;
        while i < primes.len() {
            let mut j = i;
            while j < primes.len() && primes[j] == primes[i] {
                j += 1;
            }
            let e = (j - i) as u32;
            root *= primes[i].pow(e / 2);
            if e % 2 == 1 {
                core *= &primes[i];
            }
            i = j;
        }
        Ok(SquareFreeSplit { root, core })
    }

    /// Full factorization of `m`, whose prime factors all exceed `floor`.
    fn factor_into(
        &self,
        m: &BigUint,
        floor: &BigUint,
        out: &mut Vec<BigUint>,
        original: &BigUint,
    ) -> Result<()> {
        if m.is_one() {
            return Ok(());
        }
        if floor * floor >= *m || is_probable_prime(m) {
            out.push(m.clone());
            return Ok(());
        }
        let s = m.sqrt();
        if &s * &s == *m {
            self.factor_into(&s, floor, out, original)?;
            self.factor_into(&s, floor, out, original)?;
            return Ok(());
        }
        let d = pollard_brent(m, self.rho_iterations).ok_or_else(|| Error::FactoringBudget {
            value: BigInt::from(original.clone()),
        })?;
        self.factor_into(&d, floor, out, original)?;
        self.factor_into(&(m / &d), floor, out, original)
    }
}

/// Returns (root, core, rest, last_divisor_tried).
fn trial_u64(mut n: u64, bound: u64) -> (u64, u64, u64, u64) {
    let mut root = 1u64;
    let mut core = 1u64;
    let mut p = 2u64;
    let mut last = 1u64;
    while p <= bound && (p as u128) * (p as u128) <= n as u128 {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            root *= p.pow(e / 2);
            if e % 2 == 1 {
                core *= p;
            }
        }
        last = p;
        p += if p == 2 { 1 } else { 2 };
    }
    if (p as u128) * (p as u128) > n as u128 && n > 1 {
        // n is 1 or prime
        core *= n;
        return (root, core, 1, last);
    }
    (root, core, n, last)
}

fn trial_big(n: &BigUint, bound: u64, root: &mut BigUint, core: &mut BigUint) -> (BigUint, u64) {
    let mut n = n.clone();
    let mut p = 2u64;
    let mut last = 1u64;
    while p <= bound {
        let pb = BigUint::from(p);
        if &pb * &pb > n {
            break;
        }
        let mut e = 0u32;
        loop {
            let (q, r) = n.div_rem(&pb);
            if !r.is_zero() {
                break;
            }
            n = q;
            e += 1;
        }
        if e > 0 {
            *root *= pb.pow(e / 2);
            if e % 2 == 1 {
                *core *= &pb;
            }
        }
        last = p;
        p += if p == 2 { 1 } else { 2 };
    }
    (n, last)
}

const MR_BASES: [u32; 20] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
];

/// Miller–Rabin with the first twenty prime bases. Deterministic below 3.3·10²⁴.
pub fn is_probable_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    for &b in &MR_BASES {
        let b = BigUint::from(b);
        if *n == b {
            return true;
        }
        if (n % &b).is_zero() {
            return false;
        }
    }
    let n1 = n - 1u32;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    'bases: for &b in &MR_BASES {
        let mut x = BigUint::from(b).modpow(&d, n);
        if x.is_one() || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == n1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Brent's variant of Pollard rho. Returns a nontrivial factor of the odd
/// composite `n`, or `None` when the iteration budget runs out.
fn pollard_brent(n: &BigUint, budget: u64) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    let one = BigUint::one();
    let mut spent = 0u64;
    for c in 1u32..64 {
        let c = BigUint::from(c);
        let step = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut x = y.clone();
        let mut ys = y.clone();
        let mut q = one.clone();
        let mut g = one.clone();
        let mut r = 1u64;
        const BATCH: u64 = 128;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = step(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..BATCH.min(r - k) {
                    y = step(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = q * diff % n;
                }
                g = q.gcd(n);
                k += BATCH;
                spent += BATCH;
            }
            r *= 2;
            if spent > budget {
                return None;
            }
        }
        if g == *n {
            // Batch overshot; replay from the last checkpoint one step at a time.
            g = one.clone();
            while g.is_one() && spent <= budget {
                ys = step(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                spent += 1;
            }
        }
        if !g.is_one() && g != *n {
            return Some(g);
        }
        if spent > budget {
            return None;
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn split(n: u128) -> (u128, u128) {
        let s = SquareFreeReducer::default()
            .split(&BigUint::from(n))
            .unwrap();
        (s.root.to_u128().unwrap(), s.core.to_u128().unwrap())
    }

    #[test]
    fn small_values() {
        assert_eq!(split(1), (1, 1));
        assert_eq!(split(2), (1, 2));
        assert_eq!(split(8), (2, 2));
        assert_eq!(split(12), (2, 3));
        assert_eq!(split(32), (4, 2));
        assert_eq!(split(221), (1, 221));
        assert_eq!(split(9 * 25 - 4), (1, 221));
        assert_eq!(split(1_000_000), (1000, 1));
    }

    #[test]
    fn large_prime_squares_need_rho() {
        // Both primes exceed the trial bound.
        let p: u128 = 1_000_003;
        let q: u128 = 1_000_033;
        assert_eq!(split(p * p * q), (p, q));
        assert_eq!(split(p * q), (1, p * q));
        let r: u128 = 1_000_037;
        assert_eq!(split(p * q * r * r), (r, p * q));
    }

    #[test]
    fn small_trial_bound_exercises_rho() {
        let red = SquareFreeReducer {
            trial_bound: 10,
            rho_iterations: DEFAULT_RHO_ITERATIONS,
        };
        let n = BigUint::from(101u64 * 101 * 103 * 107 * 107 * 109u64);
        let s = red.split(&n).unwrap();
        assert_eq!(s.root, BigUint::from(101u32 * 107));
        assert_eq!(s.core, BigUint::from(103u32 * 109));
    }

    #[test]
    fn primality() {
        assert!(is_probable_prime(&BigUint::from(1_000_003u32)));
        assert!(!is_probable_prime(&BigUint::from(561u32)));
        assert!(is_probable_prime(&BigUint::from(2u32)));
        assert!(!is_probable_prime(&BigUint::from(1u32)));
    }
}
