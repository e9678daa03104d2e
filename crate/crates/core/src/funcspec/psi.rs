//! `ψ(x) = 2μ/((1 + √(1 + 4μ²/x²))·x²)` by rational enclosures.
//!
//! `ψ` mixes the field of `μ` with the square root of `1 + 4μ²/x²`, so it is
//! evaluated on intervals; precision doubles until the request is met.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::exact::{QuadraticSurd, Rational, RationalInterval};

/// Precision doublings before an evaluation gives up.
pub const PSI_REFINEMENT_CAP: usize = 256;

fn psi_at_precision(
    mu: &QuadraticSurd,
    mu_sq: &QuadraticSurd,
    x: &BigInt,
    eps: &Rational,
) -> Result<RationalInterval> {
    let x2 = Rational::from_integer(x * x);
    let m = mu.to_interval(eps);
    let m2 = mu_sq.to_interval(eps);
    let s = m2
        .mul_rational(&(Rational::from_integer(4.into()) / &x2))
        .add_rational(&Rational::one());
    let r = s.sqrt(eps);
    let den = r.add_rational(&Rational::one()).mul_rational(&x2);
    m.mul_rational(&Rational::from_integer(2.into())).div(&den)
}

fn check_mu(mu: &QuadraticSurd, x: &BigInt) -> Result<QuadraticSurd> {
    if mu.signum() != Ordering::Greater || mu.cmp_rational(&Rational::one()) != Ordering::Less {
        return Err(Error::Precondition(format!("mu = {mu} is not in (0, 1)")));
    }
    if !x.is_positive() {
        return Err(Error::Precondition(format!("psi evaluated at x = {x} < 1")));
    }
    mu.checked_mul(mu)
}

/// Enclosure of `ψ(x)` of width at most `width`.
pub fn eval_psi(mu: &QuadraticSurd, x: &BigInt, width: &Rational) -> Result<RationalInterval> {
    if !width.is_positive() {
        return Err(Error::Precondition("width must be positive".into()));
    }
    let mu_sq = check_mu(mu, x)?;
    let mut eps = width / Rational::from_integer(BigInt::from(16));
    for _ in 0..PSI_REFINEMENT_CAP {
        let iv = psi_at_precision(mu, &mu_sq, x, &eps)?;
        if iv.width() <= *width {
            return Ok(iv);
        }
        eps /= Rational::from_integer(BigInt::from(2));
    }
    Err(Error::Undecided {
        what: format!("psi({x}) to width {width}"),
        refinements: PSI_REFINEMENT_CAP,
    })
}

/// Certifies `ψ(x) < μ/x²`; `Ok(false)` would mean the enclosures proved
/// the opposite.
pub fn psi_below_mu_over_x2(mu: &QuadraticSurd, x: &BigInt) -> Result<bool> {
    let mu_sq = check_mu(mu, x)?;
    let x2 = Rational::from_integer(x * x);
    let mut eps = Rational::new(BigInt::one(), BigInt::from(1u64 << 20));
    for _ in 0..PSI_REFINEMENT_CAP {
        let psi = psi_at_precision(mu, &mu_sq, x, &eps)?;
        let bound = mu.to_interval(&eps).mul_rational(&x2.recip());
        match psi.cmp_interval(&bound) {
            Some(Ordering::Less) => return Ok(true),
            Some(_) => return Ok(false),
            None => eps = &eps * &eps,
        }
    }
    Err(Error::Undecided {
        what: format!("psi({x}) < mu/x^2"),
        refinements: PSI_REFINEMENT_CAP,
    })
}
