//! Markoff triples `m² + m1² + m2² = 3·m·m1·m2`, the ordered Markoff
//! numbers `m(ν)` and `μ_ν = m/√(9m² − 4)`.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{QuadraticSurd, Rational};

/// A triple ordered as `m ≥ m1 ≥ m2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MarkoffTriple {
    pub m: BigInt,
    pub m1: BigInt,
    pub m2: BigInt,
}

impl MarkoffTriple {
    pub fn new(a: BigInt, b: BigInt, c: BigInt) -> Self {
        let mut v = [a, b, c];
        v.sort_unstable_by(|x, y| y.cmp(x));
        let [m, m1, m2] = v;
        MarkoffTriple { m, m1, m2 }
    }

    pub fn root() -> Self {
        Self::new(BigInt::one(), BigInt::one(), BigInt::one())
    }

    pub fn is_solution(&self) -> bool {
        let (m, a, b) = (&self.m, &self.m1, &self.m2);
        m * m + a * a + b * b == BigInt::from(3) * m * a * b
    }

    /// The three Vieta neighbours, each coordinate replaced by `3yz − x`.
    pub fn neighbours(&self) -> [MarkoffTriple; 3] {
        let (m, a, b) = (&self.m, &self.m1, &self.m2);
        let three = BigInt::from(3);
        [
            Self::new(&three * a * b - m, a.clone(), b.clone()),
            Self::new(m.clone(), &three * m * b - a, b.clone()),
            Self::new(m.clone(), a.clone(), &three * m * a - b),
        ]
    }
}

impl fmt::Display for MarkoffTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.m, self.m1, self.m2)
    }
}

/// All triples with `m ≤ bound`, sorted by `(m, m1, m2)`.
///
/// Breadth-first from `(1,1,1)`. Every triple other than the root has a
/// neighbour with a smaller maximum, so pruning at `bound` loses nothing.
pub fn markoff_triples(bound: &BigInt) -> Vec<MarkoffTriple> {
    let mut out = Vec::new();
    if bound < &BigInt::one() {
        return out;
    }
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(MarkoffTriple::root());
    queue.push_back(MarkoffTriple::root());
    while let Some(t) = queue.pop_front() {
        for n in t.neighbours() {
            if n.m2 >= BigInt::one() && &n.m <= bound && !seen.contains(&n) {
                seen.insert(n.clone());
                queue.push_back(n);
            }
        }
        out.push(t);
    }
    out.sort();
    out
}

/// `m(1), …, m(count)` in increasing order.
///
/// Triples leave a min-heap in order of their maximum; two triples with the
/// same maximum raise [`Error::UnicityViolation`].
pub fn markoff_numbers(count: usize) -> Result<Vec<BigInt>> {
    Ok(markoff_numbers_with_triples(count)?
        .into_iter()
        .map(|t| t.m)
        .collect())
}

/// Like [`markoff_numbers`], keeping the triple behind each number.
pub fn markoff_numbers_with_triples(count: usize) -> Result<Vec<MarkoffTriple>> {
    let mut out: Vec<MarkoffTriple> = Vec::with_capacity(count);
    let mut seen = HashSet::new();
    let mut heap = BinaryHeap::new();
    seen.insert(MarkoffTriple::root());
    heap.push(Reverse(MarkoffTriple::root()));
    while let Some(Reverse(t)) = heap.pop() {
        if let Some(last) = out.last() {
            if last.m == t.m {
                return Err(Error::UnicityViolation {
                    m: t.m.clone(),
                    first: last.to_string(),
                    second: t.to_string(),
                });
            }
        }
        if out.len() == count {
            // Popped past the last requested maximum without a duplicate.
            break;
        }
        for n in t.neighbours() {
            if n.m > t.m && seen.insert(n.clone()) {
                heap.push(Reverse(n));
            }
        }
        out.push(t);
    }
    Ok(out)
}

/// `μ_ν = m(ν)/√(9m(ν)² − 4)` with its index and Markoff number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumConstant {
    pub nu: usize,
    pub m: BigInt,
    pub mu: QuadraticSurd,
}

impl SpectrumConstant {
    pub fn from_markoff(nu: usize, m: BigInt) -> Result<Self> {
        let d: BigInt = BigInt::from(9) * &m * &m - 4;
        // m/√D = m·√D/D
        let mu = QuadraticSurd::new(BigInt::zero(), m.clone(), d.clone(), d)?;
        Ok(SpectrumConstant { nu, m, mu })
    }

    /// `μ² = m²/(9m² − 4)`.
    pub fn mu_squared(&self) -> Rational {
        let m2 = &self.m * &self.m;
        Rational::new(m2.clone(), BigInt::from(9) * m2 - 4)
    }
}

pub fn mu(nu: usize) -> Result<SpectrumConstant> {
    if nu == 0 {
        return Err(Error::Precondition("nu starts at 1".into()));
    }
    let m = markoff_numbers(nu)?.pop().expect("nu >= 1");
    SpectrumConstant::from_markoff(nu, m)
}

/// `μ_1, …, μ_count`.
pub fn spectrum(count: usize) -> Result<Vec<SpectrumConstant>> {
    markoff_numbers(count)?
        .into_iter()
        .enumerate()
        .map(|(i, m)| SpectrumConstant::from_markoff(i + 1, m))
        .collect()
}
