//! Exact arithmetic substrate: rationals, quadratic surds, rational
//! intervals, and the input reals built from them.

pub mod interval;
pub mod parse;
pub mod rational;
pub mod real;
pub mod squarefree;
pub mod surd;

pub use interval::RationalInterval;
pub use parse::{parse_real, parse_surd};
pub use rational::{rat_cmp, Rational};
pub use real::{Approximator, RealSpec, StreamRule};
pub use surd::QuadraticSurd;
