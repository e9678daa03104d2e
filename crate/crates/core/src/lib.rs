//! Exact continued-fraction machinery and an effective isolation verifier
//! for rational approximation `|α − p/q| < f(q)/q²`.
//!
//! All verdicts come from exact integer, rational and quadratic-surd
//! arithmetic, or from rational interval enclosures refined until they
//! separate. Floating point is never used in a decision.

pub mod contfrac;
pub mod error;
pub mod exact;
pub mod funcspec;
pub mod isolation;
pub mod markoff;

pub use error::{Error, ParseError, Result};
