use std::fmt;

use num_bigint::BigInt;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("mixed-field surd arithmetic: sqrt {left} and sqrt {right}")]
    MixedField { left: BigInt, right: BigInt },

    #[error("division by zero")]
    DivisionByZero,

    #[error("square-free reduction of {value} exceeded the factoring budget")]
    FactoringBudget { value: BigInt },

    /// Interval refinement hit its cap without separating the operands.
    #[error("undecided after {refinements} refinements: {what}")]
    Undecided { what: String, refinements: usize },

    /// Interval operands overlap at the current precision. Internal: callers
    /// retry at a higher precision and only surface [`Error::Undecided`].
    #[error("ambiguous at current precision")]
    Ambiguous,

    #[error("finite continued fraction has {len} quotients, index {index} requested")]
    FiniteExpansionExhausted { index: usize, len: usize },

    #[error("f({x}) = {value} lies outside (0, 1]")]
    RangeViolation { x: BigInt, value: String },

    #[error("f declared decreasing but f({lo}) = {lo_value} < f({hi}) = {hi_value}")]
    MonotonicityViolation {
        lo: BigInt,
        lo_value: String,
        hi: BigInt,
        hi_value: String,
    },

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("two Markoff triples share the maximum {m}: {first} and {second}")]
    UnicityViolation {
        m: BigInt,
        first: String,
        second: String,
    },

    #[error("gamma = {gamma} is not strictly between mu_{} and mu_{nu}", nu + 1)]
    GammaOutOfRange { gamma: String, nu: usize },

    #[error("{0}")]
    Parse(ParseError),

    #[error("precondition failed: {0}")]
    Precondition(String),

    /// A checked identity or invariant failed. Never expected.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A parse failure with the byte offset it points at.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub input: String,
    pub offset: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(input: &str, offset: usize, message: impl Into<String>) -> Self {
        ParseError {
            input: input.to_string(),
            offset: offset.min(input.len()),
            message: message.into(),
        }
    }

    /// Two-line rendering: the input, then a caret under the offending column.
    pub fn caret(&self) -> String {
        let col = self.input[..self.offset].chars().count();
        format!("{}\n{}^ {}", self.input, " ".repeat(col), self.message)
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parse error at offset {} in {:?}: {}",
            self.offset, self.input, self.message
        )
    }
}

impl From<ParseError> for Error {
    fn from(e: ParseError) -> Self {
        Error::Parse(e)
    }
}
