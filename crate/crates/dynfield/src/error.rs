//! Error type shared across the crate.
//!
//! Two broad classes matter to callers: bad input (rejected values, parse
//! failures, domain violations) and blown budgets (computations that would
//! exceed the configured degree/step caps). The CLI maps them to exit codes
//! 2 and 3 respectively.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("characteristic must be an odd prime, got {0}")]
    EvenCharacteristic(u64),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("modulus must be a monic irreducible polynomial: {0}")]
    BadModulus(String),

    #[error("operands belong to different fields")]
    MismatchedFields,

    #[error("division by zero")]
    DivisionByZero,

    #[error("{0}")]
    Input(String),

    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("budget exceeded: {0}")]
    Budget(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn budget(msg: impl Into<String>) -> Self {
        Error::Budget(msg.into())
    }

    /// Process exit code for this error: 3 for blown budgets, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Budget(_) => 3,
            _ => 2,
        }
    }
}
