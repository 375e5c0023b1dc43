use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Operands that do not fit together: mismatched variable tables, unknown
    /// variables, arity mismatches.
    #[error("structural error: {0}")]
    Structural(String),

    /// Inputs outside an operation's mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Input rejected by validation (non-symmetric matrix, non-monic polynomial, ...).
    #[error("validation error: {0}")]
    Validation(String),

    /// A configured size cap was exceeded.
    #[error("resource error: {what} is {value}, cap is {cap}")]
    Resource {
        what: String,
        value: usize,
        cap: usize,
    },

    /// The two matrices share an eigenvalue; `gcd` is the common factor of the
    /// characteristic polynomials.
    #[error("matrices are not generic: characteristic polynomials share the factor {gcd}")]
    Genericity { gcd: String, gcd_degree: usize },

    /// An internal consistency check failed. Not reachable for valid inputs.
    #[error("internal assertion failed: {0}")]
    Assertion(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
