use thiserror::Error;

/// Errors raised by the workbench.
///
/// Domain errors (indeterminacy, contraction, hypothesis violations) are kept
/// apart from input errors so the command-line front end can map them onto
/// distinct exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("total degree {degree} exceeds the configured cap {cap}")]
    DegreeCap { degree: u64, cap: u32 },

    #[error("division by the zero polynomial")]
    ZeroDenominator,

    #[error("expression is a rational function, expected a polynomial")]
    NotPolynomial,

    #[error("the supplied inverse does not invert the map")]
    InverseMismatch,

    #[error("map has no inverse attached")]
    MissingInverse,

    #[error("the curve is contracted by the map")]
    Contracted,

    #[error("point {0} lies in the indeterminacy locus")]
    Indeterminate(String),

    #[error("point {0} is outside the chart domain")]
    ChartDomain(String),

    #[error("point {0} lies in the excluded locus of the quotient")]
    ExcludedLocus(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("zero has no finite valuation")]
    ZeroValue,

    #[error("resource guard: {0}")]
    Guard(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("map is not of triangular form (ax+b, A(x)y+B(x)) with deg A >= 1")]
    NotTriangular,

    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    /// True for errors caused by the mathematics of the input rather than
    /// by malformed input.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::Contracted
                | Error::Indeterminate(_)
                | Error::ChartDomain(_)
                | Error::InverseMismatch
                | Error::DegreeCap { .. }
                | Error::Guard(_)
                | Error::Precondition(_)
                | Error::NotTriangular
                | Error::ZeroValue
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
