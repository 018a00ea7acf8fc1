use thiserror::Error;

use crate::weil::FailureReason;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{value} is too large (bound {bound})")]
    TooLarge { value: String, bound: String },
    #[error("{what} exceeds the enumeration cap of {cap} field elements")]
    CapExceeded { what: String, cap: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("elements belong to different fields")]
    FieldMismatch,
    #[error("leading coefficient of the quadratic is zero")]
    DegenerateLeadingCoefficient,
    #[error("curve is singular (discriminant is zero)")]
    SingularCurve,
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("no extension of degree <= {r_max} makes E[{n}] rational within the cap of {cap}")]
    ExtensionBoundExceeded { n: u64, r_max: usize, cap: u64 },
    #[error("{0} equals the characteristic")]
    EqualsCharacteristic(u64),
    #[error("{n} is not coprime to the characteristic {p}")]
    NotCoprimeToCharacteristic { n: u64, p: u64 },
    #[error("trace {trace} violates the Hasse bound for q = {q}")]
    HasseViolation { trace: String, q: String },
    #[error("Weil bound violated: {0}")]
    WeilBoundViolation(String),
    #[error("second elementary symmetric function is not an integer")]
    NonIntegralSymmetricFunction,
    #[error("polynomial does not satisfy the functional equation c_i = q^(g-i) c_(2g-i)")]
    FunctionalEquationViolation,
    #[error("not supersingular: {0}")]
    NotSupersingular(FailureReason),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Resource-limit errors, as opposed to bad input or negative verdicts.
    pub fn is_cap_error(&self) -> bool {
        matches!(self, Error::CapExceeded { .. } | Error::ExtensionBoundExceeded { .. })
    }
}
