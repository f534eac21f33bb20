use thiserror::Error;

use crate::scalars::FieldId;

/// Crate-wide error type. Every fallible operation funnels into one of these
/// variants so the CLI can map them onto exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different fields: {0} vs {1}")]
    MixedFields(FieldId, FieldId),
    #[error("zero input where a nonzero value is required")]
    ZeroInput,
    #[error("zero scalar not allowed here")]
    ZeroScalar,
    #[error("square-free extraction exceeded the trial-division bound on {0}")]
    FactorizationBoundExceeded(String),
    #[error("{0} is not an odd prime below 2^31")]
    InvalidPrime(u64),
    #[error("polynomial is not weighted-homogeneous")]
    NotHomogeneous,
    #[error("the zero polynomial has no degree")]
    ZeroPolynomial,
    #[error("characteristic {p} divides {quantity}")]
    BadCharacteristic { p: u32, quantity: String },
    #[error("Jacobian ring is not finite-dimensional; the hypersurface is singular")]
    NotFiniteDimensional,
    #[error("hypersurface is not smooth: {0}")]
    NotSmooth(String),
    #[error("symmetric form is degenerate")]
    DegenerateForm,
    #[error("fields of characteristic 2 are not supported")]
    CharacteristicTwo,
    #[error("socle generator reduced to zero")]
    ZeroSocleGenerator,
    #[error("operation not supported over {0}")]
    UnsupportedField(FieldId),
    #[error("zero entry in a GW class")]
    ZeroEntry,
    #[error("invalid weights: {0}")]
    WeightsInvalid(String),
    #[error("primitive form of odd-dimensional hypersurface is not hyperbolic: {0}")]
    OddRankPrimitive(String),
    #[error("generic fiber is not smooth over the function field")]
    NotSmoothGenericFiber,
    #[error("syntax error at byte {0}")]
    SyntaxError(usize),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
