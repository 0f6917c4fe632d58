//! Error type shared across the library.

use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("polynomial is reducible over Q")]
    Reducible,
    #[error("polynomial is not monic with integer coefficients")]
    NotMonic,
    #[error("root selector contains no real root of the minimal polynomial")]
    SelectorEmpty,
    #[error("root selector contains more than one real root")]
    SelectorAmbiguous,
    #[error("polynomial has no real root")]
    NoRealRoot,
    #[error("elements belong to different number fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("bad prime {p}: {reason}")]
    BadPrime { p: u64, reason: String },
    #[error("denominator of a coordinate is divisible by {p}")]
    DenominatorAtPrime { p: u64 },
    #[error("matrix determinant is not 1")]
    DeterminantNotOne,
    #[error("matrix entry does not lie in the declared field")]
    EntryOutsideField,
    #[error("enumeration cap exceeded: {0}")]
    CapExceeded(String),
    #[error("trace field stabilisation failed: {0}")]
    StabilizationFailure(String),
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    #[error("representation is reducible (every commutator has trace 2)")]
    ReducibleRep,
    #[error("trace field condition does not hold; pass to the squares subgroup first")]
    TraceFieldCondition,
    #[error("generator cap exceeded: {0} generators, at most {1} supported")]
    GeneratorCap(usize, usize),
    #[error("unsupported base field for order arithmetic: {0}")]
    UnsupportedBaseField(String),
    #[error("order module did not stabilise within word length {0}")]
    OrderNotStabilized(usize),
    #[error("field is not totally real")]
    NotTotallyReal,
    #[error("no quotient candidate matches the given homomorphism")]
    NoQuotientCandidate,
    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
