use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("insufficient p-adic precision: {0}")]
    InsufficientPrecision(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("p-adic operands over different primes ({0} vs {1})")]
    PrimeMismatch(u64, u64),
    #[error("{0} is not a prime")]
    InvalidPrime(u64),
    #[error("{0} is not a prime power")]
    InvalidPrimePower(u64),
    #[error("p^N does not fit the residue modulus (p = {p}, N = {precision})")]
    PrecisionTooLarge { p: u64, precision: u32 },
    #[error("residue {0} is divisible by p")]
    ZeroResidue(u64),
    #[error("scalar kind does not match {0}")]
    KindMismatch(String),
    #[error("matrix is not in {0}")]
    NotInGroup(String),
    #[error("membership in {0} is indeterminate at the working precision")]
    Indeterminate(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is singular")]
    Singular,
    #[error("characteristic 2 is excluded for this construction")]
    CharacteristicTwo,
    #[error("the trivial element has no witness")]
    TrivialElement,
    #[error("{0} is complete; it has no proper dense subgroup to test")]
    CompleteField(String),
    #[error("{0} is not complete")]
    NotComplete(String),
    #[error("A^n = I; the construction needs an element that is not a root of I")]
    IdentityPower,
    #[error("witness rejected: {0}")]
    WitnessRejected(String),
    #[error("Hensel oracle did not stabilize by precision {0}")]
    OracleDidNotStabilize(u32),
    #[error("invalid subfield: {0}")]
    InvalidSubfield(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
