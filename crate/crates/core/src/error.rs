use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("p must be prime (got {0})")]
    NotPrime(u32),
    #[error("extension degree c must be positive")]
    ZeroDegree,
    #[error("q = {0} is too large for table-driven GF(q) arithmetic")]
    FieldTooLarge(u64),
    #[error("c = {0} > 1 requires a modulus polynomial")]
    MissingModulus(u32),
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("modulus polynomial is reducible over Z/{0}")]
    ReducibleModulus(u32),
    #[error("division by zero in GF(q)")]
    DivisionByZero,
    #[error("integer {n} is divisible by p = {p} and does not act as a unit")]
    NonUnitScalar { n: u64, p: u32 },
    #[error("cannot refine from resolution {from} down to {to}")]
    ResolutionError { from: i32, to: i32 },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),
    #[error("refinement mask is not normalized: m0(0) = {0}")]
    NotNormalized(f64),
    #[error("label {label} out of range 0..{bound}")]
    IndexError { label: u64, bound: u64 },
    #[error("j_max = {j_max} is below the test-function resolution {resolution}")]
    TruncationError { j_max: u32, resolution: i32 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("line {line}: {msg}")]
    Data { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
