use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    InvalidDegree,
    #[error("modulus is reducible over F_p")]
    ReducibleModulus,
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("field of size {q} exceeds the configured cap {cap}")]
    FieldTooLarge { q: u64, cap: u64 },
    #[error("element does not have multiplicative order q-1")]
    InvalidGenerator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("discrete logarithm of zero")]
    LogOfZero,
    #[error("argument must be nonzero")]
    ZeroArgument,
    #[error("invalid field specification `{0}`")]
    FieldSpec(String),

    #[error("additive character shift must be a nonzero residue mod {p}")]
    InvalidShift { p: u32 },

    #[error("integer overflow while reducing an integer matrix")]
    EntryOverflow,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("variable x{index} out of range (nvars = {nvars}) at position {position}")]
    VariableOutOfRange {
        index: usize,
        nvars: usize,
        position: usize,
    },
    #[error("negative exponent where a polynomial is required")]
    NegativeExponent,
    #[error("operation requires a nonzero polynomial")]
    EmptyPolynomial,
    #[error("input polynomial #{0} is not homogeneous")]
    NonHomogeneousInput(usize),
    #[error("invalid variety description: {0}")]
    VarietyFormat(String),
    #[error("unknown builtin variety `{0}`")]
    UnknownVariety(String),

    #[error("result {value} is not within tolerance of an integer (residual {residual:e})")]
    IntegralityViolation { value: f64, residual: f64 },
    #[error("stratum count {count} is not divisible by q-1 = {modulus}")]
    DivisibilityViolation { count: u64, modulus: u64 },
    #[error("kernel of size {size} exceeds the cap {cap}")]
    KernelTooLarge { size: String, cap: u64 },
    #[error("enumeration of {size} terms exceeds the cap {cap}")]
    EnumerationTooLarge { size: String, cap: u64 },
    #[error("count {0} exceeds the exactly representable range")]
    CountTooLarge(String),
}
