use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    CompositeCharacteristic(u64),
    #[error("extension degree must be at least 1")]
    ZeroExtensionDegree,
    #[error("field size {p}^{k} exceeds the configured bound {bound}")]
    FieldTooLarge { p: u64, k: u32, bound: u64 },
    #[error("invalid field modulus: {0}")]
    InvalidModulus(String),
    #[error("operands belong to different fields")]
    MixedFields,
    #[error("operands belong to different residue rings")]
    MixedRings,
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("gcd(0, 0) is undefined")]
    ZeroGcd,
    #[error("expected a polynomial of degree at least 1")]
    ConstantPolynomial,
    #[error("polynomial is not monic: {0}")]
    NotMonic(String),
    #[error("degree must be at least 1")]
    DegreeTooSmall,
    #[error("enumeration needs {required} items but the budget is {budget}")]
    BudgetExceeded { required: u128, budget: u64 },
    #[error("{0} is not coprime to the modulus")]
    NotCoprime(String),
    #[error("the principal character has no {0}")]
    PrincipalCharacter(&'static str),
    #[error("root finder did not converge (max residual {0:e})")]
    NoConvergence(f64),
    #[error("evaluation point coincides with a zero of L")]
    ZeroAtPoint,
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("missing L-data for character {0}")]
    MissingZeros(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("cache error: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, Error>;
