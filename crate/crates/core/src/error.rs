use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("mixed characteristic rings only support f = 1")]
    MixedNeedsPrimeField,
    #[error("bad modulus: {0}")]
    BadModulus(String),
    #[error("unsupported parameters: {0}")]
    Unsupported(String),
    #[error("element is not a unit")]
    NonUnit,
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("precision too low: {0}")]
    PrecisionTooLow(String),
    #[error("dimension {0} exceeds the supported bound")]
    DimensionTooLarge(usize),
    #[error("not found: {0}")]
    NotFound(String),
    #[error("element is not in the normalizer of the Iwahori order")]
    NotInNormalizer,
    #[error("stratum is equivalent to a stratum with scalar beta")]
    ScalarEquivalent,
    #[error("field data inconclusive")]
    InconclusiveFieldData,
    #[error("element is not in the required subgroup")]
    NotInSubgroup,
    #[error("stratum is not simple")]
    NotSimple,
    #[error("matrix is not regular modulo p")]
    NotRegular,
    #[error("size guard exceeded: {size} > {guard}")]
    SizeGuard { size: u128, guard: u64 },
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub fn guard(size: u128, guard: u64) -> Result<()> {
    if size > guard as u128 {
        Err(Error::SizeGuard { size, guard })
    } else {
        Ok(())
    }
}
