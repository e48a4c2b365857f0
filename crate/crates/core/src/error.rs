use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    CompositeModulus(u64),
    #[error("modulus {0} is out of range (need 3 <= p < 2^31)")]
    ModulusTooLarge(u64),
    #[error("{d} does not divide p - 1 = {order}")]
    NotADivisor { d: u64, order: u64 },
    #[error("power map x -> x^{n} is not uniform on a source of size {source_size}")]
    NonUniformImage { n: u64, source_size: u64 },
    #[error("{quantity}: enumeration cost {cost} exceeds budget {budget}")]
    BudgetExceeded {
        quantity: &'static str,
        cost: u128,
        budget: u128,
    },
    #[error("{0} must be a nonzero residue")]
    NonzeroRequired(&'static str),
    #[error("ordering violated: {0}")]
    OrderingViolated(String),
    #[error("residue {value} is not reduced modulo {p}")]
    ResidueOutOfRange { value: u64, p: u64 },
    #[error("set is not strictly increasing at position {0}")]
    UnsortedSet(usize),
    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),
    #[error("character index {j} out of range for p - 1 = {order}")]
    CharacterOutOfRange { j: u64, order: u64 },
    #[error("weight shape or magnitude invalid: {0}")]
    InvalidWeights(String),
    #[error("arithmetic invariant violated: {0}")]
    Invariant(String),
}
