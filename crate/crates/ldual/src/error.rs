use crate::liealg::Weight;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid Cartan data: {0}")]
    InvalidCartan(String),
    #[error("weight has {got} coordinates, expected {expected}")]
    Dimension { expected: usize, got: usize },
    #[error("root closure exceeded {0} roots; not of finite type")]
    NotFinite(usize),
    #[error("weight {0} is not dominant")]
    NotDominant(Weight),
    #[error("weight {0} is not in P'")]
    NotInPPrime(Weight),
    #[error("parity violation at node {node}, level {level}")]
    Parity { node: usize, level: i64 },
    #[error("exponent {exp} at node {node} is not divisible by {factor}")]
    Divisibility { node: usize, exp: i64, factor: i64 },
    #[error("crystal exceeded the element budget of {0}")]
    Budget(usize),
    #[error("expected exactly one source, found {0}")]
    Sources(usize),
    #[error("remainder has a maximal term at non-dominant weight {0}")]
    NonInvariant(Weight),
    #[error("element not found: {0}")]
    MissingElement(String),
    #[error("invalid tableau: {0}")]
    Tableau(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("half-integral q exponent cannot be specialized at a root of unity")]
    HalfIntegral,
    #[error("specialization gate failed: {0}")]
    Gate(String),
    #[error("compatibility failure at layer {layer}, weight {weight}")]
    CompatibilityFailure { layer: usize, weight: Weight },
    #[error("underdetermined choice at layer {layer}, weight {weight}")]
    UnderdeterminedChoice { layer: usize, weight: Weight },
    #[error("singular system: {0}")]
    Singular(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
