use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("table shape mismatch: {0}")]
    Shape(String),
    #[error("index {index} out of range (size {size})")]
    OutOfRange { index: usize, size: usize },
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("identity law fails at element {0}")]
    NotIdentity(usize),
    #[error("associativity fails at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("act identity axiom fails at element {0}")]
    IdentityAxiom(usize),
    #[error("act associativity axiom fails at ({0}, {1}, {2})")]
    AssociativityAxiom(usize, usize, usize),
    #[error("acts must have at least one element")]
    EmptyAct,
    #[error("seed set is empty")]
    EmptySeed,
    #[error("subset is not closed under the action: {elem} * {scalar} leaves it")]
    NotClosed { elem: usize, scalar: usize },
    #[error("map is not a homomorphism at ({elem}, {scalar})")]
    NotHom { elem: usize, scalar: usize },
    #[error("objects are defined over different monoids")]
    MixedMonoids,
    #[error("materialized size {size} exceeds cap {cap}")]
    TooLarge { size: u128, cap: usize },
    #[error("{what} exceeds cap {cap}")]
    CapExceeded { what: String, cap: usize },
    #[error("constant embedding is not a homomorphism into the target")]
    BadEmbedding,
    #[error("equation system is malformed: {0}")]
    BadSystem(String),
    #[error("target act is not a member of the class")]
    TargetNotInClass,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("iteration limit {0} exceeded")]
    IterationLimit(usize),
    #[error("syntax error on line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("unknown reference `{name}` on line {line}")]
    UnknownReference { name: String, line: usize },
    #[error("in block `{block}`: {source}")]
    Validation {
        block: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// True for errors caused by a size or search budget rather than bad input.
    pub fn is_resource_limit(&self) -> bool {
        match self {
            Error::TooLarge { .. } | Error::CapExceeded { .. } => true,
            Error::Validation { source, .. } => source.is_resource_limit(),
            _ => false,
        }
    }
}
