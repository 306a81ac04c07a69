use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("cap exceeded: {what} (limit {limit})")]
    CapExceeded { what: String, limit: usize },
    #[error("subset {0} is not closed under the operations")]
    NotClosed(String),
    #[error("not a congruence: {0}")]
    NotACongruence(String),
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("relation is not subdirect: {0}")]
    NotSubdirect(String),
    #[error("relation is not compatible: {0}")]
    NotCompatible(String),
    #[error("arity mismatch: {0}")]
    ArityMismatch(String),
    #[error("no cyclic term found: {0}")]
    NoCyclicWitness(String),
    #[error("s-edge {a} -> {b} disagrees with the semilattice criterion: {detail}")]
    SEdgeMismatch { a: usize, b: usize, detail: String },
    #[error("absorption methods disagree on {subset}: {detail}")]
    AbsorptionMismatch { subset: String, detail: String },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("search space {space} exceeds limit {limit}")]
    LimitExceeded { space: u128, limit: u128 },
    #[error("map for variable {var} is not a unary polynomial of its domain")]
    NotPolynomial { var: String },
    #[error("constraint on {scope:?} sends tuple {tuple:?} to {image:?}, outside the relation")]
    NotConsistent {
        scope: Vec<String>,
        tuple: Vec<usize>,
        image: Vec<usize>,
    },
    #[error("map for variable {var} is not idempotent")]
    NotRetractive { var: String },
    #[error("hypothesis unmet: {0}")]
    HypothesisUnmet(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn cap(what: impl Into<String>, limit: usize) -> Self {
        Error::CapExceeded {
            what: what.into(),
            limit,
        }
    }
}
