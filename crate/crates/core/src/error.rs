use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("cover relation has a cycle through `{0}` and `{1}`")]
    Cycle(String, String),
    #[error("relation is not a partial order: {0}")]
    NotAnOrder(String),
    #[error("the carrier is empty")]
    Empty,
    #[error("{what} has {size} members, more than the supported {max}")]
    TooLarge { what: &'static str, size: usize, max: usize },
    #[error("the set is not orthoclosed")]
    NotOrthoclosed,
    #[error("the set is not a lower set of the quotient order")]
    NotLowerSet,
    #[error("the set is not of chain type")]
    NotChainType,
    #[error("the poset has no bottom and top")]
    Unbounded,
    #[error("the order is not a lattice: {0}")]
    NotALattice(String),
    #[error("size {n} exceeds the enumeration cap {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("invalid self-orthogonality at `{0}`")]
    Reflexive(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
