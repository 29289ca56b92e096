use thiserror::Error;

use crate::constructions::Certificate;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("relation contains a directed cycle through element {0}")]
    CyclicRelation(usize),

    #[error("index {index} out of range for a ground set of size {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("expected {expected} parts, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("budget exceeded: {what} (limit {limit})")]
    BudgetExceeded { what: &'static str, limit: u64 },

    #[error("poset is not a lattice")]
    NotALattice,

    #[error("poset is not a join-semilattice")]
    NotJoinSemilattice,

    #[error("poset is not a meet-semilattice")]
    NotMeetSemilattice,

    #[error("poset has no least element")]
    NoLeastElement,

    #[error("structure mismatch: {0}")]
    StructureMismatch(String),

    #[error("element set is not independent")]
    NotIndependent,

    #[error("lattice is not distributive")]
    NotDistributive,

    #[error("base hypothesis f(i,j) = f(i,w) ^ f(j,w) fails at ({i},{j})")]
    BaseHypothesisViolated { i: usize, j: usize },

    #[error("map is not meet-preserving")]
    NotMeetPreserving,

    #[error("map is not surjective")]
    NotSurjective,

    #[error("map is not a lattice homomorphism")]
    NotLatticeHom,

    #[error("element set is not an antichain")]
    NotAntichain,

    #[error("no monochromatic subset of size {m} among {n} antichain elements")]
    NoMonochromaticSubset { m: usize, n: usize },

    #[error("construction stalled at level {level}")]
    ConstructionStalled {
        level: usize,
        partial: Box<Certificate>,
    },

    #[error("requested depth {requested} unreachable; achieved {achieved}")]
    DepthUnreachable { requested: usize, achieved: usize },

    #[error("independent set of size {found} is below the required {required}")]
    IndependenceTooSmall { required: usize, found: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("unsupported family parameters: {0}")]
    UnsupportedParams(String),

    #[error("unsupported ordinal: {0}")]
    UnsupportedOrdinal(String),

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}
