use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("graph is disconnected")]
    Disconnected,
    #[error("duplicate {kind} id `{id}`")]
    DuplicateId { kind: &'static str, id: String },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("unknown leg `{0}`")]
    UnknownLeg(String),
    #[error("graph has no legs")]
    NoLeg,
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: i64, found: i64 },
    #[error("flow is not acyclic")]
    CyclicFlow,
    #[error("objects live on different graphs")]
    GraphMismatch,
    #[error("stability condition is not generic")]
    NonGeneric,
    #[error("stability condition has total {theta}, expected the divisor degree {degree}")]
    ThetaDegree { theta: String, degree: i64 },
    #[error("divisor is not admissible: exceptional vertex `{0}` has value other than 1")]
    NonAdmissible(String),
    #[error("generators are linearly dependent")]
    DependentGenerators,
    #[error("ambient coordinates differ")]
    AmbientMismatch,
    #[error("cone is not simplicial ({rays} rays, dimension {dim})")]
    NonSimplicial { rays: usize, dim: usize },
    #[error("ordering is incompatible with the flow")]
    IncompatibleOrdering,
    #[error("invalid subdivision: {0}")]
    InvalidSubdivision(String),
    #[error("projection of the extended cone is not injective")]
    NonInjectiveProjection,
    #[error("graph is not stable")]
    Unstable,
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
