use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{context}: expected dimension {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("duplicate {kind} id `{id}`")]
    DuplicateId { kind: &'static str, id: String },
    #[error("arrow `{arrow}` refers to unknown vertex `{vertex}`")]
    DanglingArrow { arrow: String, vertex: String },
    #[error("quiver has an oriented cycle through `{0}`")]
    Cyclic(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("quiver is not admissible: arrow `{0}` does not strictly decrease weight")]
    NotAdmissible(String),
    #[error("vertex-support subspace is not a subrepresentation: arrow `{0}` raises weight")]
    NotFiltered(String),
    #[error("representations live over different quivers")]
    QuiverMismatch,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("map fails to intertwine at arrow `{0}`")]
    NotIntertwiner(String),
    #[error("d∘d is nonzero at degree {0}")]
    DifferentialSquare(i32),
    #[error("chain map does not commute with differentials at degree {0}")]
    NotChainMap(i32),
    #[error("endomorphism is not idempotent")]
    NotIdempotent,
    #[error("morphism is not invertible")]
    NotInvertible,
    #[error("object is not in the required class: {0}")]
    Membership(String),
    #[error("operation not available in this mode: {0}")]
    WrongMode(String),
    #[error("complex has a non-projective term in degree {0}")]
    NotProjective(i32),
    #[error("weight spectral sequence does not degenerate at E2: {0}")]
    NotDegenerate(String),
}
