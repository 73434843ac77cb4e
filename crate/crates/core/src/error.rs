use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero vector has no primitive representative")]
    ZeroVector,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is not unimodular (det = {0})")]
    NotUnimodular(String),
    #[error("constraint set has empty interior")]
    EmptyInterior,
    #[error("unsupported ambient dimension {0}")]
    UnsupportedDimension(usize),
    #[error("malformed polytope: {0}")]
    Malformed(String),
    #[error("circle vector {0:?} is not primitive")]
    NotPrimitive(Vec<String>),
    #[error("level {0} lies outside the momentum image")]
    OutsideImage(String),
    #[error("interval ({0}, {1}) contains the critical value {2}")]
    CriticalInInterval(String, String, String),
    #[error("inconsistent weights on fixed face: {0}")]
    InconsistentWeights(String),
    #[error("action is not semi-free")]
    NotSemiFree,
    #[error("polygon is not Delzant at corner {0}")]
    NonDelzantCorner(usize),
    #[error("polygon is not compact")]
    NonCompact,
    #[error("no contractible edge on a polygon with {0} edges")]
    NoContractibleEdge(usize),
    #[error("class is not in the span of the edge classes")]
    ClassNotInSpan,
    #[error("unmatched edge across the wall: {0}")]
    UnmatchedEdge(String),
    #[error("euler class extension is not unique: {0}")]
    NonUniqueExtension(String),
    #[error("level {0} is extremal")]
    Extremal(String),
    #[error("level {0} is not critical")]
    NotCritical(String),
    #[error("index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("invalid blowup form: {0}")]
    InvalidForm(String),
    #[error("search guard exceeded: {0}")]
    GuardExceeded(String),
    #[error("E' differs from D: {0}")]
    EPrimeMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
