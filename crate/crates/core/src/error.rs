use thiserror::Error;

/// Errors raised by the algebraic and geometric layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate coordinate name `{0}`")]
    DuplicateName(String),
    #[error("coordinate `{name}` has negative weight {weight}")]
    NegativeWeight { name: String, weight: i64 },
    #[error("chart declares more than one time coordinate")]
    MultipleTimeCoordinates,
    #[error("time coordinate `{0}` must have weight 0")]
    TimeWeight(String),
    #[error("operands live on different charts")]
    ChartMismatch,
    #[error("unknown coordinate `{0}`")]
    UnknownCoordinate(String),
    #[error("exponential factor requires a chart with a time coordinate")]
    NoTimeCoordinate,
    #[error("value is not homogeneous: {0}")]
    NonHomogeneous(String),
    #[error("vector field is not homogeneous")]
    NonHomogeneousField,
    #[error("invalid vector field component for `{0}`: {1}")]
    InvalidComponent(String, String),
    #[error("invalid Darboux data: {0}")]
    InvalidDarboux(String),
    #[error("contact models need degree n >= 1")]
    DegreeZero,
    #[error("model identity failed: {0}")]
    ModelCorrupt(String),
    #[error("vector field is not contact: L_X alpha is not a multiple of alpha")]
    NotContact,
    #[error("wrong multidegree: {0}")]
    WrongMultidegree(String),
    #[error("wrong degree: expected {expected}, found {found}")]
    WrongDegree { expected: i64, found: String },
    #[error("Poissonization paths disagree: direct `{direct}` vs lifted `{lifted}`")]
    PathMismatch { direct: String, lifted: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
