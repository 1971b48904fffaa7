use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero vector has no projective point")]
    ZeroVector,
    #[error("not coprime")]
    NotCoprime,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("target degree {target} is below the polynomial degree {degree}")]
    DegreeTooSmall { target: u32, degree: u32 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("plane is X0=0; conic lies at infinity")]
    PlaneAtInfinity,
    #[error("degenerate conic: pair of lines")]
    DegenerateConic,
    #[error("conic is not tangent to the plane at infinity (rank {0})")]
    NotTangent(usize),
    #[error("point not on surface")]
    PointNotOnSurface,
    #[error("center of projection")]
    CenterOfProjection,
    #[error("identical points do not span a line")]
    SamePoints,
    #[error("class lies in a smaller locus than basis captures; increase D")]
    IncreaseDegree,
    #[error("insufficient data")]
    InsufficientData,
    #[error("wrong dimension: {0}")]
    WrongDimension(String),
    #[error("not found: {0}")]
    NotFound(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("io error on {path}: {msg}")]
    Io { path: String, msg: String },
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
