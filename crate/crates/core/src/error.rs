use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown integrand family `{0}`")]
    UnknownFamily(String),
    #[error("missing parameter `{0}`")]
    MissingParam(String),
    #[error("parameter `{name}` = {value} out of range: {reason}")]
    ParamOutOfRange {
        name: String,
        value: f64,
        reason: String,
    },
    #[error("quadrature failed: {0}")]
    QuadratureFailure(String),
    #[error("vortex-energy integral diverges")]
    Divergent,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("nonpositive homotopy length {0}")]
    NonpositiveLambda(f64),
    #[error("balls do not intersect")]
    NotIntersecting,
    #[error("seeds {0} and {1} share a center")]
    DuplicateSeedCenters(usize, usize),
    #[error("eta = {eta} exceeds the admissible limit {limit}")]
    EtaTooLarge { eta: f64, limit: f64 },
    #[error("invalid seed: {0}")]
    InvalidSeed(String),
    #[error("mesh generation failed: {0}")]
    MeshGenerationFailure(String),
    #[error("degenerate triangle {0}")]
    DegenerateTriangle(usize),
    #[error("line search stalled at iteration {iteration}")]
    LineSearchStall { iteration: usize },
    #[error("edge {edge} of triangle {triangle} is near-antipodal")]
    AmbiguousEdge { triangle: usize, edge: usize },
    #[error("invalid radius range: {0}")]
    RhoRangeInvalid(String),
    #[error("point ({0}, {1}) lies outside the domain")]
    PointOutsideDomain(f64, f64),
    #[error("coincident points {0} and {1}")]
    CoincidentPoints(usize, usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn range(name: &str, value: f64, reason: &str) -> Self {
        Error::ParamOutOfRange {
            name: name.to_string(),
            value,
            reason: reason.to_string(),
        }
    }
}
