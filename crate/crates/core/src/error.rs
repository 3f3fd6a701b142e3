use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}-D, found {found}-D")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("a point must have 1 or 2 coordinates, got {0}")]
    BadCoordinateCount(usize),
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("empty point set")]
    Empty,
    #[error("degenerate triangle (collinear or repeated vertices)")]
    DegenerateTriangle,
    #[error("invalid lottery: {0}")]
    InvalidLottery(String),
    #[error("degenerate instance: leftmost and rightmost reports coincide")]
    DegenerateInstance,
    #[error("expected a two-agent instance, got {0} agents")]
    NotTwoAgents(usize),
    #[error("mixture parameter delta = {0} is outside [0, 0.5]")]
    DeltaOutOfRange(f64),
    #[error("perturbation radius must be positive and finite, got {0}")]
    BadEpsilon(f64),
    #[error("agent index {index} out of range for {n} agents")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("extreme-agent prediction needs at least two ids, got {0}")]
    TooFewIds(usize),
    #[error("duplicate agent id {0} in prediction")]
    DuplicateId(usize),
    #[error("prediction does not match instance: {0}")]
    PredictionMismatch(String),
    #[error("mechanism `{mechanism}` needs a {expected} prediction")]
    MissingPrediction { mechanism: String, expected: &'static str },
    #[error("unknown witness `{0}`")]
    UnknownWitness(String),
    #[error("nothing to emit: empty curve")]
    EmptyCurve,
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
