use alloc::string::String;

pub type Result<T, E = FcmError> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FcmError {
    #[error("unknown linguistic term `{0}`")]
    UnknownTerm(String),
    #[error("invalid parameters for term `{term}`: {reason}")]
    InvalidParams { term: String, reason: String },
    #[error("invalid universe: {0}")]
    InvalidUniverse(String),
    #[error("membership functions have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("membership function is identically zero, nothing to defuzzify")]
    ZeroArea,
    #[error("edge {0} -> {1} has no ratings")]
    EmptyEdge(String, String),
    #[error("survey contains no experts")]
    EmptySurvey,
    #[error("duplicate expert id `{0}`")]
    DuplicateExpert(String),
    #[error("endorsement {0} is outside [0, 1]")]
    InvalidEndorsement(f64),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("unknown concept `{0}`")]
    UnknownConcept(String),
    #[error("duplicate concept `{0}`")]
    DuplicateConcept(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("desired output concept `{0}` is not in the map")]
    UnknownDoc(String),
    #[error("learning rate must be a non-negative number, got {0}")]
    InvalidLearningRate(f64),
    #[error("activation pattern is incomplete: {0}")]
    IncompletePattern(String),

    #[error("population is empty")]
    EmptyPopulation,
    #[error("invalid range [{low}, {high}]")]
    InvalidRange { low: f64, high: f64 },

    #[error("intervention `{0}` already exists")]
    DuplicateName(String),
    #[error("no intervention named `{0}`")]
    UnknownIntervention(String),
    #[error("effectiveness {0} is outside [0, 1]")]
    EffectivenessOutOfRange(f64),
    #[error("baseline equilibrium of `{0}` is exactly zero")]
    ZeroBaseline(String),
}

impl FcmError {
    /// True for failures caused by the numbers themselves rather than by the
    /// shape of the input (an all-zero membership function, a zero baseline).
    pub fn is_numerical(&self) -> bool {
        matches!(self, FcmError::ZeroArea | FcmError::ZeroBaseline(_))
    }
}
