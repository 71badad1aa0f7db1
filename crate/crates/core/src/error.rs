use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("polynomial degree {degree} exceeds working limit {limit}")]
    DegreeOverflow { degree: usize, limit: usize },

    #[error("field rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: &'static str, got: &'static str },

    #[error("field is not tangential: residual {residual:.3e} at point {point:?}")]
    NonTangential { point: Vec<f64>, residual: f64 },

    #[error("singular leading coefficient at sample point {point:?}: {detail}")]
    SingularLeading { point: Vec<f64>, detail: String },

    #[error("leading tangential coefficient is not a constant multiple of the round metric (deviation {deviation:.3e} at {point:?})")]
    LeadingNotRound { point: Vec<f64>, deviation: f64 },

    #[error("jet order mismatch: {detail}")]
    OrderMismatch { detail: String },

    #[error("jets disagree at order {order} (sup norm {sup:.3e})")]
    JetsDisagree { order: usize, sup: f64 },

    #[error("perturbation order k = {k} is not supported; k must be >= 2")]
    BadPerturbationOrder { k: usize },

    #[error("metric jet is not in scattering form: {detail}")]
    NotScatteringForm { detail: String },

    #[error("metric jet is not in normal form: {detail}")]
    NotNormalForm { detail: String },

    #[error("normalization stage failed to advance (stage stuck at r = {stage}); this indicates a bug")]
    StageStuck { stage: usize },

    #[error("series inversion did not converge within {iterations} iterations")]
    InversionDiverged { iterations: usize },

    #[error("singular two-energy system: lambda1^2 = lambda2^2 ({lambda1}, {lambda2})")]
    SingularEnergies { lambda1: f64, lambda2: f64 },

    #[error("empty basis")]
    EmptyBasis,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("schema violation at {path}: {detail}")]
    Schema { path: String, detail: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
