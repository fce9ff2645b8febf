use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate perceived persistence (rho_pi = 0)")]
    DegeneratePersistence,

    #[error("infinite noise: attention of exactly zero has no finite signal variance")]
    InfiniteNoise,

    #[error("singular design: {0}")]
    SingularDesign(String),

    #[error("insufficient regime variation: {0}")]
    InsufficientRegimeVariation(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("non-positive implied dispersion (q_down = {q_down}, q_up = {q_up})")]
    NonPositiveDispersion { q_down: f64, q_up: f64 },

    #[error("indeterminate equilibrium: |det| = {det:e} ({context})")]
    IndeterminateEquilibrium { det: f64, context: String },

    #[error("indeterminacy or explosiveness: {0}")]
    NoStableSolution(String),

    #[error("AD slope degenerate: phi_pi = {phi_pi} <= gamma = {gamma}")]
    DegenerateAdSlope { phi_pi: f64, gamma: f64 },

    #[error("explosive path under {rule} / {mode} at period {period}")]
    ExplosivePath { rule: String, mode: String, period: usize },

    #[error("bisection failed: {0}")]
    Bisection(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
