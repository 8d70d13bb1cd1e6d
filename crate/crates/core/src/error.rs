use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("fiber dimension n = {n} is not supported (need n >= {min})")]
    UnsupportedDimension { n: u32, min: u32 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("weight evaluation overflowed at r = {r}; shrink the truncation length (currently L = {half_length})")]
    WeightOverflow { r: f64, half_length: f64 },

    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("insufficient resolution: {0}")]
    Resolution(String),

    #[error("mass matrix is not positive definite (row {row})")]
    NotPositiveDefinite { row: usize },

    #[error("eigensolver did not converge: {0}")]
    NonConvergence(String),

    #[error("positivity at lambda = {lambda} is resolution dependent: theta = {theta_coarse} on the base grid, {theta_fine} on the refined grid")]
    InconclusiveResolution {
        lambda: f64,
        theta_coarse: f64,
        theta_fine: f64,
    },

    #[error("positivity changes sign more than once on the coarse scan: {samples:?}")]
    MultiTransition { samples: Vec<(f64, bool)> },

    #[error("strict positivity violated at parameter {parameter}: theta_min = {theta}")]
    StrictPositivityViolation { parameter: f64, theta: f64 },

    #[error("truncation dominates: theta = {theta} at L, {theta_extended} at L + 1")]
    TruncationDominated { theta: f64, theta_extended: f64 },

    #[error("fixture line {line}: {message}")]
    Fixture { line: usize, message: String },
}

impl Error {
    /// True for failures of the numerics (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::WeightOverflow { .. }
                | Error::Resolution(_)
                | Error::NotPositiveDefinite { .. }
                | Error::NonConvergence(_)
                | Error::InconclusiveResolution { .. }
                | Error::MultiTransition { .. }
                | Error::StrictPositivityViolation { .. }
                | Error::TruncationDominated { .. }
        )
    }
}
