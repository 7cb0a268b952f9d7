use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter violates an invariant of its type.
    #[error("invalid `{field}`: {reason}")]
    InvalidParameter { field: String, reason: String },

    /// Quadrature or integrator step too coarse to resolve the fastest phase.
    #[error("step {step} exceeds the phase-resolution limit {limit} (aliasing risk)")]
    Aliasing { step: f64, limit: f64 },

    #[error("step size underflow at t = {t} (h = {h}); the system may be stiff")]
    StepUnderflow { t: f64, h: f64 },

    #[error("tolerance not achievable within {steps} steps (stopped at t = {t})")]
    MaxStepsExceeded { t: f64, steps: usize },

    #[error("trajectory grids differ: {0}")]
    GridMismatch(String),

    #[error("scenario parse error{}: {message}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Parse {
        message: String,
        line: Option<usize>,
    },

    #[error("sweep failed at value {value}: {source}")]
    Sweep {
        value: f64,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field: field.into(),
            reason: reason.into(),
        }
    }

    /// Process exit code: 1 for invalid input, 2 for failures during a run.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParameter { .. }
            | Error::Aliasing { .. }
            | Error::GridMismatch(_)
            | Error::Parse { .. } => 1,
            Error::Sweep { source, .. } => source.exit_code(),
            _ => 2,
        }
    }
}
