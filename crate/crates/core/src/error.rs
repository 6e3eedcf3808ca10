use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("coefficient table error: {0}")]
    Table(String),
    /// A mapping parameter lies outside the family's admissible range.
    #[error("mapping domain error: {0}")]
    Domain(String),
    #[error("invalid gas state: {0}")]
    State(String),
    #[error("reference solution failed: {0}")]
    Reference(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Non-finite or non-physical data encountered while integrating.
///
/// Robustness experiments treat this as an outcome, so it is kept apart
/// from [`Error`].
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct BlowUp {
    /// Interior cell index of the first offending value.
    pub cell: usize,
    pub time: f64,
    /// Step counter at the time of failure (0-based).
    pub step: usize,
    pub reason: String,
}

impl std::fmt::Display for BlowUp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "blow-up at step {} (t = {:.6e}), cell {}: {}",
            self.step, self.time, self.cell, self.reason
        )
    }
}
