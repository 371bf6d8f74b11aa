use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed user input: bad permutations, non-primes, bad files.
    #[error("input error: {0}")]
    Input(String),
    /// An argument lies outside the domain of the operation (x not in G, H not normal, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// The group is too large for enumeration-backed algorithms.
    /// The input does not satisfy the hypotheses of the statement being checked.
    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),
    #[error("capacity error: {0}")]
    Capacity(String),
    #[error("arithmetic error: {0}")]
    Arithmetic(String),
    #[error("value is not integral at p = {0}")]
    NotIntegralAtP(u64),
    /// A proven statement failed on concrete data. Always an implementation bug or bad input table.
    #[error("theorem violation ({theorem}): {diagnostics}")]
    TheoremViolation { theorem: String, diagnostics: String },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn violation(theorem: &str, diagnostics: impl Into<String>) -> Self {
        Error::TheoremViolation {
            theorem: theorem.to_string(),
            diagnostics: diagnostics.into(),
        }
    }
}
