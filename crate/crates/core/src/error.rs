use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A category presentation failed validation.
    #[error("invalid category: {0}")]
    Construction(String),

    #[error("unknown object `{0}`")]
    UnknownObject(String),

    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),

    /// A diagram, map or square failed a functoriality/naturality/commutation check.
    #[error("validation failed: {0}")]
    Validation(String),

    /// An enumeration or construction hit its configured cap. Inconclusive, never a
    /// verdict about the mathematics.
    #[error("budget exceeded: {what} (limit {limit})")]
    BudgetExceeded { what: String, limit: usize },

    /// Definitional and characterized acyclic classes disagree.
    #[error("characterization mismatch for {class}: definitional={definitional}, characterized={characterized}; evidence: {evidence}")]
    CharacterizationMismatch {
        class: &'static str,
        definitional: bool,
        characterized: bool,
        evidence: String,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A claimed identity failed on a concrete instance.
    #[error("check failed: {0}")]
    CheckFailed(String),

    #[error("ambient oracle failure: {0}")]
    Oracle(String),

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn budget(what: impl Into<String>, limit: usize) -> Self {
        Error::BudgetExceeded {
            what: what.into(),
            limit,
        }
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}
