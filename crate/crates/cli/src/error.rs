use thiserror::Error;

/// A failed stage of a scenario run; each stage has its own exit status.
#[derive(Debug, Error)]
pub enum Failure {
    #[error("parse: {0}")]
    Parse(String),

    #[error("validation: {key}: {message}")]
    Validation { key: String, message: String },

    #[error("truncation leak in {method}{variant}: {message}")]
    Leak { method: String, variant: String, message: String },

    #[error("sigma blow-up in {method}{variant}: {message}")]
    BlowUp { method: String, variant: String, message: String },

    #[error("engine failure in {method}{variant}: {message}")]
    Engine { method: String, variant: String, message: String },

    #[error("tolerance: {failed} of {total} declared tolerances failed")]
    Tolerance { failed: usize, total: usize },

    #[error("output: {0}")]
    Io(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Parse(_) | Failure::Validation { .. } => 2,
            Failure::Leak { .. } => 3,
            Failure::BlowUp { .. } => 4,
            Failure::Tolerance { .. } => 5,
            Failure::Engine { .. } => 6,
            Failure::Io(_) => 7,
        }
    }

    /// Maps an engine error, tagging the method and (non-empty) variant name.
    pub fn from_engine(method: &str, variant: &str, e: blochnh::Error) -> Self {
        let (method, variant, message) = (
            method.to_string(),
            if variant.is_empty() { String::new() } else { format!(" (variant {variant})") },
            e.to_string(),
        );
        match e {
            blochnh::Error::BoundaryLeak { .. } => Failure::Leak { method, variant, message },
            blochnh::Error::SigmaBlowUp { .. } => Failure::BlowUp { method, variant, message },
            _ => Failure::Engine { method, variant, message },
        }
    }
}
