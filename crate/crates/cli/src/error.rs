use std::process::ExitCode;

use ambicon::ambiguous::AmbiguousError;
use ambicon::gap::GapError;
use ambicon::lp::LpError;
use ambicon::manipulability::ManipError;
use ambicon::ModelError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Unreadable files, malformed documents, bad parameters.
    #[error("input error: {0}")]
    Input(String),
    /// A solver failed on well-formed input.
    #[error("error: {0}")]
    Domain(String),
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        Self::Input(msg.into())
    }

    pub fn exit_code(&self) -> ExitCode {
        match self {
            Self::Domain(_) => ExitCode::from(1),
            Self::Input(_) => ExitCode::from(2),
        }
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        Self::Input(e.to_string())
    }
}

impl From<LpError> for CliError {
    fn from(e: LpError) -> Self {
        match e {
            LpError::Model(m) => m.into(),
            other => Self::Domain(other.to_string()),
        }
    }
}

impl From<AmbiguousError> for CliError {
    fn from(e: AmbiguousError) -> Self {
        match e {
            AmbiguousError::Model(m) => m.into(),
            AmbiguousError::Dimension { .. } => Self::Input(e.to_string()),
            other => Self::Domain(other.to_string()),
        }
    }
}

impl From<GapError> for CliError {
    fn from(e: GapError) -> Self {
        match e {
            GapError::Parameters(_) => Self::Input(e.to_string()),
            GapError::Model(m) => m.into(),
            GapError::Lp(l) => l.into(),
            GapError::Ambiguous(a) => a.into(),
            other => Self::Domain(other.to_string()),
        }
    }
}

impl From<ManipError> for CliError {
    fn from(e: ManipError) -> Self {
        match e {
            ManipError::EmptyGrid | ManipError::InvalidCurve(_) | ManipError::NotDefinedAt(_) => {
                Self::Input(e.to_string())
            }
            ManipError::Model(m) => m.into(),
            ManipError::Gap(g) => g.into(),
            other => Self::Domain(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
