use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("invalid grid: {0}")]
    Grid(String),
    #[error("unknown gate `{0}`")]
    UnknownGate(String),
    #[error("{0}")]
    NonMonotone(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Numerics(noqc::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Grid(_) => 3,
            CliError::UnknownGate(_) => 4,
            CliError::NonMonotone(_) => 5,
            CliError::Io(_) => 6,
            CliError::Numerics(_) => 7,
        }
    }
}

impl From<noqc::Error> for CliError {
    fn from(e: noqc::Error) -> Self {
        match e {
            noqc::Error::NonMonotoneBudget { .. } => CliError::NonMonotone(e.to_string()),
            noqc::Error::Unknown { kind: "gate", name } => CliError::UnknownGate(name),
            noqc::Error::OutOfRange { .. } | noqc::Error::InvalidDistillation(_) => CliError::Grid(e.to_string()),
            other => CliError::Numerics(other),
        }
    }
}
