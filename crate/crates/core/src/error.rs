use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("duplicate qubit label `{0}`")]
    DuplicateLabel(String),

    #[error("unknown qubit label `{0}`")]
    UnknownLabel(String),

    #[error("layout must contain at least one qubit")]
    EmptyLayout,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("layout mismatch: {0}")]
    LayoutMismatch(String),

    #[error("parameter `{name}` = {value} is out of range")]
    OutOfRange { name: &'static str, value: f64 },

    #[error("non-finite matrix entry")]
    NonFinite,

    #[error("operator is not Hermitian (|H - H^dag|_F = {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not unitary (|U U^dag - 1|_F = {0:e})")]
    NotUnitary(f64),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("map is not trace preserving (deviation {0:e})")]
    NotTracePreserving(f64),

    #[error("map is not completely positive (min Choi eigenvalue {0:e})")]
    NotCompletelyPositive(f64),

    #[error("Hermitian eigensolver did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("target duration {duration} is shorter than one period {period}")]
    ZeroPeriods { duration: f64, period: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },

    #[error("invalid distillation config: {0}")]
    InvalidDistillation(String),

    #[error("error budget is not increasing on the scan: p({lo}) = {p_lo} >= p({hi}) = {p_hi}")]
    NonMonotoneBudget {
        lo: f64,
        hi: f64,
        p_lo: f64,
        p_hi: f64,
    },

    #[error("no threshold: p_phase stays {side} the budget {budget} on [0, {eps_max}]")]
    NoThreshold {
        budget: f64,
        eps_max: f64,
        side: &'static str,
    },
}
