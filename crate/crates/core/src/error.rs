use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid number of operators {got}: {reason}")]
    InvalidArity { got: usize, reason: &'static str },

    #[error("method table needs at least one stage")]
    EmptyTable,

    #[error("stage {stage} has {got} entries, expected {expected}")]
    RaggedStage { stage: usize, got: usize, expected: usize },

    #[error("invalid flow sequence: {0}")]
    InvalidSequence(String),

    #[error("singular family parameter: b = 1 makes the coefficients undefined")]
    SingularParameter,

    #[error(
        "composition order {0} is outside 3..=6; two-term conjugate compositions lose \
         positive real parts from order 7 on"
    )]
    CompositionOrder(u32),

    #[error("base method has order {base}, composition pair expects order {expected}")]
    OrderMismatch { base: u32, expected: u32 },

    #[error("operator count mismatch: method has {method}, problem has {problem}")]
    ArityMismatch { method: usize, problem: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("defect {defect:e} at t = {t:e} is below the round-off floor")]
    RoundOffDominated { t: f64, defect: f64 },

    #[error("need at least {need} step sizes in decreasing order, got {got}")]
    BadLadder { need: usize, got: usize },

    #[error("blow-up at t = {t}: state norm {norm:e} ({reason})")]
    BlowUp { t: f64, norm: f64, reason: &'static str },

    #[error("step size underflow at t = {t}: h = {h:e} (stiff or blowing up)")]
    StepSizeUnderflow { t: f64, h: f64 },

    #[error("operator {0} has no linear matrix, exact sub-flows need one")]
    NotLinear(usize),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("malformed table document: {0}")]
    Document(String),
}

pub type Result<T> = std::result::Result<T, Error>;
