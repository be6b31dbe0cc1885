use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("NonPositivePrior: state {state:?} has prior {prior}")]
    NonPositivePrior { state: String, prior: Rational },

    #[error("PriorNotNormalized: priors sum to {sum}, expected 1")]
    PriorNotNormalized { sum: Rational },

    #[error("DuplicateStateName: {0:?}")]
    DuplicateStateName(String),

    #[error("EmptyStateList: a game needs at least one state")]
    EmptyStateList,

    #[error("SenderCountMismatch: state {state:?} has {found} sender utility pairs, expected {expected}")]
    SenderCountMismatch {
        state: String,
        expected: usize,
        found: usize,
    },

    #[error("InvalidRational: field {field} has value {value:?}")]
    InvalidRational { field: String, value: String },

    #[error("InvalidGame: {0}")]
    InvalidGame(String),

    #[error("ZeroProbabilitySignal: signal {0:?} is never emitted")]
    ZeroProbabilitySignal(String),

    #[error("FilterDomainMismatch: {0}")]
    FilterDomainMismatch(String),

    #[error("InvalidFilter: {0}")]
    InvalidFilter(String),

    #[error("InvalidProfile: {0}")]
    InvalidProfile(String),

    #[error("WrongSenderCount: expected {expected}, game has {found}")]
    WrongSenderCount { expected: String, found: usize },

    #[error("SenderIndexOutOfRange: sender {index} but game has {count} senders")]
    SenderIndexOutOfRange { index: usize, count: usize },

    #[error("GridTooLarge: {0}")]
    GridTooLarge(String),
}

pub type Result<T> = std::result::Result<T, Error>;
