use thiserror::Error;

use crate::forms::KForm;
use crate::poly::{Alphabet, Var};

#[derive(Debug, Clone, Error)]
pub enum SymError {
    #[error("alphabet mismatch: {left:?} vs {right:?}")]
    AlphabetMismatch { left: Alphabet, right: Alphabet },

    #[error("variable {var} is not part of the {alphabet:?} alphabet")]
    UnknownVariable { var: Var, alphabet: Alphabet },

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("form is not closed; d(form) = {residual}")]
    NotClosed { residual: Box<KForm> },

    #[error("index {0} out of range")]
    IndexOutOfRange(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = SymError> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum IntegrateError {
    #[error("step size must be positive and finite, got {0}")]
    InvalidStep(f64),

    #[error("integration horizon {horizon} shorter than step {dt}")]
    InvalidHorizon { horizon: f64, dt: f64 },

    #[error("non-finite state at step {step} (t = {t}): {state:?}")]
    NonFinite { step: usize, t: f64, state: Vec<f64> },

    #[error("empty trajectory")]
    EmptyTrajectory,

    #[error(transparent)]
    Symbolic(#[from] SymError),
}
