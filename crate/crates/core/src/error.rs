use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("system unsolvable: residual {residual:.3e} exceeds bound {bound:.3e}")]
    Unsolvable { residual: f64, bound: f64 },
    #[error("incompatible action: {0}")]
    IncompatibleAction(String),
    #[error("not a character: multiplicativity defect {0:.3e}")]
    NotACharacter(f64),
    #[error("operation requires a bimodule action")]
    MissingAction,
    #[error("spectrum stayed degenerate after {0} generic elements")]
    DegenerateSpectrum(usize),
    #[error("character incompatible with the action: defect {0:.3e}")]
    ActionIncompatibleWithCharacter(f64),
    #[error("direct and composed spectra disagree: {0}")]
    SpectrumTheoremViolation(String),
    #[error("operation requires a commutative algebra")]
    CommutativityRequired,
    #[error("not a proper ideal: {0}")]
    NotAProperIdeal(String),
    #[error("block decomposition defect {defect:.3e} in {condition}")]
    DecompositionDefect { condition: String, defect: f64 },
    #[error("Arens tensor differs from the multiplication tensor by {0:.3e}")]
    ArensDefect(f64),
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),
    #[error("operation requires a unital algebra")]
    UnitRequired,
    #[error("level {0} not allowed here: {1}")]
    InvalidLevel(usize, &'static str),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("index out of range at {path}: {message}")]
    Index { path: String, message: String },
    #[error("duplicate entry at {path}: key {key:?} already set")]
    DuplicateEntry { path: String, key: Vec<usize> },
}
