//! Crate-wide error type.

use crate::kripke::KripkeStructure;

/// Errors raised anywhere in the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Formula text did not conform to the grammar.
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    /// DIMACS input was malformed.
    #[error("dimacs error: {0}")]
    Dimacs(String),

    /// A literal referenced a variable outside the declared universe.
    #[error("undeclared variable `{0}`")]
    UndeclaredVariable(String),

    /// A world name was referenced that the structure does not contain.
    #[error("unknown world `{0}`")]
    UnknownWorld(String),

    /// A world was declared twice.
    #[error("duplicate world `{0}`")]
    DuplicateWorld(String),

    /// A modality index was 0 or exceeded the structure's arity.
    #[error("modality index {index} out of range (arity {arity})")]
    ModalityOutOfRange { index: u32, arity: usize },

    /// Structures passed to an operation disagree on arity.
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    /// An operation needed an equivalence relation and got something else.
    #[error("relation {relation} is not an equivalence ({missing} fails)")]
    NotEquivalence { relation: u32, missing: String },

    /// The CNF had no clauses where at least one was required.
    #[error("empty formula: at least one clause is required")]
    EmptyCnf,

    /// A search exceeded its configured budget.
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    /// The input formula is propositionally unsatisfiable.
    #[error("unsatisfiable input")]
    Unsatisfiable,

    /// The witness builder produced a model that fails its own check.
    /// The offending structure is carried for post-mortem inspection.
    #[error("verification failure at world `{world}` (tree node `{node}`): {detail}")]
    Verification {
        world: String,
        node: String,
        detail: String,
        model: Box<KripkeStructure>,
    },

    /// A construction step hit a state the pipeline should never produce.
    #[error("construction failure: {0}")]
    Construction(String),

    /// Invalid argument or precondition violation.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// JSON (de)serialization failure.
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
