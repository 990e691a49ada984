use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("state {state} is out of range for a carrier of size {size}")]
    StateOutOfRange { state: usize, size: usize },

    #[error("carrier must contain at least one state")]
    EmptyCarrier,

    #[error("orthogonality is not symmetric: {x} ⊥ {y} but not {y} ⊥ {x}")]
    Asymmetric { x: usize, y: usize },

    #[error("ambient dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("ambient dimension must be at least 1")]
    ZeroDimension,

    #[error("model fails axiom {axiom}: {witness}")]
    AxiomViolation { axiom: String, witness: String },

    #[error("{0} is not a member of the flat family")]
    NotInFamily(String),

    #[error("resource cap exceeded: {what} would reach {needed}, cap is {cap}")]
    CapExceeded {
        what: &'static str,
        needed: u128,
        cap: u128,
    },

    #[error("atom `{0}` has no assigned flat")]
    UnassignedAtom(String),

    #[error("{0}")]
    Parse(#[from] ParseError),

    #[error("sequent is not in restricted form: {0}")]
    NotRestricted(String),

    #[error("invalid bindings: {0}")]
    InvalidBindings(String),

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

/// A syntax error with the 1-based line (when reading a file) and column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{}{message}", location(.line, .column))]
pub struct ParseError {
    pub line: Option<usize>,
    pub column: Option<usize>,
    pub message: String,
}

fn location(line: &Option<usize>, column: &Option<usize>) -> String {
    match (line, column) {
        (Some(l), Some(c)) => format!("line {l}, column {c}: "),
        (Some(l), None) => format!("line {l}: "),
        (None, Some(c)) => format!("column {c}: "),
        (None, None) => String::new(),
    }
}

impl ParseError {
    pub fn new(message: impl Into<String>) -> Self {
        ParseError {
            line: None,
            column: None,
            message: message.into(),
        }
    }

    pub fn at(column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line: None,
            column: Some(column),
            message: message.into(),
        }
    }

    pub fn on_line(mut self, line: usize) -> Self {
        self.line = Some(line);
        self
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
