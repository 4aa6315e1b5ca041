use std::fmt;

/// Errors raised while ingesting, analysing, or simulating proof networks.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("edge list line {line}: {message}")]
    EdgeList { line: usize, message: String },
    #[error("duplicate definition `{0}`")]
    DuplicateName(String),
    #[error("dependency cycle: {}", CyclePath(.0))]
    Cycle(Vec<String>),
    #[error("cannot pick a theorem, candidate sinks: [{}]", .0.join(", "))]
    AmbiguousTheorem(Vec<String>),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("insufficient data: need at least {needed} usable values, got {got}")]
    InsufficientData { needed: usize, got: usize },
    #[error("degenerate sample: {0}")]
    DegenerateSample(String),
    #[error("value out of domain: {0}")]
    Domain(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("malformed graph document: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

struct CyclePath<'a>(&'a [String]);

impl fmt::Display for CyclePath<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.join(" -> "))
    }
}
