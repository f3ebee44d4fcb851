use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("search budget of {cap} candidates exceeded while {context}")]
    BudgetExceeded { cap: u64, context: &'static str },

    #[error("presentation did not saturate within path length {bound}: {detail}")]
    SaturationExceeded { bound: usize, detail: String },

    #[error("invalid category `{name}`: {}", .violations.join("; "))]
    InvalidCategory { name: String, violations: Vec<String> },

    #[error("invalid 2-category `{name}`: {}", .violations.join("; "))]
    InvalidTwoCat { name: String, violations: Vec<String> },

    #[error("invalid functor: {0}")]
    InvalidFunctor(String),

    #[error("invalid natural transformation: {0}")]
    InvalidTransformation(String),

    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),

    #[error("missing chosen limit: {0}")]
    IncompleteAssignment(String),

    #[error("index is not 2-filtered: {0}")]
    NotFiltered(String),

    #[error("ill-formed pseudocone: {0}")]
    IllFormedCone(String),

    #[error("boundary mismatch: {0}")]
    BoundaryMismatch(String),

    #[error("component is not invertible: {0}")]
    NonInvertibleComponent(String),

    #[error("no mediating 2-cell: {0}")]
    NoSolution(String),

    #[error("diagram does not lift to a single fiber: {0}")]
    NotLiftable(String),

    #[error("subcategories are not closed under transitions: {0}")]
    ClosureViolation(String),

    #[error("invalid site: {0}")]
    InvalidSite(String),

    #[error("invalid presheaf: {0}")]
    InvalidPresheaf(String),

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("line {line}, column {column}: unknown {kind} `{name}`")]
    UnknownName {
        kind: &'static str,
        name: String,
        line: usize,
        column: usize,
    },
}
