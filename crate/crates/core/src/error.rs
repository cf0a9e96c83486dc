use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("unknown concept `{0}`")]
    UnknownConcept(String),

    #[error("concept `{query}` not found in graph{}", suggestion_suffix(.suggestions))]
    ConceptNotFound {
        query: String,
        suggestions: Vec<String>,
    },

    #[error("term `{0}` does not occur in any document")]
    UnknownTerm(String),

    #[error("graph artifact problem in {path}: {reason}")]
    Artifact { path: PathBuf, reason: String },
}

fn suggestion_suffix(suggestions: &[String]) -> String {
    if suggestions.is_empty() {
        String::new()
    } else {
        format!("; nearest concepts: {}", suggestions.join(", "))
    }
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Configuration problems map to exit code 2, everything else to 1.
    pub fn is_config(&self) -> bool {
        matches!(self, Error::Config(_))
    }
}
