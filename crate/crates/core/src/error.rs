use std::path::PathBuf;

/// Errors raised anywhere in the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("no documents found under {}", .0.display())]
    NoDocuments(PathBuf),

    #[error("unknown document: {0}")]
    UnknownDocument(String),

    #[error("duplicate document id: {0}")]
    DuplicateDocument(String),

    #[error("{}:{line}: {msg}", path.display())]
    Parse { path: PathBuf, line: usize, msg: String },

    #[error("duplicate synset id {id:?} at line {line}")]
    DuplicateSynset { id: String, line: usize },

    #[error("query {0} has no relevant documents")]
    NoRelevant(String),

    #[error("run and qrels share no query ids")]
    NoOverlap,

    #[error("query sets differ: only in baseline {only_baseline:?}, only in variant {only_variant:?}")]
    QuerySetMismatch {
        only_baseline: Vec<String>,
        only_variant: Vec<String>,
    },

    #[error("analyzer configuration differs from the one recorded in the index manifest")]
    AnalyzerMismatch,

    #[error("index directory {} already exists (use --force to overwrite)", .0.display())]
    IndexExists(PathBuf),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("corrupt index: {0}")]
    Corrupt(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error("write failed: {0}")]
    Write(#[source] std::io::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            msg: msg.into(),
        }
    }

    /// Process exit code: 1 usage, 2 data/format, 3 internal.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::IndexExists(_) => 1,
            Error::Io { .. }
            | Error::NoDocuments(_)
            | Error::UnknownDocument(_)
            | Error::DuplicateDocument(_)
            | Error::Parse { .. }
            | Error::DuplicateSynset { .. }
            | Error::NoRelevant(_)
            | Error::NoOverlap
            | Error::QuerySetMismatch { .. }
            | Error::AnalyzerMismatch
            | Error::Corrupt(_) => 2,
            Error::Json(_) | Error::Csv(_) | Error::Write(_) => 3,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
