use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{file}:{line}: {message}")]
    Parse { file: String, line: u64, message: String },

    #[error("{file}: unsupported schema ({found}), expected `{expected}`")]
    Schema {
        file: String,
        found: String,
        expected: String,
    },

    #[error("{context}: unknown {kind} `{id}`")]
    DanglingReference {
        context: String,
        kind: &'static str,
        id: String,
    },

    #[error("database integrity: {0}")]
    DatabaseIntegrity(String),

    #[error("unresolvable demand for `{flow}`: {reason}")]
    UnresolvableDemand { flow: String, reason: String },

    #[error("singular technology matrix at product `{product}`")]
    Singular { product: String },

    #[error("solve rejected: relative residual {residual:e} above {bound:e}")]
    Residual { residual: f64, bound: f64 },

    #[error("unknown indicator `{0}`")]
    UnknownIndicator(String),

    #[error("unknown unit `{0}`")]
    UnknownUnit(String),

    #[error("cannot convert {from} to {to}")]
    IncompatibleUnits { from: String, to: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("asset `{asset}` has no traffic to allocate over")]
    ZeroTraffic { asset: String },

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("assessment of `{mode}` has unresolved references: {}", unresolved.join(", "))]
    Assessment { mode: String, unresolved: Vec<String> },

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("cannot normalize indicator {indicator}: column maximum is not positive")]
    Normalization { indicator: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn parse(file: &str, line: u64, message: impl Into<String>) -> Self {
        Error::Parse {
            file: file.to_string(),
            line,
            message: message.into(),
        }
    }

    pub(crate) fn dangling(context: impl Into<String>, kind: &'static str, id: impl Into<String>) -> Self {
        Error::DanglingReference {
            context: context.into(),
            kind,
            id: id.into(),
        }
    }

    /// True for failures reading or writing files.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io { .. })
    }
}
