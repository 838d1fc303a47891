use std::path::PathBuf;

/// Error type shared by every module in this crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// 64-bit arithmetic would overflow. The largest value a species table
    /// ever forms is frontier squared, so this triggers long before memory
    /// does on absurd inputs.
    #[error("u64 overflow while {context}")]
    Overflow { context: &'static str },

    /// A materialization or allocation guard was exceeded.
    #[error("capacity exceeded: {what}")]
    Capacity { what: String },

    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {what}")]
    Domain { what: String },

    /// The smallest-missing search scanned past twice the frontier without
    /// finding a candidate. This cannot happen for a table produced by the
    /// public constructors; it indicates a corrupted state.
    #[error("no missing number in ({frontier}, {bound}): species table is inconsistent")]
    WindowExhausted { frontier: u64, bound: u64 },

    /// Filesystem failure, tagged with the path it occurred on.
    #[error("io error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Requested RNG algorithm is not one this crate implements.
    #[error("unknown rng algorithm {name:?} (supported: {supported})")]
    UnknownAlgorithm { name: String, supported: &'static str },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn domain(what: impl Into<String>) -> Self {
        Error::Domain { what: what.into() }
    }

    pub(crate) fn capacity(what: impl Into<String>) -> Self {
        Error::Capacity { what: what.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
