use std::fmt;
use std::io;

/// Errors shared by every module in this crate.
///
/// The variants are grouped the way the CLI maps them to exit codes:
/// bad arguments, exhausted resource limits, and certification failures
/// are distinct outcomes and must stay distinguishable.
#[derive(Debug)]
pub enum Error {
    /// A precondition on the inputs was violated.
    BadArgument(String),
    /// A configurable limit (depth cap, materialization cap, refinement cap)
    /// would be exceeded.
    CapExceeded {
        what: &'static str,
        requested: u64,
        cap: u64,
    },
    /// A survival scan ran out of depth before finding a violation.
    HorizonExhausted { max_depth: u32 },
    /// Post-hoc certification of a constructed sequence failed.
    CertificationFailed { index: usize, detail: String },
    /// Cache file I/O failed.
    Io(io::Error),
    /// A cache file exists but does not parse.
    MalformedCache(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::BadArgument(msg) => write!(f, "bad argument: {msg}"),
            Error::CapExceeded {
                what,
                requested,
                cap,
            } => write!(f, "{what} {requested} exceeds cap {cap}"),
            Error::HorizonExhausted { max_depth } => {
                write!(f, "no violation found within depth {max_depth}")
            }
            Error::CertificationFailed { index, detail } => {
                write!(f, "certification failed at index {index}: {detail}")
            }
            Error::Io(e) => write!(f, "io error: {e}"),
            Error::MalformedCache(msg) => write!(f, "malformed cache file: {msg}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<io::Error> for Error {
    fn from(e: io::Error) -> Self {
        Error::Io(e)
    }
}
