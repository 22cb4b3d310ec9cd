//! Error type shared across the crate.
//!
//! Variants classify failures the way callers need to react to them: bad
//! inputs that a front end should report as configuration mistakes, limits
//! that guard memory, and domain or numerical violations detected while
//! computing.

use alloc::string::String;
use core::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Invalid construction input: unknown preset, bad map parameters,
    /// malformed polygon, unusable option value.
    Config(String),
    /// A value fell outside its permitted range (depth, resolution, scale).
    Bounds(String),
    /// A configured cap would be exceeded; the message states the estimate.
    Resource(String),
    /// The query point or path violates a geometric precondition.
    Domain(String),
    /// An internal consistency check on floating point results failed.
    Numerical(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    pub fn message(&self) -> &str {
        match self {
            Error::Config(m)
            | Error::Bounds(m)
            | Error::Resource(m)
            | Error::Domain(m)
            | Error::Numerical(m) => m,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::Config(_) => "config",
            Error::Bounds(_) => "bounds",
            Error::Resource(_) => "resource",
            Error::Domain(_) => "domain",
            Error::Numerical(_) => "numerical",
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} error: {}", self.kind(), self.message())
    }
}

impl core::error::Error for Error {}
