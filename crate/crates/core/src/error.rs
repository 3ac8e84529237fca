//! Error type shared by all simulator stages.

use std::fmt;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Invalid argument or configuration value.
    Config(String),
    /// A matrix inversion hit a numerically singular channel; the frame
    /// driver reacts by redrawing the fading realization.
    SingularChannel,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Config(msg) => write!(f, "{msg}"),
            Error::SingularChannel => write!(f, "singular channel"),
        }
    }
}

impl std::error::Error for Error {}
