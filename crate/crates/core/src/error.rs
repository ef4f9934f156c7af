use alloc::string::String;
use core::fmt;

/// Argument and validation failures raised by the pure analysis routines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A year range whose lower bound exceeds its upper bound.
    InvertedWindow {
        min: i32,
        max: i32,
    },
    /// `share` was asked for a percentage of nothing.
    ZeroWhole,
    /// `share` got a part larger than its whole.
    PartExceedsWhole {
        part: u64,
        whole: u64,
    },
    InvalidArgument(String),
    InvalidSpec(String),
    InvalidConfig(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvertedWindow { min, max } => write!(f, "inverted year window {min}:{max}"),
            Error::ZeroWhole => f.write_str("share of an empty whole"),
            Error::PartExceedsWhole { part, whole } => {
                write!(f, "part {part} exceeds whole {whole}")
            }
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::InvalidSpec(msg) => write!(f, "invalid generator spec: {msg}"),
            Error::InvalidConfig(msg) => write!(f, "invalid classifier config: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
