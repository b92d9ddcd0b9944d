use thiserror::Error;

/// Errors raised by the structured algorithms and the table oracle.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vector width {actual} does not match ambient width {expected}")]
    WidthMismatch { expected: u32, actual: u32 },

    #[error("width {0} exceeds the 62-bit limit")]
    WidthTooLarge(u32),

    #[error("mask {mask:#b} does not fit in {width} bits")]
    MaskOutOfRange { mask: u64, width: u32 },

    /// An enumeration or brute-force size limit was hit. Never truncated silently.
    #[error("guard `{guard}` exceeded: {actual} > {limit}")]
    GuardExceeded {
        guard: &'static str,
        limit: u64,
        actual: u64,
    },

    #[error("malformed table: {0}")]
    MalformedTable(String),

    #[error("subset must be nonempty")]
    EmptySubset,

    #[error("subset is not closed")]
    NotClosed,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn guard(name: &'static str, limit: u64, actual: u64) -> Result<()> {
    if actual > limit {
        Err(Error::GuardExceeded {
            guard: name,
            limit,
            actual,
        })
    } else {
        Ok(())
    }
}
