use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A configured resource limit would be exceeded.
    #[error("resource cap exceeded for {what}: requested {requested}, limit {limit}")]
    ResourceCap {
        what: &'static str,
        requested: u128,
        limit: u128,
    },

    /// An exact computation produced a value that cannot arise from a correct
    /// implementation (negative or fractional multiplicity, overflow).
    #[error("internal arithmetic failure: {0}")]
    Arithmetic(String),
}

impl Error {
    pub fn is_resource_cap(&self) -> bool {
        matches!(self, Error::ResourceCap { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
