use thiserror::Error;

/// Errors surfaced by the exact-arithmetic layers.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on the inputs failed.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A configured resource cap would be exceeded.
    #[error("resource cap exceeded: {task} needs {needed}, cap is {cap}")]
    CapExceeded {
        task: &'static str,
        needed: u128,
        cap: u128,
    },

    /// A discriminant vanished identically where a curve was expected.
    #[error("degenerate curve: {0}")]
    Degenerate(String),

    /// A quantity is not determined by the requested method.
    #[error("not determined: {0}")]
    NotDetermined(String),
}

pub type Result<T> = std::result::Result<T, Error>;
