use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A table is missing an entry it is required to have.
    #[error("structural error: {0}")]
    Structural(String),
    #[error("composition error: output color of `{inner}` is {found}, slot {slot} of `{outer}` expects {expected}")]
    ColorMismatch {
        outer: String,
        slot: usize,
        inner: String,
        expected: String,
        found: String,
    },
    #[error("slot {slot} out of range for operation `{op}` of arity {arity}")]
    SlotOutOfRange { op: String, slot: usize, arity: usize },
    #[error("composite of `{outer}` and `{inner}` lies outside the truncation")]
    Truncated { outer: String, inner: String },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("enumeration budget of {budget} exceeded after {partial} results")]
    Budget { budget: usize, partial: usize },
    #[error("size limit exceeded: {0}")]
    Overflow(String),
    #[error("cap exceeded: {what} (partial count {partial})")]
    Cap { what: String, partial: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
