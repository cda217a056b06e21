use thiserror::Error;

/// A violated claim from the classification argument, carrying the tuple
/// (if any) at which the check broke.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Falsifier {
    pub claim: &'static str,
    pub detail: String,
    pub tuple: Option<Vec<u8>>,
}

impl std::fmt::Display for Falsifier {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.claim, self.detail)?;
        if let Some(t) = &self.tuple {
            write!(f, " at {t:?}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("universe size {0} outside 2..=8")]
    InvalidUniverse(usize),
    #[error("arity {0} outside 1..={max}", max = crate::algebra::MAX_ARITY)]
    InvalidArity(usize),
    #[error("coordinate {coord} out of range for arity {arity}")]
    CoordinateOutOfRange { coord: usize, arity: usize },
    #[error("element {element} out of range for universe of size {size}")]
    ElementOutOfRange { element: usize, size: usize },
    #[error("subset mask {mask:#010b} has bits outside a universe of size {size}")]
    MaskOutOfRange { mask: u8, size: usize },
    #[error("table has {got} entries, expected {expected}")]
    TableLength { got: usize, expected: usize },
    #[error("universe mismatch: {0} vs {1}")]
    UniverseMismatch(usize, usize),
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("not a permutation of 1..={0}")]
    BadPermutation(usize),
    #[error("operation required, got a {0} table")]
    NotAnOperation(&'static str),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("fragment at arity {0} is not saturated")]
    Unsaturated(usize),
    #[error("falsifier: {0}")]
    Falsifier(Falsifier),
}

impl Error {
    pub(crate) fn falsifier(claim: &'static str, detail: impl Into<String>, tuple: Option<Vec<u8>>) -> Self {
        Error::Falsifier(Falsifier {
            claim,
            detail: detail.into(),
            tuple,
        })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
