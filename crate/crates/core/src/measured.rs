use alloc::string::String;
use serde::{Deserialize, Serialize};

/// A value that may be missing from a report, with the reason it is missing.
///
/// Missing inputs never turn into zeros: a metric (or report section)
/// either carries its value or says why it could not be computed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", content = "value", rename_all = "lowercase")]
pub enum Measured<T> {
    Available(T),
    /// The inputs needed for this value were not supplied.
    Unavailable(String),
    /// The toolkit does not implement this measurement.
    Unsupported(String),
}

impl<T> Measured<T> {
    pub fn value(&self) -> Option<&T> {
        match self {
            Measured::Available(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_available(&self) -> bool {
        matches!(self, Measured::Available(_))
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Measured<U> {
        match self {
            Measured::Available(v) => Measured::Available(f(v)),
            Measured::Unavailable(r) => Measured::Unavailable(r),
            Measured::Unsupported(r) => Measured::Unsupported(r),
        }
    }

    pub fn unavailable(reason: impl Into<String>) -> Self {
        Measured::Unavailable(reason.into())
    }
}
