use std::fmt;

use serde::{Serialize, Serializer};

/// A real value that may be symbolically unbounded.
///
/// Matched postquench fields diverge when the prequench field hits a grid
/// cosine exactly, and so do the corresponding mode energies. The sign of
/// such a divergence depends on the side of approach, so none is recorded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Extended {
    Finite(f64),
    Unbounded,
}

impl Extended {
    pub fn finite(self) -> Option<f64> {
        match self {
            Extended::Finite(v) => Some(v),
            Extended::Unbounded => None,
        }
    }

    pub fn is_unbounded(self) -> bool {
        matches!(self, Extended::Unbounded)
    }

    /// `Unbounded` maps to positive infinity.
    pub fn to_f64(self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }
}

impl From<f64> for Extended {
    fn from(v: f64) -> Self {
        if v.is_finite() {
            Extended::Finite(v)
        } else {
            Extended::Unbounded
        }
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(v) => fmt::Display::fmt(v, f),
            Extended::Unbounded => f.pad("inf"),
        }
    }
}

impl Serialize for Extended {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Extended::Finite(v) => serializer.serialize_f64(*v),
            Extended::Unbounded => serializer.serialize_str("inf"),
        }
    }
}
