//! Three-valued answers for semi-decision procedures.

use serde::Serialize;

/// What was searched before giving up.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Exhausted {
    pub searched: String,
}

impl Exhausted {
    pub fn new(searched: impl Into<String>) -> Self {
        Exhausted { searched: searched.into() }
    }
}

/// Proven answers always carry a certificate that can be checked without
/// rerunning the search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "certificate")]
pub enum Verdict<T, F = T> {
    ProvenTrue(T),
    ProvenFalse(F),
    Unknown(Exhausted),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    ProvenTrue,
    ProvenFalse,
    Unknown,
}

impl<T, F> Verdict<T, F> {
    pub fn status(&self) -> Status {
        match self {
            Verdict::ProvenTrue(_) => Status::ProvenTrue,
            Verdict::ProvenFalse(_) => Status::ProvenFalse,
            Verdict::Unknown(_) => Status::Unknown,
        }
    }

    pub fn is_proven_true(&self) -> bool {
        matches!(self, Verdict::ProvenTrue(_))
    }

    pub fn is_proven_false(&self) -> bool {
        matches!(self, Verdict::ProvenFalse(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown(_))
    }

    pub fn proven_true(self) -> Option<T> {
        match self {
            Verdict::ProvenTrue(t) => Some(t),
            _ => None,
        }
    }
}
