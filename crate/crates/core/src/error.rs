use thiserror::Error;

/// Identifier of an eigenvalue exclusion rule, as reported on rejection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum ExclusionRule {
    /// `mu = u`: the Stickelberger element rules this eigenvalue out.
    MuEqualsU,
    /// `mu = 1`: would force p to divide the class number of Q.
    MuEqualsOne,
    /// `mu = -1`: classes are annihilated by `sigma + 1`.
    MuEqualsMinusOne,
    /// Optional Vandiver-style exclusion `mu^((p-1)/2) = 1`.
    EvenCharacter,
    /// Not a residue in `[1, p)`.
    OutOfRange,
    /// Same residue listed twice.
    Duplicate,
}

impl ExclusionRule {
    pub fn id(self) -> &'static str {
        match self {
            ExclusionRule::MuEqualsU => "mu-equals-u",
            ExclusionRule::MuEqualsOne => "mu-equals-one",
            ExclusionRule::MuEqualsMinusOne => "mu-equals-minus-one",
            ExclusionRule::EvenCharacter => "even-character",
            ExclusionRule::OutOfRange => "out-of-range",
            ExclusionRule::Duplicate => "duplicate",
        }
    }
}

impl std::fmt::Display for ExclusionRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("division by zero polynomial")]
    DivisionByZero,
    #[error("eigenvalue {mu} rejected by rule {rule}")]
    Rejected { mu: u64, rule: ExclusionRule },
    #[error("element is not invertible (positive pi-adic valuation)")]
    NotInvertible,
    #[error("inexact division: valuation {valuation} is below {wanted}")]
    InexactDivision { valuation: u64, wanted: u64 },
    #[error("insufficient precision: asked for pi^{wanted}, element known to pi^{cap}")]
    InsufficientPrecision { wanted: u64, cap: u64 },
    #[error("{0} is out of range")]
    OutOfRange(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("theorem violation: {0}")]
    Violation(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
