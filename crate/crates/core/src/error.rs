use thiserror::Error;

use crate::poly::Poly;

/// Every failure the library can report.
///
/// Variants that carry a [`Poly`] hold a witness: the nonzero residue that
/// made a certificate fail.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live over different fields ({0} vs {1})")]
    DescriptorMismatch(String, String),
    #[error("automorphism {0} is not supported over {1}")]
    UnsupportedAutomorphism(String, String),
    #[error("operation requires a finite field, got {0}")]
    UnsupportedField(String),
    #[error("{0} is not irreducible")]
    NotIrreducible(Poly),
    #[error("{0} is not monic")]
    NotMonic(Poly),
    #[error("elements belong to different rings")]
    RingMismatch,
    #[error("element {0} is not a unit")]
    NotAUnit(Poly),
    #[error("cannot project to level {level} (ring power is {power})")]
    BadTarget { level: usize, power: usize },
    #[error("morphism is not well defined: certificate residue {0} is nonzero")]
    NotWellDefined(Poly),
    #[error("{0} is not separable (derivative vanishes)")]
    NotSeparable(Poly),
    #[error("inexact division: remainder {0}")]
    InexactDivision(Poly),
    #[error("X-image does not define a morphism: remainder {0}")]
    NotAMorphism(Poly),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("gcd criterion ({gcd}) and derivative criterion ({derivative}) disagree")]
    CriterionDisagreement { gcd: bool, derivative: bool },
    #[error("ring has {0} elements, above the exhaustive-check cap")]
    TooLarge(u128),
    #[error("search budget exceeded: {0} candidates")]
    BudgetExceeded(u128),
    #[error("parse error at `{token}`: {message}")]
    Parse { token: String, message: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(token: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            token: token.into(),
            message: message.into(),
        }
    }

    /// Short variant name, used by the CLI for machine-readable errors.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "DivisionByZero",
            Error::DescriptorMismatch(..) => "DescriptorMismatch",
            Error::UnsupportedAutomorphism(..) => "UnsupportedAutomorphism",
            Error::UnsupportedField(..) => "UnsupportedField",
            Error::NotIrreducible(..) => "NotIrreducible",
            Error::NotMonic(..) => "NotMonic",
            Error::RingMismatch => "RingMismatch",
            Error::NotAUnit(..) => "NotAUnit",
            Error::BadTarget { .. } => "BadTarget",
            Error::NotWellDefined(..) => "NotWellDefined",
            Error::NotSeparable(..) => "NotSeparable",
            Error::InexactDivision(..) => "InexactDivision",
            Error::NotAMorphism(..) => "NotAMorphism",
            Error::DegreeMismatch(..) => "DegreeMismatch",
            Error::CriterionDisagreement { .. } => "CriterionDisagreement",
            Error::TooLarge(..) => "TooLarge",
            Error::BudgetExceeded(..) => "BudgetExceeded",
            Error::Parse { .. } => "ParseError",
            Error::InvalidArgument(..) => "InvalidArgument",
        }
    }
}
