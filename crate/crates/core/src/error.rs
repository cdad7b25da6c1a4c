//! Crate-wide error type.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeomError {
    DivisionByZero,
    MixedFieldInstances,
    NotPrime(u64),
    Parse(String),
    ZeroVector,
    SingularMatrix,
    EqualArguments,
    NotCollinear,
    NotConcurrent,
    TriplePoint,
    DegenerateTriple,
    NotGeneric,
    NotAFrame,
    NoProjection,
    PreconditionViolated(String),
    Internal(String),
}

impl fmt::Display for GeomError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeomError::DivisionByZero => write!(f, "division by zero"),
            GeomError::MixedFieldInstances => {
                write!(f, "scalars from different field instances were mixed")
            }
            GeomError::NotPrime(p) => write!(f, "{} is not prime", p),
            GeomError::Parse(msg) => write!(f, "parse error: {}", msg),
            GeomError::ZeroVector => write!(f, "zero vector"),
            GeomError::SingularMatrix => write!(f, "singular matrix"),
            GeomError::EqualArguments => write!(f, "arguments must be distinct"),
            GeomError::NotCollinear => write!(f, "points are not collinear"),
            GeomError::NotConcurrent => write!(f, "lines are not concurrent"),
            GeomError::TriplePoint => {
                write!(f, "quadruple has a triple point; cross ratio undefined")
            }
            GeomError::DegenerateTriple => write!(f, "triple of flags is degenerate"),
            GeomError::NotGeneric => write!(f, "configuration is not generic"),
            GeomError::NotAFrame => write!(f, "tuple is not a projective frame"),
            GeomError::NoProjection => write!(f, "no projection onto the flat exists"),
            GeomError::PreconditionViolated(msg) => write!(f, "precondition violated: {}", msg),
            GeomError::Internal(msg) => write!(f, "internal verification failure: {}", msg),
        }
    }
}

impl std::error::Error for GeomError {}

pub type Result<T> = std::result::Result<T, GeomError>;
