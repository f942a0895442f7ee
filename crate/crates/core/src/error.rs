use alloc::string::String;

/// Errors raised by the exact-arithmetic kernels and the branch pipelines.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("scalars live in different cyclotomic fields (orders {left} and {right})")]
    FieldMismatch { left: u32, right: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("{what} has no root representable in Q(zeta_{order})")]
    NotRepresentable { what: String, order: u32 },
    #[error("a primitive {l}-th root of unity is not available in Q(zeta_{order})")]
    RootOfUnityOutsideField { l: u32, order: u32 },
    #[error("parametrization is not irreducible: gcd of n and support is {gcd}")]
    NotIrreducible { gcd: u32 },
    #[error("irreducibility cannot be certified below truncation {trunc}")]
    IrreducibilityUndetermined { trunc: u32 },
    #[error("truncation exhausted: {context} (need order {needed}, have {available})")]
    TruncationExhausted {
        context: &'static str,
        needed: u32,
        available: u32,
    },
    #[error("substitution needs inner series of positive order")]
    UnitSubstitution,
    #[error("series of order {ord} is not invertible under composition")]
    NotInvertible { ord: u32 },
    #[error("order {ord} is not divisible by {n}")]
    OrderNotDivisible { ord: u32, n: u32 },
    #[error("invalid parametrization: {0}")]
    InvalidParam(String),
    #[error("vector field is not singular at the centre")]
    NotSingular,
    #[error("vector field is not nilpotent")]
    NotNilpotent,
    #[error("jet is not unipotent")]
    NotUnipotent,
    #[error("linear part sends the tangent line of the branch to the OY axis")]
    TangentConeViolation,
    #[error("no regular point reached after {depth} blow-ups (branch invariant up to this depth)")]
    MaxDepthExceeded { depth: u32 },
    #[error("no nilpotent witness with contact exponent {j}")]
    NoWitness { j: u32 },
    #[error("deformation coefficient at exponent {j} is not affine in epsilon")]
    NotAffine { j: u32 },
    #[error("cross-check failed: {0}")]
    CrossCheck(String),
    #[error("monomial x^{i} y^{j} e{target} is not resonant")]
    NotResonant { i: u32, j: u32, target: u8 },
    #[error("parse error: {0}")]
    Parse(String),
}

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Input,
    Mathematical,
    Internal,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Parse(_) | Error::InvalidParam(_) | Error::FieldMismatch { .. } => {
                ErrorKind::Input
            }
            Error::CrossCheck(_) | Error::NoWitness { .. } | Error::NotAffine { .. } => {
                ErrorKind::Internal
            }
            _ => ErrorKind::Mathematical,
        }
    }

    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::FieldMismatch { .. } => "field-mismatch",
            Error::DivisionByZero => "division-by-zero",
            Error::NotRepresentable { .. } => "not-representable",
            Error::RootOfUnityOutsideField { .. } => "root-of-unity-outside-field",
            Error::NotIrreducible { .. } => "not-irreducible",
            Error::IrreducibilityUndetermined { .. } => "irreducibility-undetermined",
            Error::TruncationExhausted { .. } => "truncation-exhausted",
            Error::UnitSubstitution => "unit-substitution",
            Error::NotInvertible { .. } => "not-invertible",
            Error::OrderNotDivisible { .. } => "order-not-divisible",
            Error::InvalidParam(_) => "invalid-param",
            Error::NotSingular => "not-singular",
            Error::NotNilpotent => "not-nilpotent",
            Error::NotUnipotent => "not-unipotent",
            Error::TangentConeViolation => "tangent-cone",
            Error::MaxDepthExceeded { .. } => "max-depth-exceeded",
            Error::NoWitness { .. } => "no-witness",
            Error::NotAffine { .. } => "not-affine",
            Error::CrossCheck(_) => "cross-check",
            Error::NotResonant { .. } => "not-resonant",
            Error::Parse(_) => "parse",
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
