use thiserror::Error;

/// Errors raised by the numeric and arithmetic routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma pole at non-positive integer {0}")]
    GammaPole(f64),

    #[error("zeta pole at s = 1")]
    ZetaPole,

    #[error("local zeta factor pole: p^x = 1")]
    LocalZetaPole,

    #[error("H kernel domain: need 0 < Re w < Re z < 1, got w = {w}, z = {z}")]
    HKernelDomain { w: String, z: String },

    #[error("epsilon undefined for imprimitive character")]
    Imprimitive,

    #[error("character is odd; the even functional equation does not apply")]
    OddCharacter,

    #[error("modulus {0} not supported here")]
    Modulus(u64),

    #[error("degenerate shifts; use Q_total or perturb ({0})")]
    DegenerateShifts(String),

    #[error("cancellation exceeds precision budget: {0}")]
    PrecisionBudget(String),

    #[error("non-convergent parameter regime: {0}")]
    NonConvergent(String),

    #[error("empty family: no even primitive characters mod {0}")]
    EmptyFamily(u64),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
