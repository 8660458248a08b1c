use crate::domain::DomainKind;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("coordinates must be finite")]
    NonFinite,
    #[error("point is not in {0}")]
    OutsideDomain(DomainKind),
    #[error("Möbius denominator vanishes (modulus {0:e})")]
    Singularity(f64),
    #[error("not an element of G(n): {0}")]
    InvalidGroupElement(&'static str),
    #[error("normalization did not converge (residual {residual:e})")]
    NormalizationFailure { residual: f64 },
    #[error("closed forms disagree by {0:e}")]
    FormulaInconsistency(f64),
    #[error("no certified disc found")]
    SearchFailure,
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}
