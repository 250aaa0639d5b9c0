use thiserror::Error;

/// Errors raised while validating physical inputs or running searches.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("four-momentum is off shell: p\u{b2} = {actual}, expected {expected}")]
    OffShell { actual: f64, expected: f64 },

    #[error("four-vector is not lightlike: k\u{b2} = {0}")]
    NotLightlike(f64),

    #[error("energy component must be positive, got {0}")]
    NonPositiveEnergy(f64),

    #[error("mass must be positive, got {0}")]
    NonPositiveMass(f64),

    #[error("parent mass {parent} must exceed daughter mass {daughter}")]
    MassOrdering { parent: f64, daughter: f64 },

    #[error("direction is not a unit vector (|n| = {0})")]
    NotUnit(f64),

    #[error("directions are not orthogonal (a\u{b7}n = {0})")]
    NotOrthogonal(f64),

    #[error("Bloch vector length {0} exceeds 1")]
    BlochOutOfRange(f64),

    #[error("gamma matrix index {0} out of range 0..=3")]
    GammaIndex(usize),

    #[error("matrix is not a proper orthochronous Lorentz transformation (residual {0})")]
    NotLorentz(f64),

    #[error("matrix is not a proper rotation (residual {0})")]
    NotRotation(f64),

    #[error("objective returned a non-finite value {0}")]
    NonFinite(f64),

    #[error("trace sum has an imaginary residue {residue} (value {value})")]
    ImaginaryResidue { residue: f64, value: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
