use thiserror::Error;

/// Failures raised by the numeric layers (dual algebra, motion, acceleration).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Division by a dual number whose real part vanishes; such numbers are
    /// zero divisors of the dual ring and have no inverse.
    #[error("dual divisor has a vanishing real part ({re:e})")]
    ZeroRealPart { re: f64 },

    #[error("scalar function has a pole at t = {t}")]
    PoleAtT { t: f64 },

    #[error("denominator polynomial has a zero real leading coefficient")]
    InvalidDenominator,

    /// The real part of the vector lies on the null cone (or is zero), where
    /// the dual Lorentzian norm is undefined.
    #[error("dual norm undefined: real part is lightlike or zero")]
    NullVector,

    #[error("matrix is singular in its real part (|det| = {det:e})")]
    SingularRealPart { det: f64 },

    #[error("matrix is not Lorentz anti-symmetric (residual {residual:e})")]
    NotAntisymmetric { residual: f64 },

    /// H'(t) is singular: there is no unique instantaneous rotation centre.
    #[error("H' is singular at t = {t}")]
    SingularHprime { t: f64 },

    #[error("invalid family constants: {0}")]
    InvalidFamilyConstants(String),

    #[error("invalid motion: {0}")]
    InvalidMotion(String),
}

pub type Result<T> = std::result::Result<T, Error>;
