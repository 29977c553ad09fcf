use thiserror::Error;

/// Failures raised by the transforms and reconstruction routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("length {0} is not a power of two in 1..=2^30")]
    InvalidLength(usize),

    #[error("level {level} is outside 0..={max}")]
    InvalidLevel { level: u32, max: u32 },

    #[error("offset {offset} is outside 0..{limit}")]
    InvalidOffset { offset: usize, limit: usize },

    #[error("spectrum index {index} is outside 0..{len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("support length {m} is ambiguous for a vector of length {len} (need m <= len/2)")]
    AmbiguousSupport { m: usize, len: usize },

    #[error("support length {m} is outside 1..={len}")]
    InvalidSupportLength { m: usize, len: usize },

    #[error("every odd-indexed Fourier value is zero")]
    ZeroSignal,

    #[error("{0} has no inverse modulo a power of two")]
    NotInvertible(u64),

    #[error("reference Fourier value is zero, shift quotient undefined")]
    DegenerateQuotient,

    #[error("shift quotient phase is {distance:.3} steps from the nearest root of unity")]
    NoisyQuotient { distance: f64 },

    #[error("no z-vectors supplied for averaging")]
    NoVectors,

    #[error("cannot calibrate noise to a finite SNR against a zero spectrum")]
    CannotCalibrate,

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
