use thiserror::Error;

/// Errors surfaced by codec construction, encoding, and decoding.
#[derive(Debug, Error)]
pub enum CodecError {
    /// Two symbols of different byte widths were combined.
    #[error("symbol width mismatch: {left} vs {right} bytes")]
    WidthMismatch { left: usize, right: usize },

    /// A payload does not fit the grid it was asked to fill.
    #[error("payload of {payload} bytes exceeds grid capacity of {capacity} bytes")]
    PayloadTooLarge { payload: usize, capacity: usize },

    /// A parameter violates a documented precondition.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// Input projections are malformed relative to the code spec
    /// (wrong length, wrong direction, duplicate index, wrong width).
    #[error("malformed projection input: {0}")]
    Structure(String),

    /// Decoded data fails the post-decode re-encode consistency check,
    /// or container payloads disagree with each other.
    #[error("inconsistent projection data: {0}")]
    Inconsistent(String),

    /// A bound's hypothesis does not hold for the supplied arguments.
    /// The payload names the failing check.
    #[error("bound hypothesis failed: {0}")]
    Hypothesis(&'static str),
}
