use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty input")]
    Empty,

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("vectors must have at least one entry")]
    ZeroDimension,

    #[error("non-finite entry at position {0}")]
    NonFinite(usize),

    #[error("xs has {xs} rows but ys has {ys}")]
    RowCountMismatch { xs: usize, ys: usize },

    #[error("kernel bandwidth must be positive and finite, got {0}")]
    InvalidBandwidth(f64),

    #[error("kernel bound must be positive and finite, got {0}")]
    InvalidBound(f64),

    #[error("self-similarity {value} exceeds the declared kernel bound {bound}")]
    BoundViolated { value: f64, bound: f64 },

    #[error("significance level must lie strictly between 0 and 1, got {0}")]
    InvalidAlpha(f64),

    #[error("sample size must be at least 1")]
    ZeroSampleSize,

    #[error(
        "sample sizes differ (m = {m}, n = {n}); the critical value is only defined for m = n"
    )]
    UnequalSampleSizes { m: usize, n: usize },

    #[error("need at least {min} trials, got {got}")]
    TooFewTrials { min: usize, got: usize },

    #[error("sign vector has length {actual}, sample has {expected} rows")]
    SignLength { expected: usize, actual: usize },

    #[error("sign entries must be +1 or -1, got {0}")]
    InvalidSign(i8),

    #[error("blank image cannot be normalized")]
    BlankImage,

    #[error("raster must have {expected} pixels, got {actual}")]
    RasterSize { expected: usize, actual: usize },

    #[error("label {0} is not a digit")]
    InvalidLabel(u8),

    #[error("{images} images but {labels} labels")]
    CountMismatch { images: usize, labels: usize },

    #[error("digit {0} does not occur in the image set")]
    MissingClass(u8),
}

pub type Result<T> = core::result::Result<T, Error>;
