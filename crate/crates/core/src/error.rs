use thiserror::Error;

/// Errors produced by the link-data constructors and the numeric routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("non-square matrix at level {level}: {rows}x{cols}")]
    NonSquare { level: usize, rows: usize, cols: usize },

    #[error("ragged matrix: row {row} has {len} entries, expected {expected}")]
    Ragged { row: usize, len: usize, expected: usize },

    #[error("block sizes sum to {sum} but the level {level} matrix has side {side}")]
    BlockMismatch { level: usize, sum: usize, side: usize },

    #[error("link dimension n = {0} must be a positive odd integer")]
    EvenDimension(usize),

    #[error("non-integer entry {value} at level {level}, position ({row}, {col})")]
    NonInteger {
        level: usize,
        row: usize,
        col: usize,
        value: String,
    },

    #[error("level {0} is missing")]
    MissingLevel(usize),

    #[error("unexpected level {level} for a link of dimension n = {n}")]
    UnexpectedLevel { level: usize, n: usize },

    #[error("levels {0} and {1} must carry the same block sizes")]
    DualSizeMismatch(usize, usize),

    #[error("at least one component is required")]
    NoComponents,

    #[error("component count mismatch: {0} vs {1}")]
    ComponentMismatch(usize, usize),

    #[error("link dimension mismatch: n = {0} vs n = {1}")]
    LinkDimensionMismatch(usize, usize),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not unimodular (det = {0})")]
    NotUnimodular(String),

    #[error("matrix mixes blocks at entry ({row}, {col})")]
    MixesBlocks { row: usize, col: usize },

    #[error("component index {index} out of range for m = {m}")]
    ComponentIndex { index: usize, m: usize },

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("representation point is not unitary (max deviation {0:e})")]
    NotUnitary(f64),

    #[error("evaluation point has a zero coordinate at index {0}")]
    ZeroCoordinate(usize),

    #[error("non-finite entry in matrix")]
    NonFinite,

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
