use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty point set")]
    EmptyPointSet,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("duplicate point at ({0}, {1}) in category {2}")]
    DuplicatePoint(f64, f64, usize),
    #[error("geometry failure: {0}")]
    Geometry(String),
    #[error("stacking too entangled: hyperedge with {0} shapes exceeds brute-force cap")]
    StackingTooEntangled(usize),
    #[error("missing palette entry for category {0}")]
    MissingPaletteEntry(usize),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("degenerate bounding box")]
    DegenerateBbox,
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
