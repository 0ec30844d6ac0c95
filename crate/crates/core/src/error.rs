use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid binary string {0:?}")]
    ParseBinary(String),
    #[error("invalid decimal string {0:?}")]
    ParseDecimal(String),
    #[error("window width {0} outside 1..=64")]
    WindowTooWide(u32),
    #[error("slice {start}..{end} out of range for word of length {len}")]
    SliceOutOfRange { start: usize, end: usize, len: usize },
    #[error("value needs {value_bits} bits, word length is {len}")]
    WordTooShort { value_bits: usize, len: usize },
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error("no product bound is known for s(ab) = {0}; only 2 and 3 are supported")]
    UnsupportedProductWeight(u32),
    #[error("result file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
