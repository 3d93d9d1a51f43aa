use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TydError {
    #[error("n must be at least 5 (the construction requires n > 4), got {0}")]
    SmallN(i32),
    #[error("index {index} out of range for n={n}")]
    IndexOutOfRange { index: i32, n: i32 },
    #[error("size mismatch: n={0} vs n={1}")]
    SizeMismatch(i32, i32),
    #[error("argument is not tau-fixed")]
    NotTauFixed,
    #[error("generator {0} does not exist")]
    NoSuchGenerator(String),
    #[error("invalid ad-chain {0}")]
    InvalidChain(String),
    #[error("{0}")]
    NotProportional(String),
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("catalog error: {0}")]
    Catalog(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("oracle self-test failed: {0}")]
    Oracle(String),
}

pub type Result<T> = std::result::Result<T, TydError>;

pub(crate) fn check_n(n: i32) -> Result<()> {
    if n < 5 {
        Err(TydError::SmallN(n))
    } else {
        Ok(())
    }
}
