use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Table dimensions or index ranges do not match their declared sizes.
    #[error("structural error: {0}")]
    Structural(String),

    /// A symbol required on an admissible index tuple is absent.
    #[error("missing {symbol} entry at {indices}")]
    Incomplete { symbol: &'static str, indices: String },

    #[error("singular F block at (a,b,c,d) = {0:?}")]
    SingularBlock([usize; 4]),

    #[error("validation failed: {0}")]
    Invalid(String),

    #[error("triangulation error: {0}")]
    Triangulation(String),

    #[error("pachner move rejected: {0}")]
    Move(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{limit} limit exceeded after {nodes} search nodes ({elapsed_ms} ms); partial value {partial_re:+.6e}{partial_im:+.6e}i")]
    GuardExceeded { limit: &'static str, nodes: u64, elapsed_ms: u128, partial_re: f64, partial_im: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
