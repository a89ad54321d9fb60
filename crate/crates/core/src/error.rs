use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// The input is a scalar multiple of the identity, so `rho -> Tr(rho A)`
    /// is constant and there is no plane to project on.
    #[error("degenerate projection: matrix is a multiple of the identity")]
    DegenerateProjection,

    #[error("frame error: {0}")]
    Frame(String),

    #[error("no samples fell inside the cross-section strip")]
    EmptySection,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("numerical contract violated: {0}")]
    Contract(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }
}
