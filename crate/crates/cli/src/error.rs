use thiserror::Error;

pub type Result<T, E = CliError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Model(#[from] colordecode::Error),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unsupported image: {0}")]
    Format(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// 1 for usage errors, 2 for anything wrong with the data.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            _ => 2,
        }
    }
}

impl From<image::ImageError> for CliError {
    fn from(e: image::ImageError) -> Self {
        use image::ImageError as E;
        match e {
            E::IoError(io) if io.kind() == std::io::ErrorKind::UnexpectedEof => {
                CliError::Parse(format!("truncated image data: {io}"))
            }
            E::IoError(io) => CliError::Io(io),
            E::Unsupported(u) => CliError::Format(u.to_string()),
            other => CliError::Parse(other.to_string()),
        }
    }
}
