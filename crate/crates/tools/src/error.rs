use std::path::{Path, PathBuf};

use fcm_core::FcmError;

pub type Result<T, E = ToolError> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum ToolError {
    #[error("{}: {source}", .path.display())]
    Io { path: PathBuf, source: std::io::Error },
    /// The file does not follow the expected layout.
    #[error("{}: {message}", .path.display())]
    Schema { path: PathBuf, message: String },
    /// The file parsed but its contents were rejected by the model.
    #[error("{}: {source}", .path.display())]
    Model { path: PathBuf, source: FcmError },
    #[error(transparent)]
    Core(#[from] FcmError),
    #[error("{0}")]
    Usage(String),
}

impl ToolError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io { path: path.to_path_buf(), source }
    }

    pub fn schema(path: &Path, message: impl Into<String>) -> Self {
        Self::Schema { path: path.to_path_buf(), message: message.into() }
    }

    pub fn model(path: &Path, source: FcmError) -> Self {
        Self::Model { path: path.to_path_buf(), source }
    }

    /// 2 for numerical failures, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Model { source, .. } | Self::Core(source) if source.is_numerical() => 2,
            _ => 1,
        }
    }
}

/// Attach `path` to a core error.
pub(crate) trait AtPath<T> {
    fn at(self, path: &Path) -> Result<T>;
}

impl<T> AtPath<T> for std::result::Result<T, FcmError> {
    fn at(self, path: &Path) -> Result<T> {
        self.map_err(|e| ToolError::model(path, e))
    }
}
