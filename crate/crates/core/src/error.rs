use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("unknown category name {0:?}")]
    UnknownCategory(String),

    #[error("invalid category id {0} (expected 0..=18 or 255)")]
    InvalidCategoryId(u32),

    #[error("unknown colormap {name:?}; valid colormaps: {valid}")]
    UnknownColormap { name: String, valid: String },

    #[error("category config line {line}: {message}")]
    CategoryConfig { line: usize, message: String },

    #[error("invalid label value {value} at ({x}, {y})")]
    InvalidLabel { value: u8, x: u32, y: u32 },

    #[error("{context}: dimension mismatch, expected {expected:?} got {found:?}")]
    DimensionMismatch {
        context: String,
        expected: (u32, u32),
        found: (u32, u32),
    },

    #[error("raster of {width}x{height} needs {expected} values, got {found}")]
    RasterLength {
        width: u32,
        height: u32,
        expected: usize,
        found: usize,
    },

    #[error("category {0} is absent from both masks")]
    EmptyUnion(u8),

    #[error("the ignore label has no IoU")]
    IgnoreCategory,

    #[error("coordinate ({x}, {y}) outside {width}x{height} raster")]
    OutOfBounds {
        x: u32,
        y: u32,
        width: u32,
        height: u32,
    },

    #[error("missing file {0}")]
    MissingFile(PathBuf),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("png decode error in {path}: {message}")]
    Decode { path: PathBuf, message: String },

    #[error("png encode error: {0}")]
    Encode(String),

    #[error("manifest parse error in {path}: {message}")]
    ManifestParse { path: PathBuf, message: String },

    #[error("duplicate image id {0:?} in manifest")]
    DuplicateImageId(String),

    #[error("bad weight-field magic {0:?}")]
    BadMagic([u8; 4]),

    #[error("truncated weight field: expected {expected} bytes, got {found}")]
    Truncated { expected: usize, found: usize },

    #[error("non-finite weight at index {0}")]
    NonFiniteWeight(usize),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("empty input")]
    EmptyInput,

    #[error("score weights sum to zero")]
    ZeroWeightSum,

    #[error("image {image_id}: {source}")]
    Entry {
        image_id: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn in_entry(self, image_id: &str) -> Self {
        Error::Entry {
            image_id: image_id.to_owned(),
            source: Box::new(self),
        }
    }

    /// Strips any per-entry annotation.
    pub fn root_cause(&self) -> &Error {
        match self {
            Error::Entry { source, .. } => source.root_cause(),
            other => other,
        }
    }
}
