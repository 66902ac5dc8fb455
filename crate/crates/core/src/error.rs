//! Error taxonomy shared by every module.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, SwagError>;

/// A single malformed row of an ingested CSV file.
#[derive(Debug, Clone, PartialEq)]
pub struct RowError {
    /// 1-based line number in the source file.
    pub line: u64,
    pub message: String,
}

impl std::fmt::Display for RowError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SwagError {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Model demand above the material limit. Carries the computed value so
    /// callers can report the margin.
    #[error("required pressure {required_pa:.1} Pa exceeds burst pressure {burst_pa:.1} Pa")]
    ExceedsBurst { required_pa: f64, burst_pa: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("degenerate data: {0}")]
    DegenerateData(String),

    #[error("fitted transmission ratio {ratio} for N = {n_subvines} is outside (0, 1)")]
    RatioOutOfRange { n_subvines: u32, ratio: f64 },

    #[error("sheath length {sheath_m} m is shorter than limb length {limb_m} m")]
    SheathTooShort { sheath_m: f64, limb_m: f64 },

    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error("malformed rows in {file}: {}", join_rows(.rows))]
    MalformedRows { file: String, rows: Vec<RowError> },

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

fn join_rows(rows: &[RowError]) -> String {
    rows.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

impl SwagError {
    /// Stable machine-readable code for scripts.
    pub fn code(&self) -> &'static str {
        match self {
            SwagError::InvalidGeometry(_) => "E_GEOMETRY",
            SwagError::InvalidInput(_) => "E_INPUT",
            SwagError::ExceedsBurst { .. } => "E_BURST",
            SwagError::InsufficientData(_) => "E_INSUFFICIENT_DATA",
            SwagError::DegenerateData(_) => "E_DEGENERATE_DATA",
            SwagError::RatioOutOfRange { .. } => "E_RATIO_RANGE",
            SwagError::SheathTooShort { .. } => "E_SHEATH_SHORT",
            SwagError::Config { .. } => "E_CONFIG",
            SwagError::MalformedRows { .. } => "E_CSV_ROWS",
            SwagError::Io { .. } => "E_IO",
        }
    }

    /// True for outcomes where the inputs were valid but the model says the
    /// configuration cannot work.
    pub fn is_infeasibility(&self) -> bool {
        matches!(self, SwagError::ExceedsBurst { .. })
    }

    pub(crate) fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        SwagError::Config {
            path: path.into(),
            message: message.into(),
        }
    }
}
