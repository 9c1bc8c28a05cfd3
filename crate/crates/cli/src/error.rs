use thiserror::Error;

use crate::parse::ParseError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("config error: {0}")]
    Config(String),

    #[error("no dynamics defined at intermediate h (h = {h}, h_o = {h_o}): only h = 0 and h = h_o have an equation of motion")]
    IntermediateH { h: f64, h_o: f64 },

    #[error(transparent)]
    Core(#[from] semiclassical_core::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type CliResult<T> = Result<T, CliError>;
