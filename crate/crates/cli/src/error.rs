use std::path::PathBuf;

use molbench_core::baseline::BaselineError;
use molbench_core::dataset::{ConfigError, DatasetError};
use molbench_core::descriptors::ContributionError;
use molbench_core::fingerprints::FingerprintError;
use molbench_core::metrics::MetricsError;
use molbench_core::substructure::PackError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    File {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Pack(#[from] PackError),
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Fingerprint(#[from] FingerprintError),
    #[error(transparent)]
    Contribution(#[from] ContributionError),
    #[error(transparent)]
    Baseline(#[from] BaselineError),
    #[error("{0}")]
    Data(String),
}

impl CliError {
    /// 2 for usage and configuration problems, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) | CliError::Pack(_) => 2,
            CliError::Dataset(DatasetError::Config(_) | DatasetError::BadSplit(_)) => 2,
            CliError::Metrics(MetricsError::MissingReference { .. } | MetricsError::UnknownMetric(_)) => 2,
            CliError::Metrics(MetricsError::MissingTable(_)) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
