//! Lead-like filtering, deduplication and train/test/scaffold-test splits.

mod config;
mod pipeline;
mod split;

pub use config::{ConfigError, FilterConfig, DEFAULT_ELEMENTS};
pub use pipeline::{
    clean_leads_filter, deduplicate, filter_record, record_smiles, write_rejection, write_rejection_header,
    Deduplicator, FilterStats, Rejection, CHUNK_LINES,
};
pub use split::{scaffold_key, split, SplitSpec, Splits};

#[derive(Debug, thiserror::Error)]
pub enum DatasetError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("bad split fractions: {0}")]
    BadSplit(String),
    #[error("dataset too small: {0}")]
    TooSmall(String),
    #[error("invalid record {0}")]
    InvalidRecord(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
