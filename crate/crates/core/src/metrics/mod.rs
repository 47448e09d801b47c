//! Distribution-matching metrics for a generated set against reference
//! sets, and the generic Fréchet distance.

mod basic;
mod embedding;
mod frechet;
mod report;
mod similarity;

pub use basic::{filters_fraction, novelty, novelty_of, parse_valid, uniqueness_at_k, uniqueness_of, validity};
pub use embedding::{Embeddings, EMBEDDING_MAGIC};
pub use frechet::{descriptor_values, frechet_distance, property_frechet, GaussianSummary, PSD_TOLERANCE};
pub use report::{
    canonicalize_references, full_report, full_report_with_progress, EvalSets, FcdEmbeddings, MetricGroup,
    MetricReport, MetricValue, ReportConfig,
};
pub use similarity::{
    fragment_similarity, internal_diversity, internal_diversity_matrix, profile_cosine, scaffold_similarity, snn,
    snn_matrix, FingerprintMatrix, SimilarityForm, DEFAULT_BLOCK,
};

use crate::fingerprints::FingerprintError;

#[derive(Debug, thiserror::Error)]
pub enum MetricsError {
    #[error("empty {0}")]
    Empty(&'static str),
    #[error("no valid molecules")]
    NoValid,
    #[error("only {valid} valid molecules, {k} needed")]
    Shortfall { k: usize, valid: usize },
    #[error("both profiles are empty")]
    EmptyProfiles,
    #[error("power must be 1 or 2, got {0}")]
    BadPower(u32),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("covariance has eigenvalue {0}, below tolerance")]
    NotPsd(f64),
    #[error("need at least 2 samples, got {0}")]
    TooFewSamples(usize),
    #[error("non-finite input value")]
    NonFinite,
    #[error("metric {0} is not finite")]
    NonFiniteMetric(String),
    #[error("descriptor '{0}' needs a contribution table")]
    MissingTable(&'static str),
    #[error("{metric} needs the {reference} reference set")]
    MissingReference { reference: &'static str, metric: &'static str },
    #[error("invalid molecule in {set} set '{smiles}': {message}")]
    InvalidReference {
        set: &'static str,
        smiles: String,
        message: String,
    },
    #[error("unknown metric '{0}'")]
    UnknownMetric(String),
    #[error("malformed embedding file: {0}")]
    Format(String),
    #[error(transparent)]
    Fingerprint(#[from] FingerprintError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
