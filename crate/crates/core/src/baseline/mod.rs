//! Token n-gram SMILES generator used as a sample source for the
//! evaluation pipeline.

mod ngram;
mod tokenize;

pub use ngram::{train_ngram, NgramModel, BEGIN, END, MAX_ORDER, MODEL_MAGIC, MODEL_VERSION};
pub use tokenize::tokenize;

#[derive(Debug, thiserror::Error)]
pub enum BaselineError {
    #[error("training corpus is empty")]
    EmptyCorpus,
    #[error("n-gram order must be between 1 and 8, got {0}")]
    BadOrder(usize),
    #[error("malformed model file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
