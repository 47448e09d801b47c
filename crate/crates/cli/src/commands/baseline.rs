use std::path::PathBuf;

use clap::{Args, Subcommand};
use molbench_core::baseline::{train_ngram, NgramModel};

use crate::error::Result;
use crate::io::{read_records, require_exists, write_lines};

#[derive(Subcommand, Debug)]
pub enum BaselineCmd {
    /// Count n-grams over a corpus and save the model.
    Train(TrainArgs),
    /// Draw strings from a saved model.
    Sample(SampleArgs),
}

#[derive(Args, Debug)]
pub struct TrainArgs {
    pub corpus: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, short = 'n', default_value_t = 4)]
    pub order: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    pub model: PathBuf,
    #[arg(long, default_value_t = 10000)]
    pub count: usize,
    #[arg(long, default_value_t = 100)]
    pub max_len: usize,
    /// Overrides the seed stored in the model.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(cmd: BaselineCmd) -> Result<()> {
    match cmd {
        BaselineCmd::Train(a) => {
            require_exists([&a.corpus])?;
            let corpus = read_records(&a.corpus)?;
            let model = train_ngram(&corpus, a.order, a.seed)?;
            model.save(&a.out)?;
            eprintln!(
                "{} strings, {} tokens, {} contexts",
                corpus.len(),
                model.tokens().len(),
                model.num_contexts()
            );
            Ok(())
        }
        BaselineCmd::Sample(a) => {
            require_exists([&a.model])?;
            let mut model = NgramModel::load(&a.model)?;
            if let Some(seed) = a.seed {
                model.set_seed(seed);
            }
            let samples = model.sample(a.count, a.max_len);
            write_lines(a.out.as_deref().unwrap_or("-".as_ref()), &samples)
        }
    }
}
