use std::io::Write;
use std::path::PathBuf;

use clap::Args;
use molbench_core::dataset::{
    clean_leads_filter, split, write_rejection, write_rejection_header, Deduplicator, SplitSpec,
};

use crate::error::{CliError, Result};
use crate::io::{create, open, require_exists, write_lines};
use crate::FilterArgs;

#[derive(Args, Debug)]
pub struct PrepareArgs {
    /// Raw molecule file.
    pub input: PathBuf,
    /// Directory for train.smi, test.smi, test_scaffolds.smi and rejected.tsv.
    #[arg(long)]
    pub out_dir: PathBuf,
    #[command(flatten)]
    pub filters: FilterArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.9)]
    pub train_fraction: f64,
    #[arg(long, default_value_t = 0.05)]
    pub test_fraction: f64,
    /// Random split only; no scaffold test set.
    #[arg(long)]
    pub no_scaffold_test: bool,
}

pub fn run(args: PrepareArgs) -> Result<()> {
    require_exists(std::iter::once(&args.input).chain(args.filters.paths()))?;
    let config = args.filters.load()?;
    let spec = SplitSpec {
        train: args.train_fraction,
        test: args.test_fraction,
        seed: args.seed,
        scaffold_test: !args.no_scaffold_test,
    };
    spec.validate()?;
    std::fs::create_dir_all(&args.out_dir).map_err(|source| CliError::File {
        path: args.out_dir.clone(),
        source,
    })?;
    let mut rejected = create(Some(&args.out_dir.join("rejected.tsv")))?;
    write_rejection_header(&mut rejected)?;
    let mut dedup = Deduplicator::new();
    let mut accepted = Vec::new();
    let stats = clean_leads_filter(
        open(&args.input)?,
        &config,
        |s| {
            if dedup.insert(&s) {
                accepted.push(s);
            }
            Ok(())
        },
        |r| write_rejection(&mut rejected, &r),
    )?;
    rejected.flush()?;
    eprintln!(
        "{} records: {} accepted, {} unique, {} rejected",
        stats.records,
        stats.accepted,
        accepted.len(),
        stats.rejected_total()
    );
    for (rule, n) in &stats.rejected {
        eprintln!("  {rule}: {n}");
    }
    let splits = split(&accepted, &spec)?;
    write_lines(&args.out_dir.join("train.smi"), &splits.train)?;
    write_lines(&args.out_dir.join("test.smi"), &splits.test)?;
    if spec.scaffold_test {
        write_lines(&args.out_dir.join("test_scaffolds.smi"), &splits.scaffold_test)?;
    }
    eprintln!(
        "train {}, test {}, test_scaffolds {}",
        splits.train.len(),
        splits.test.len(),
        splits.scaffold_test.len()
    );
    Ok(())
}
