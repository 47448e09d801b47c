use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Subcommand};
use molbench_core::descriptors::{descriptor_vector, train_contributions, train_np_contributions};
use molbench_core::metrics::parse_valid;
use rayon::prelude::*;

use crate::error::Result;
use crate::io::{create, read_records, require_exists};
use crate::TableArgs;

#[derive(Subcommand, Debug)]
pub enum DescriptorsCmd {
    /// Per-molecule descriptor TSV.
    Compute(ComputeArgs),
    /// Build an SA contribution table from a reference corpus.
    TrainSa(TrainSaArgs),
    /// Build an NP contribution table from natural and synthetic corpora.
    TrainNp(TrainNpArgs),
}

#[derive(Args, Debug)]
pub struct ComputeArgs {
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub tables: TableArgs,
}

#[derive(Args, Debug)]
pub struct TrainSaArgs {
    pub corpus: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct TrainNpArgs {
    #[arg(long)]
    pub natural: PathBuf,
    #[arg(long)]
    pub synthetic: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(cmd: DescriptorsCmd) -> Result<()> {
    match cmd {
        DescriptorsCmd::Compute(a) => compute(a),
        DescriptorsCmd::TrainSa(a) => {
            require_exists([&a.corpus])?;
            let mols = parse_valid(&read_records(&a.corpus)?);
            let table = train_contributions(&mols)?;
            table.save(&a.out)?;
            eprintln!("{} molecules, {} environments", mols.len(), table.len());
            Ok(())
        }
        DescriptorsCmd::TrainNp(a) => {
            require_exists([&a.natural, &a.synthetic])?;
            let natural = parse_valid(&read_records(&a.natural)?);
            let synthetic = parse_valid(&read_records(&a.synthetic)?);
            let table = train_np_contributions(&natural, &synthetic)?;
            table.save(&a.out)?;
            eprintln!(
                "{} natural, {} synthetic molecules, {} environments",
                natural.len(),
                synthetic.len(),
                table.len()
            );
            Ok(())
        }
    }
}

/// Columns: canonical SMILES, mw, logp, rotatable_bonds, qed, then sa and
/// np when their tables are given. Invalid records are skipped.
fn compute(args: ComputeArgs) -> Result<()> {
    require_exists(std::iter::once(&args.input).chain(args.tables.paths()))?;
    let tables = args.tables.load()?;
    let records = read_records(&args.input)?;
    let mols = parse_valid(&records);
    let view = tables.view();
    let rows: Vec<String> = mols
        .par_iter()
        .map(|m| {
            let v = descriptor_vector(m, view);
            let mut row = format!(
                "{}\t{:.4}\t{:.4}\t{}\t{:.4}",
                m.canonical_smiles(),
                v.mw,
                v.logp,
                v.rotatable_bonds,
                v.qed
            );
            for x in [v.sa, v.np].into_iter().flatten() {
                row.push_str(&format!("\t{x:.4}"));
            }
            row
        })
        .collect();
    let mut w = create(args.out.as_deref())?;
    let mut header = String::from("smiles\tmw\tlogp\trotatable_bonds\tqed");
    if tables.sa.is_some() {
        header.push_str("\tsa");
    }
    if tables.np.is_some() {
        header.push_str("\tnp");
    }
    writeln!(w, "{header}")?;
    for r in &rows {
        writeln!(w, "{r}")?;
    }
    w.flush()?;
    eprintln!("{} records, {} valid", records.len(), mols.len());
    Ok(())
}
