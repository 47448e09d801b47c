use std::io::Write;
use std::path::PathBuf;

use clap::Args;
use molbench_core::fingerprints::write_cache;
use molbench_core::metrics::parse_valid;

use crate::error::{CliError, Result};
use crate::io::{create, read_records, require_exists};
use crate::FingerprintArgs;

#[derive(Args, Debug)]
pub struct FingerprintCmdArgs {
    /// Molecule file.
    pub input: PathBuf,
    /// Cache file to write.
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub fp: FingerprintArgs,
}

/// One cache row per valid record, in input order.
pub fn run(args: FingerprintCmdArgs) -> Result<()> {
    require_exists([&args.input])?;
    let spec = args.fp.spec()?;
    let records = read_records(&args.input)?;
    let mols = parse_valid(&records);
    if mols.is_empty() {
        return Err(CliError::Data("no valid molecules in input".into()));
    }
    let fps = spec.compute_all(&mols)?;
    let mut w = create(Some(&args.out))?;
    write_cache(&mut w, &fps)?;
    w.flush()?;
    eprintln!(
        "{} records, {} fingerprints ({} width {})",
        records.len(),
        fps.len(),
        spec.kind,
        spec.width
    );
    Ok(())
}
