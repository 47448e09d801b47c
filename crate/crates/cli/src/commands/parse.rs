use std::io::{BufRead, Write};
use std::path::PathBuf;

use clap::Args;
use molbench_core::dataset::record_smiles;
use molbench_core::Molecule;
use rayon::prelude::*;

use crate::error::Result;
use crate::io::{create, open, require_exists};

#[derive(Args, Debug)]
pub struct ParseArgs {
    /// Molecule file (`-` for standard input).
    pub input: PathBuf,
    /// Output file (default: standard output).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print only canonical strings of valid records.
    #[arg(long)]
    pub canonical_only: bool,
}

/// Writes `line_no, input, canonical, error` rows.
pub fn run(args: ParseArgs) -> Result<()> {
    require_exists([&args.input])?;
    let records: Vec<(usize, String)> = open(&args.input)?
        .lines()
        .enumerate()
        .filter_map(|(i, l)| match l {
            Ok(l) => record_smiles(&l).map(|s| Ok((i + 1, s.to_string()))),
            Err(e) => Some(Err(e)),
        })
        .collect::<std::io::Result<_>>()?;
    let results: Vec<std::result::Result<String, String>> = records
        .par_iter()
        .map(|(_, s)| {
            Molecule::from_smiles(s)
                .map(|m| m.canonical_smiles().to_string())
                .map_err(|e| e.to_string())
        })
        .collect();
    let mut w = create(args.out.as_deref())?;
    if !args.canonical_only {
        writeln!(w, "line_no\tinput\tcanonical\terror")?;
    }
    let mut valid = 0;
    for ((no, input), r) in records.iter().zip(&results) {
        match (r, args.canonical_only) {
            (Ok(c), true) => writeln!(w, "{c}")?,
            (Ok(c), false) => writeln!(w, "{no}\t{input}\t{c}\t")?,
            (Err(_), true) => {}
            (Err(e), false) => writeln!(w, "{no}\t{input}\t\t{e}")?,
        }
        valid += r.is_ok() as usize;
    }
    w.flush()?;
    eprintln!("{} records, {valid} valid", records.len());
    Ok(())
}
