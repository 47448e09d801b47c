use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use molbench_core::dataset::record_smiles;

use crate::error::{CliError, Result};

pub fn is_stdin(path: &Path) -> bool {
    path.as_os_str() == "-"
}

/// Usage error unless every path exists (`-` means standard input).
pub fn require_exists<'a>(paths: impl IntoIterator<Item = &'a PathBuf>) -> Result<()> {
    for p in paths {
        if !is_stdin(p) && !p.exists() {
            return Err(CliError::Usage(format!("input file not found: {}", p.display())));
        }
    }
    Ok(())
}

pub fn open(path: &Path) -> Result<Box<dyn BufRead>> {
    if is_stdin(path) {
        return Ok(Box::new(BufReader::new(io::stdin())));
    }
    let f = File::open(path).map_err(|source| CliError::File {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(Box::new(BufReader::new(f)))
}

/// Standard output when `path` is `None` or `-`.
pub fn create(path: Option<&Path>) -> Result<Box<dyn Write>> {
    match path {
        Some(p) if !is_stdin(p) => {
            let f = File::create(p).map_err(|source| CliError::File {
                path: p.to_path_buf(),
                source,
            })?;
            Ok(Box::new(BufWriter::new(f)))
        }
        _ => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
    }
}

/// SMILES fields of every non-blank record.
pub fn read_records(path: &Path) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for line in open(path)?.lines() {
        let line = line?;
        if let Some(s) = record_smiles(&line) {
            out.push(s.to_string());
        }
    }
    Ok(out)
}

/// Every line's SMILES field, blank lines kept as empty strings so that
/// they count as invalid samples.
pub fn read_raw(path: &Path) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for line in open(path)?.lines() {
        let line = line?;
        out.push(record_smiles(&line).unwrap_or("").to_string());
    }
    Ok(out)
}

pub fn write_lines<S: AsRef<str>>(path: &Path, lines: &[S]) -> Result<()> {
    let mut w = create(Some(path))?;
    for l in lines {
        writeln!(w, "{}", l.as_ref())?;
    }
    w.flush()?;
    Ok(())
}
