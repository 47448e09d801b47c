use std::io::Write;
use std::path::PathBuf;

use clap::Args;
use molbench_core::descriptors::Descriptor;
use molbench_core::metrics::{descriptor_values, frechet_distance, parse_valid, GaussianSummary};

use crate::error::{CliError, Result};
use crate::io::{create, read_records, require_exists};
use crate::TableArgs;

#[derive(Args, Debug)]
pub struct DistributionsArgs {
    pub set_a: PathBuf,
    pub set_b: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "mw,logp,qed,rotatable_bonds")]
    pub descriptors: Vec<String>,
    #[command(flatten)]
    pub tables: TableArgs,
    /// Directory for histograms.tsv and summary.tsv (default: both to
    /// standard output).
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

/// Fixed bins `[lo + i*step, lo + (i+1)*step)`; values outside the range
/// are counted in the first or last bin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Binning {
    pub lo: f64,
    pub step: f64,
    pub bins: usize,
}

impl Binning {
    pub fn for_descriptor(d: Descriptor) -> Binning {
        match d {
            Descriptor::Mw => Binning { lo: 0.0, step: 10.0, bins: 70 },
            Descriptor::Logp => Binning { lo: -5.0, step: 0.25, bins: 60 },
            Descriptor::RotatableBonds => Binning { lo: 0.0, step: 1.0, bins: 20 },
            Descriptor::Qed => Binning { lo: 0.0, step: 0.02, bins: 50 },
            Descriptor::Sa => Binning { lo: 1.0, step: 0.2, bins: 45 },
            Descriptor::Np => Binning { lo: -5.0, step: 0.2, bins: 50 },
        }
    }

    pub fn bin(&self, x: f64) -> usize {
        let i = ((x - self.lo) / self.step).floor();
        if i < 0.0 {
            0
        } else {
            (i as usize).min(self.bins - 1)
        }
    }

    pub fn counts(&self, values: &[f64]) -> Vec<usize> {
        let mut c = vec![0; self.bins];
        for &x in values {
            c[self.bin(x)] += 1;
        }
        c
    }
}

fn mean_var(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = if values.len() > 1 {
        values.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (mean, var)
}

pub fn run(args: DistributionsArgs) -> Result<()> {
    let descriptors: Vec<Descriptor> = args
        .descriptors
        .iter()
        .map(|p| p.trim().parse().map_err(|e| CliError::Usage(format!("{e}"))))
        .collect::<Result<_>>()?;
    require_exists([&args.set_a, &args.set_b].into_iter().chain(args.tables.paths()))?;
    let tables = args.tables.load()?;
    let a = parse_valid(&read_records(&args.set_a)?);
    let b = parse_valid(&read_records(&args.set_b)?);
    if a.len() < 2 || b.len() < 2 {
        return Err(CliError::Data("each set needs at least two valid molecules".into()));
    }
    let mut hist = String::from("descriptor\tbin_lo\tbin_hi\tcount_a\tcount_b\n");
    let mut summary = String::from("descriptor\tn_a\tn_b\tmean_a\tmean_b\tvar_a\tvar_b\tfrechet\n");
    for d in descriptors {
        let missing = || CliError::Usage(format!("descriptor {d} needs --{d}-table"));
        let va = descriptor_values(&a, d, tables.view()).ok_or_else(missing)?;
        let vb = descriptor_values(&b, d, tables.view()).ok_or_else(missing)?;
        let bins = Binning::for_descriptor(d);
        let (ca, cb) = (bins.counts(&va), bins.counts(&vb));
        for i in 0..bins.bins {
            let lo = bins.lo + i as f64 * bins.step;
            hist.push_str(&format!("{d}\t{lo}\t{}\t{}\t{}\n", lo + bins.step, ca[i], cb[i]));
        }
        let fd = frechet_distance(&GaussianSummary::fit_scalar(&va)?, &GaussianSummary::fit_scalar(&vb)?)?;
        let (ma, sa) = mean_var(&va);
        let (mb, sb) = mean_var(&vb);
        summary.push_str(&format!(
            "{d}\t{}\t{}\t{ma}\t{mb}\t{sa}\t{sb}\t{fd}\n",
            va.len(),
            vb.len()
        ));
    }
    match &args.out_dir {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|source| CliError::File {
                path: dir.clone(),
                source,
            })?;
            for (name, text) in [("histograms.tsv", &hist), ("summary.tsv", &summary)] {
                let mut w = create(Some(&dir.join(name)))?;
                w.write_all(text.as_bytes())?;
                w.flush()?;
            }
        }
        None => {
            let mut w = create(None)?;
            write!(w, "{hist}\n{summary}")?;
            w.flush()?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binning_clamps() {
        let b = Binning { lo: 0.0, step: 1.0, bins: 3 };
        assert_eq!(b.counts(&[-4.0, 0.5, 1.0, 2.9, 17.0]), vec![2, 1, 2]);
    }
}
