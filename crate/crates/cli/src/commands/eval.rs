use std::collections::BTreeSet;
use std::io::Write;
use std::path::PathBuf;

use clap::Args;
use molbench_core::descriptors::Descriptor;
use molbench_core::metrics::{
    full_report_with_progress, Embeddings, EvalSets, FcdEmbeddings, MetricGroup,
    MetricReport, ReportConfig, SimilarityForm,
};

use crate::error::{CliError, Result};
use crate::io::{create, read_raw, read_records, require_exists};
use crate::{FilterArgs, FingerprintArgs, OutputFormat, TableArgs};

#[derive(Args, Debug)]
pub struct EvalArgs {
    /// Generated strings, one per line.
    #[arg(long)]
    pub generated: PathBuf,
    #[arg(long)]
    pub train: PathBuf,
    #[arg(long)]
    pub test: PathBuf,
    /// Scaffold test set; needed by snn, frag and scaf.
    #[arg(long)]
    pub test_scaffolds: Option<PathBuf>,
    /// Comma-separated metric groups: valid, unique, fcd, snn, frag, scaf,
    /// intdiv, filters, novelty, props (default: all).
    #[arg(long, value_delimiter = ',')]
    pub metrics: Option<Vec<String>>,
    /// Sample sizes for Unique@k.
    #[arg(long = "k", value_delimiter = ',', default_value = "1000,10000")]
    pub unique_k: Vec<usize>,
    /// Descriptors for property Fréchet distances.
    #[arg(long, value_delimiter = ',', default_value = "mw,logp,qed")]
    pub properties: Vec<String>,
    /// Report Frag and Scaf as 1 - cosine.
    #[arg(long)]
    pub distance: bool,
    #[command(flatten)]
    pub fp: FingerprintArgs,
    #[command(flatten)]
    pub filters: FilterArgs,
    #[command(flatten)]
    pub tables: TableArgs,
    /// Embedding files for FCD: generated, test and (optional) scaffold test.
    #[arg(long)]
    pub emb_generated: Option<PathBuf>,
    #[arg(long)]
    pub emb_test: Option<PathBuf>,
    #[arg(long)]
    pub emb_test_scaffolds: Option<PathBuf>,
    /// Rows of the generated set per worker task in SNN and IntDiv.
    #[arg(long, default_value_t = molbench_core::metrics::DEFAULT_BLOCK)]
    pub block: usize,
    #[arg(long, value_enum, default_value = "text")]
    pub format: OutputFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// No progress messages.
    #[arg(long, short)]
    pub quiet: bool,
}

pub fn render(report: &MetricReport, format: OutputFormat) -> Result<String> {
    Ok(match format {
        OutputFormat::Text => report.to_text(),
        OutputFormat::Tsv => report.to_tsv(),
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(report).map_err(|e| CliError::Data(e.to_string()))?;
            s.push('\n');
            s
        }
    })
}

fn groups(args: &EvalArgs) -> Result<BTreeSet<MetricGroup>> {
    match &args.metrics {
        None => Ok(MetricGroup::ALL.into_iter().collect()),
        Some(names) => names
            .iter()
            .map(|n| n.trim().parse::<MetricGroup>().map_err(|e| CliError::Usage(e.to_string())))
            .collect(),
    }
}

pub fn run(args: EvalArgs) -> Result<()> {
    let groups = groups(&args)?;
    let needs_sf = [MetricGroup::Snn, MetricGroup::Frag, MetricGroup::Scaf]
        .into_iter()
        .filter(|g| groups.contains(g))
        .map(|g| g.name())
        .collect::<Vec<_>>();
    if args.test_scaffolds.is_none() && !needs_sf.is_empty() {
        return Err(CliError::Usage(format!(
            "--test-scaffolds is required for {} (or restrict --metrics)",
            needs_sf.join(", ")
        )));
    }
    let properties: Vec<Descriptor> = args
        .properties
        .iter()
        .map(|p| p.trim().parse().map_err(|e| CliError::Usage(format!("{e}"))))
        .collect::<Result<_>>()?;
    for d in &properties {
        let missing = match d {
            Descriptor::Sa => args.tables.sa_table.is_none(),
            Descriptor::Np => args.tables.np_table.is_none(),
            _ => false,
        };
        if missing && groups.contains(&MetricGroup::Props) {
            return Err(CliError::Usage(format!("property {d} needs --{d}-table")));
        }
    }
    let emb_paths = [&args.emb_generated, &args.emb_test, &args.emb_test_scaffolds];
    if (args.emb_generated.is_some() != args.emb_test.is_some()) || (args.emb_test_scaffolds.is_some() && args.emb_test.is_none()) {
        return Err(CliError::Usage("--emb-generated and --emb-test must be given together".into()));
    }
    let fingerprint = args.fp.spec()?;
    if args.block == 0 {
        return Err(CliError::Usage("--block must be at least 1".into()));
    }
    require_exists(
        [&args.generated, &args.train, &args.test]
            .into_iter()
            .chain(args.test_scaffolds.iter())
            .chain(emb_paths.into_iter().flatten())
            .chain(args.filters.paths())
            .chain(args.tables.paths()),
    )?;
    let filters = args.filters.load()?;
    let tables = args.tables.load()?;

    let quiet = args.quiet;
    let mut progress = |stage: &str| {
        if !quiet {
            eprintln!("[eval] {stage}");
        }
    };
    progress("reading inputs");
    let sets = EvalSets {
        generated: read_raw(&args.generated)?,
        train: read_records(&args.train)?,
        test: read_records(&args.test)?,
        test_scaffolds: args.test_scaffolds.as_deref().map(read_records).transpose()?,
    };
    let embeddings = match (&args.emb_generated, &args.emb_test) {
        (Some(g), Some(t)) => Some(FcdEmbeddings {
            generated: Embeddings::load(g)?,
            test: Embeddings::load(t)?,
            test_scaffolds: args.emb_test_scaffolds.as_ref().map(Embeddings::load).transpose()?,
        }),
        _ => None,
    };
    let config = ReportConfig {
        unique_k: args.unique_k.clone(),
        fingerprint,
        form: if args.distance {
            SimilarityForm::Distance
        } else {
            SimilarityForm::Similarity
        },
        properties,
        tables: tables.view(),
        filters,
        embeddings,
        groups,
        block: args.block,
    };
    let report = full_report_with_progress(&sets, &config, &mut progress)?;
    let mut w = create(args.out.as_deref())?;
    w.write_all(render(&report, args.format)?.as_bytes())?;
    w.flush()?;
    Ok(())
}
