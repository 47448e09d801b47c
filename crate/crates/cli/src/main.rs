mod commands;
mod error;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use molbench_core::dataset::FilterConfig;
use molbench_core::descriptors::ContributionTable;
use molbench_core::fingerprints::{FingerprintKind, FingerprintSpec, DEFAULT_PHARMACOPHORE_WIDTH, DEFAULT_RADIUS, DEFAULT_WIDTH};
use molbench_core::substructure::FilterPack;

use error::{CliError, Result};

#[derive(Parser, Debug)]
#[command(name = "molbench", about = "Benchmark generated molecules against reference sets")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "MOLBENCH_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and canonicalize SMILES records.
    Parse(commands::parse::ParseArgs),
    /// Filter, deduplicate and split a raw molecule file.
    Prepare(commands::prepare::PrepareArgs),
    /// Write a binary fingerprint cache.
    Fingerprint(commands::fingerprint::FingerprintCmdArgs),
    /// Per-molecule descriptors, or contribution-table training.
    #[command(subcommand)]
    Descriptors(commands::descriptors::DescriptorsCmd),
    /// Evaluate a generated set against train/test/scaffold-test sets.
    Eval(Box<commands::eval::EvalArgs>),
    /// Descriptor histograms and Fréchet distances between two sets.
    Distributions(commands::distributions::DistributionsArgs),
    /// Train or sample the n-gram baseline generator.
    #[command(subcommand)]
    Baseline(commands::baseline::BaselineCmd),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Tsv,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct FingerprintArgs {
    /// Fingerprint kind.
    #[arg(long = "fp-kind", default_value = "morgan")]
    pub kind: String,
    /// Width in bits (multiple of 64); default depends on the kind.
    #[arg(long = "fp-width")]
    pub width: Option<usize>,
    /// Morgan radius.
    #[arg(long = "fp-radius", default_value_t = DEFAULT_RADIUS)]
    pub radius: u32,
}

impl FingerprintArgs {
    pub fn spec(&self) -> Result<FingerprintSpec> {
        let kind: FingerprintKind = self.kind.parse().map_err(|e| CliError::Usage(format!("{e}")))?;
        let width = self.width.unwrap_or(match kind {
            FingerprintKind::Morgan => DEFAULT_WIDTH,
            FingerprintKind::Pharmacophore => DEFAULT_PHARMACOPHORE_WIDTH,
        });
        if width == 0 || !width.is_multiple_of(64) {
            return Err(CliError::Usage(format!("--fp-width {width} is not a positive multiple of 64")));
        }
        Ok(FingerprintSpec {
            kind,
            width,
            radius: self.radius,
        })
    }
}

#[derive(Args, Debug, Clone, Default)]
pub struct TableArgs {
    /// SA contribution table.
    #[arg(long)]
    pub sa_table: Option<PathBuf>,
    /// NP contribution table.
    #[arg(long)]
    pub np_table: Option<PathBuf>,
}

#[derive(Debug, Default)]
pub struct LoadedTables {
    pub sa: Option<ContributionTable>,
    pub np: Option<ContributionTable>,
}

impl LoadedTables {
    pub fn view(&self) -> molbench_core::descriptors::ScoreTables<'_> {
        molbench_core::descriptors::ScoreTables {
            sa: self.sa.as_ref(),
            np: self.np.as_ref(),
        }
    }
}

impl TableArgs {
    pub fn paths(&self) -> impl Iterator<Item = &PathBuf> {
        self.sa_table.iter().chain(self.np_table.iter())
    }

    pub fn load(&self) -> Result<LoadedTables> {
        Ok(LoadedTables {
            sa: self.sa_table.as_ref().map(ContributionTable::load).transpose()?,
            np: self.np_table.as_ref().map(ContributionTable::load).transpose()?,
        })
    }
}

#[derive(Args, Debug, Clone, Default)]
pub struct FilterArgs {
    /// Filter config file (`key = value` lines).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Extra alert pack file; repeatable.
    #[arg(long = "filter-pack")]
    pub filter_packs: Vec<PathBuf>,
}

impl FilterArgs {
    pub fn paths(&self) -> impl Iterator<Item = &PathBuf> {
        self.config.iter().chain(self.filter_packs.iter())
    }

    pub fn load(&self) -> Result<FilterConfig> {
        let mut cfg = match &self.config {
            Some(p) => FilterConfig::load(p)?,
            None => FilterConfig::default(),
        };
        for p in &self.filter_packs {
            cfg.packs.push(FilterPack::load(p)?);
        }
        Ok(cfg)
    }
}

fn version_text() -> String {
    let mcf = FilterPack::mcf();
    let pains = FilterPack::pains();
    format!(
        "{}\npack {} {} ({} rules)\npack {} {} ({} rules)",
        env!("CARGO_PKG_VERSION"),
        mcf.name,
        mcf.version,
        mcf.rules.len(),
        pains.name,
        pains.version,
        pains.rules.len()
    )
}

fn run(cli: Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot set thread count: {e}")))?;
    }
    match cli.command {
        Command::Parse(a) => commands::parse::run(a),
        Command::Prepare(a) => commands::prepare::run(a),
        Command::Fingerprint(a) => commands::fingerprint::run(a),
        Command::Descriptors(a) => commands::descriptors::run(a),
        Command::Eval(a) => commands::eval::run(*a),
        Command::Distributions(a) => commands::distributions::run(a),
        Command::Baseline(a) => commands::baseline::run(a),
    }
}

fn main() -> ExitCode {
    let version: &'static str = Box::leak(version_text().into_boxed_str());
    let matches = Cli::command().version(version).get_matches();
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("molbench: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
