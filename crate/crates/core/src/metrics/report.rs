//! The full metric table for one generated set.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::chem::Molecule;
use crate::dataset::FilterConfig;
use crate::decompose::{fragment_profile, scaffold_profile, Profile};
use crate::descriptors::{Descriptor, ScoreTables};
use crate::fingerprints::{FingerprintKind, FingerprintSpec};

use super::basic::{filters_fraction, novelty_of, parse_valid, uniqueness_of};
use super::embedding::Embeddings;
use super::frechet::{frechet_distance, property_frechet};
use super::similarity::{
    internal_diversity_matrix, profile_cosine, snn_matrix, FingerprintMatrix, SimilarityForm, DEFAULT_BLOCK,
};
use super::MetricsError;

/// Generated strings and reference sets.
#[derive(Debug, Clone, Default)]
pub struct EvalSets {
    pub generated: Vec<String>,
    pub train: Vec<String>,
    pub test: Vec<String>,
    pub test_scaffolds: Option<Vec<String>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MetricGroup {
    Valid,
    Unique,
    Fcd,
    Snn,
    Frag,
    Scaf,
    IntDiv,
    Filters,
    Novelty,
    Props,
}

impl MetricGroup {
    pub const ALL: [MetricGroup; 10] = [
        MetricGroup::Valid,
        MetricGroup::Unique,
        MetricGroup::Fcd,
        MetricGroup::Snn,
        MetricGroup::Frag,
        MetricGroup::Scaf,
        MetricGroup::IntDiv,
        MetricGroup::Filters,
        MetricGroup::Novelty,
        MetricGroup::Props,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MetricGroup::Valid => "valid",
            MetricGroup::Unique => "unique",
            MetricGroup::Fcd => "fcd",
            MetricGroup::Snn => "snn",
            MetricGroup::Frag => "frag",
            MetricGroup::Scaf => "scaf",
            MetricGroup::IntDiv => "intdiv",
            MetricGroup::Filters => "filters",
            MetricGroup::Novelty => "novelty",
            MetricGroup::Props => "props",
        }
    }
}

impl std::str::FromStr for MetricGroup {
    type Err = MetricsError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase();
        MetricGroup::ALL
            .into_iter()
            .find(|g| g.name() == lower)
            .ok_or_else(|| MetricsError::UnknownMetric(s.to_string()))
    }
}

/// Embeddings for the Fréchet distance on an external model's features.
#[derive(Debug, Clone)]
pub struct FcdEmbeddings {
    pub generated: Embeddings,
    pub test: Embeddings,
    pub test_scaffolds: Option<Embeddings>,
}

#[derive(Debug, Clone)]
pub struct ReportConfig<'a> {
    pub unique_k: Vec<usize>,
    pub fingerprint: FingerprintSpec,
    pub form: SimilarityForm,
    pub properties: Vec<Descriptor>,
    pub tables: ScoreTables<'a>,
    pub filters: FilterConfig,
    pub embeddings: Option<FcdEmbeddings>,
    pub groups: BTreeSet<MetricGroup>,
    /// Rows of G per worker task in the pairwise kernels.
    pub block: usize,
}

impl Default for ReportConfig<'_> {
    fn default() -> Self {
        ReportConfig {
            unique_k: vec![1000, 10000],
            fingerprint: FingerprintSpec::default(),
            form: SimilarityForm::Similarity,
            properties: vec![Descriptor::Mw, Descriptor::Logp, Descriptor::Qed],
            tables: ScoreTables::default(),
            filters: FilterConfig::default(),
            embeddings: None,
            groups: MetricGroup::ALL.into_iter().collect(),
            block: DEFAULT_BLOCK,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricValue {
    pub name: String,
    pub value: f64,
    /// `Test`, `TestSF`, `Train`, or empty when no reference is involved.
    pub reference: String,
    pub parameters: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct MetricReport {
    pub metrics: Vec<MetricValue>,
    pub metadata: BTreeMap<String, String>,
}

impl MetricReport {
    pub fn get(&self, name: &str) -> Option<f64> {
        self.metrics.iter().find(|m| m.name == name).map(|m| m.value)
    }

    fn push(&mut self, name: impl Into<String>, value: f64, reference: &str, parameters: impl Into<String>) {
        self.metrics.push(MetricValue {
            name: name.into(),
            value,
            reference: reference.to_string(),
            parameters: parameters.into(),
        });
    }

    fn note(&mut self, key: &str, value: impl ToString) {
        self.metadata.insert(key.to_string(), value.to_string());
    }

    /// `name  value` lines followed by `# key: value` metadata lines.
    pub fn to_text(&self) -> String {
        let width = self.metrics.iter().map(|m| m.name.len()).max().unwrap_or(0);
        let mut s = String::new();
        for m in &self.metrics {
            let _ = writeln!(s, "{:<width$}  {}", m.name, m.value);
        }
        for (k, v) in &self.metadata {
            let _ = writeln!(s, "# {k}: {v}");
        }
        s
    }

    /// Tab-separated rows with a header.
    pub fn to_tsv(&self) -> String {
        let mut s = String::from("metric\tvalue\treference\tparameters\n");
        for m in &self.metrics {
            let _ = writeln!(s, "{}\t{}\t{}\t{}", m.name, m.value, m.reference, m.parameters);
        }
        s
    }
}

fn parse_reference(set: &'static str, strings: &[String]) -> Result<Vec<Molecule>, MetricsError> {
    strings
        .par_iter()
        .map(|s| {
            Molecule::from_smiles(s).map_err(|e| MetricsError::InvalidReference {
                set,
                smiles: s.clone(),
                message: e.to_string(),
            })
        })
        .collect()
}

/// Re-canonicalizes reference strings, failing on the first invalid one.
pub fn canonicalize_references(set: &'static str, strings: &[String]) -> Result<Vec<String>, MetricsError> {
    Ok(parse_reference(set, strings)?
        .iter()
        .map(|m| m.canonical_smiles().to_string())
        .collect())
}

fn fingerprint_label(spec: &FingerprintSpec) -> String {
    match spec.kind {
        FingerprintKind::Morgan => format!("morgan radius={} width={}", spec.radius, spec.width),
        FingerprintKind::Pharmacophore => format!("pharmacophore width={}", spec.width),
    }
}

fn k_label(k: usize) -> String {
    if k >= 1000 && k.is_multiple_of(1000) {
        format!("{}k", k / 1000)
    } else {
        k.to_string()
    }
}

struct Reference {
    label: &'static str,
    mols: Vec<Molecule>,
}

pub fn full_report(sets: &EvalSets, config: &ReportConfig) -> Result<MetricReport, MetricsError> {
    full_report_with_progress(sets, config, &mut |_| {})
}

/// As [`full_report`], calling `progress` with a short label before each
/// stage.
pub fn full_report_with_progress(
    sets: &EvalSets,
    config: &ReportConfig,
    progress: &mut dyn FnMut(&str),
) -> Result<MetricReport, MetricsError> {
    let wants = |g: MetricGroup| config.groups.contains(&g);
    if sets.generated.is_empty() {
        return Err(MetricsError::Empty("generated set"));
    }
    let pairwise = [MetricGroup::Snn, MetricGroup::Frag, MetricGroup::Scaf];
    if sets.test_scaffolds.is_none() {
        if let Some(g) = pairwise.iter().find(|g| wants(**g)) {
            return Err(MetricsError::MissingReference {
                reference: "TestSF",
                metric: g.name(),
            });
        }
    }
    let mut report = MetricReport::default();
    progress("parsing generated set");
    let valid = parse_valid(&sets.generated);
    report.note("count.generated", sets.generated.len());
    report.note("count.valid", valid.len());
    report.note("count.train", sets.train.len());
    report.note("count.test", sets.test.len());
    if let Some(sf) = &sets.test_scaffolds {
        report.note("count.test_scaffolds", sf.len());
    }
    report.note("fingerprint", fingerprint_label(&config.fingerprint));
    report.note("similarity_form", config.form.name());
    if valid.is_empty() {
        return Err(MetricsError::NoValid);
    }

    if wants(MetricGroup::Valid) {
        report.push(
            "Valid",
            valid.len() as f64 / sets.generated.len() as f64,
            "",
            "",
        );
    }
    if wants(MetricGroup::Unique) {
        for &k in &config.unique_k {
            let name = format!("Unique@{}", k_label(k));
            match uniqueness_of(&valid, k) {
                Ok(u) => report.push(name, u, "", format!("k={k}")),
                Err(MetricsError::Shortfall { k, valid }) => {
                    report.note(&format!("skipped.{name}"), format!("{valid} valid molecules, need {k}"))
                }
                Err(e) => return Err(e),
            }
        }
    }

    let need_refs = [MetricGroup::Snn, MetricGroup::Frag, MetricGroup::Scaf, MetricGroup::Props]
        .into_iter()
        .any(wants);
    let mut refs: Vec<Reference> = Vec::new();
    if need_refs {
        progress("parsing reference sets");
        refs.push(Reference {
            label: "Test",
            mols: parse_reference("test", &sets.test)?,
        });
        if let Some(sf) = &sets.test_scaffolds {
            refs.push(Reference {
                label: "TestSF",
                mols: parse_reference("test_scaffolds", sf)?,
            });
        }
        if refs.iter().any(|r| r.mols.is_empty()) {
            return Err(MetricsError::Empty("reference set"));
        }
    }

    if wants(MetricGroup::Fcd) {
        match &config.embeddings {
            Some(emb) => {
                progress("fitting embedding summaries");
                let g = emb.generated.summary()?;
                report.note("fcd.embedding_dim", emb.generated.dim());
                let t = emb.test.summary()?;
                report.push("FCD/Test", frechet_distance(&g, &t)?, "Test", "embeddings");
                if let Some(sf) = &emb.test_scaffolds {
                    let t = sf.summary()?;
                    report.push("FCD/TestSF", frechet_distance(&g, &t)?, "TestSF", "embeddings");
                }
            }
            None => report.note("skipped.FCD", "no embeddings supplied"),
        }
    }

    let needs_fps = wants(MetricGroup::Snn) || wants(MetricGroup::IntDiv);
    let g_fps = if needs_fps {
        progress("fingerprinting generated set");
        Some(FingerprintMatrix::new(&config.fingerprint.compute_all(&valid)?)?)
    } else {
        None
    };
    let fp_label = fingerprint_label(&config.fingerprint);
    if let (true, Some(g)) = (wants(MetricGroup::Snn), &g_fps) {
        for r in &refs {
            progress(&format!("SNN/{}", r.label));
            let rm = FingerprintMatrix::new(&config.fingerprint.compute_all(&r.mols)?)?;
            report.push(
                format!("SNN/{}", r.label),
                snn_matrix(g, &rm, config.block)?,
                r.label,
                fp_label.clone(),
            );
        }
    }
    type ProfileFn = fn(&[Molecule]) -> Profile;
    let profiles: [(MetricGroup, &str, ProfileFn); 2] = [
        (MetricGroup::Frag, "Frag", fragment_profile),
        (MetricGroup::Scaf, "Scaf", scaffold_profile),
    ];
    for (group, name, build) in profiles {
        if !wants(group) {
            continue;
        }
        progress(name);
        let gp = build(&valid);
        for r in &refs {
            let cos = profile_cosine(&gp, &build(&r.mols))?;
            let params = if group == MetricGroup::Frag { "brics" } else { "murcko" };
            report.push(
                format!("{name}/{}", r.label),
                config.form.apply(cos),
                r.label,
                format!("{params} {}", config.form.name()),
            );
        }
    }
    if let (true, Some(g)) = (wants(MetricGroup::IntDiv), &g_fps) {
        progress("IntDiv");
        report.push("IntDiv", internal_diversity_matrix(g, 1, config.block)?, "", format!("p=1 {fp_label}"));
        report.push("IntDiv2", internal_diversity_matrix(g, 2, config.block)?, "", format!("p=2 {fp_label}"));
    }
    if wants(MetricGroup::Filters) {
        progress("Filters");
        let packs: Vec<String> = config
            .filters
            .packs
            .iter()
            .map(|p| format!("{}@{}", p.name, p.version))
            .collect();
        report.push(
            "Filters",
            filters_fraction(&valid, &config.filters)?,
            "",
            packs.join(","),
        );
    }
    if wants(MetricGroup::Novelty) {
        progress("Novelty");
        let train: HashSet<String> = canonicalize_references("train", &sets.train)?.into_iter().collect();
        report.push("Novelty", novelty_of(&valid, &train)?, "Train", "");
    }
    if wants(MetricGroup::Props) {
        if let Some(test) = refs.first() {
            for &d in &config.properties {
                progress(&format!("PropFD/{}", d.name()));
                report.push(
                    format!("PropFD/{}", d.name()),
                    property_frechet(&valid, &test.mols, d, config.tables)?,
                    test.label,
                    "gaussian-1d",
                );
            }
        }
    }
    if let Some(m) = report.metrics.iter().find(|m| !m.value.is_finite()) {
        return Err(MetricsError::NonFiniteMetric(m.name.clone()));
    }
    Ok(report)
}
