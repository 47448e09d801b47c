//! Core algorithms for benchmarking molecular generative models: SMILES
//! parsing and canonicalization, substructure filters, fingerprints,
//! fragmentation, descriptors, distribution metrics, dataset preparation
//! and an n-gram baseline generator.

pub mod baseline;
pub mod chem;
pub mod dataset;
pub mod decompose;
pub mod descriptors;
pub mod fingerprints;
pub mod metrics;
pub mod substructure;

pub use chem::{parse_smiles, Atom, Bond, BondOrder, Element, Molecule, ParseDiagnostic, ParseErrorKind};
pub use dataset::{FilterConfig, SplitSpec, Splits};
pub use decompose::Profile;
pub use descriptors::{Descriptor, ScoreTables};
pub use fingerprints::{tanimoto, BitFingerprint, FingerprintKind, FingerprintSpec};
pub use metrics::{EvalSets, GaussianSummary, MetricReport};
pub use baseline::NgramModel;
pub use substructure::{FilterPack, Pattern};
