//! Morgan and pharmacophore fingerprints, Tanimoto similarity, batch
//! computation and the binary fingerprint cache.

mod bits;
mod cache;
mod hash;
mod morgan;
mod pharmacophore;

use rayon::prelude::*;

use crate::chem::Molecule;

pub use bits::{tanimoto, tanimoto_words, BitFingerprint, FingerprintError, FingerprintKind};
pub use cache::{read_cache, write_cache};
pub use hash::{combine, mix64};
pub use morgan::{fold, morgan_environments, morgan_fingerprint, morgan_ids, Environment, DEFAULT_RADIUS, DEFAULT_WIDTH};
pub use pharmacophore::{
    pharmacophore_features, pharmacophore_fingerprint, Feature, FeatureType, DEFAULT_PHARMACOPHORE_WIDTH,
};

/// Fingerprint settings for batch computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FingerprintSpec {
    pub kind: FingerprintKind,
    pub width: usize,
    pub radius: u32,
}

impl Default for FingerprintSpec {
    fn default() -> Self {
        FingerprintSpec {
            kind: FingerprintKind::Morgan,
            width: DEFAULT_WIDTH,
            radius: DEFAULT_RADIUS,
        }
    }
}

impl FingerprintSpec {
    pub fn pharmacophore() -> Self {
        FingerprintSpec {
            kind: FingerprintKind::Pharmacophore,
            width: DEFAULT_PHARMACOPHORE_WIDTH,
            radius: 0,
        }
    }

    pub fn compute(&self, mol: &Molecule) -> Result<BitFingerprint, FingerprintError> {
        match self.kind {
            FingerprintKind::Morgan => morgan_fingerprint(mol, self.radius, self.width),
            FingerprintKind::Pharmacophore => pharmacophore_fingerprint(mol, self.width),
        }
    }

    /// Fingerprints for a batch, computed in parallel, in input order.
    pub fn compute_all(&self, mols: &[Molecule]) -> Result<Vec<BitFingerprint>, FingerprintError> {
        if self.width == 0 || !self.width.is_multiple_of(64) {
            return Err(FingerprintError::BadWidth(self.width));
        }
        mols.par_iter().map(|m| self.compute(m)).collect()
    }
}
