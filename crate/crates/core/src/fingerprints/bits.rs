use std::fmt;

/// Which structural encoding a fingerprint carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FingerprintKind {
    Morgan,
    Pharmacophore,
}

impl FingerprintKind {
    pub fn code(self) -> u8 {
        match self {
            FingerprintKind::Morgan => 1,
            FingerprintKind::Pharmacophore => 2,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            1 => Some(FingerprintKind::Morgan),
            2 => Some(FingerprintKind::Pharmacophore),
            _ => None,
        }
    }
}

impl fmt::Display for FingerprintKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FingerprintKind::Morgan => "morgan",
            FingerprintKind::Pharmacophore => "pharmacophore",
        })
    }
}

impl std::str::FromStr for FingerprintKind {
    type Err = FingerprintError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "morgan" => Ok(FingerprintKind::Morgan),
            "pharmacophore" | "pharm" => Ok(FingerprintKind::Pharmacophore),
            _ => Err(FingerprintError::UnknownKind(s.to_string())),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum FingerprintError {
    #[error("fingerprint width {0} is not a positive multiple of 64")]
    BadWidth(usize),
    #[error("fingerprint widths differ: {0} vs {1}")]
    WidthMismatch(usize, usize),
    #[error("fingerprint kinds differ: {0} vs {1}")]
    KindMismatch(FingerprintKind, FingerprintKind),
    #[error("unknown fingerprint kind '{0}'")]
    UnknownKind(String),
    #[error("malformed fingerprint file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Fixed-width bit vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitFingerprint {
    kind: FingerprintKind,
    words: Vec<u64>,
}

impl BitFingerprint {
    pub fn new(kind: FingerprintKind, width: usize) -> Result<Self, FingerprintError> {
        if width == 0 || !width.is_multiple_of(64) {
            return Err(FingerprintError::BadWidth(width));
        }
        Ok(BitFingerprint {
            kind,
            words: vec![0; width / 64],
        })
    }

    pub(crate) fn from_words(kind: FingerprintKind, words: Vec<u64>) -> Self {
        BitFingerprint { kind, words }
    }

    pub fn kind(&self) -> FingerprintKind {
        self.kind
    }
    pub fn width(&self) -> usize {
        self.words.len() * 64
    }
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn set(&mut self, bit: usize) {
        self.words[bit / 64] |= 1 << (bit % 64);
    }

    pub fn get(&self, bit: usize) -> bool {
        self.words[bit / 64] >> (bit % 64) & 1 == 1
    }

    pub fn count_ones(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.width()).filter(|&b| self.get(b))
    }
}

/// Tanimoto over raw words of equal length. Two empty vectors score 1.
pub fn tanimoto_words(a: &[u64], b: &[u64]) -> f64 {
    let mut inter = 0u32;
    let mut union = 0u32;
    for (x, y) in a.iter().zip(b) {
        inter += (x & y).count_ones();
        union += (x | y).count_ones();
    }
    if union == 0 {
        1.0
    } else {
        inter as f64 / union as f64
    }
}

/// |a ∧ b| / |a ∨ b|; 1.0 when both are empty and 0.0 when only one is.
pub fn tanimoto(a: &BitFingerprint, b: &BitFingerprint) -> Result<f64, FingerprintError> {
    if a.width() != b.width() {
        return Err(FingerprintError::WidthMismatch(a.width(), b.width()));
    }
    if a.kind != b.kind {
        return Err(FingerprintError::KindMismatch(a.kind, b.kind));
    }
    Ok(tanimoto_words(&a.words, &b.words))
}
