//! Profile cosine, nearest-neighbour similarity and internal diversity.

use rayon::prelude::*;

use crate::chem::Molecule;
use crate::decompose::{fragment_profile, scaffold_profile, Profile};
use crate::fingerprints::{BitFingerprint, FingerprintError, FingerprintKind};

use super::MetricsError;

/// Whether profile comparisons report `cos` or `1 - cos`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum SimilarityForm {
    #[default]
    Similarity,
    Distance,
}

impl SimilarityForm {
    pub fn apply(self, cos: f64) -> f64 {
        match self {
            SimilarityForm::Similarity => cos,
            SimilarityForm::Distance => 1.0 - cos,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SimilarityForm::Similarity => "similarity",
            SimilarityForm::Distance => "distance",
        }
    }
}

/// Cosine of two count vectors over the union of their keys. A single empty
/// profile scores 0; two empty profiles are an error.
pub fn profile_cosine(a: &Profile, b: &Profile) -> Result<f64, MetricsError> {
    if a.is_empty() && b.is_empty() {
        return Err(MetricsError::EmptyProfiles);
    }
    let norm = |p: &Profile| p.iter().map(|(_, c)| (c as f64) * (c as f64)).sum::<f64>();
    let (na, nb) = (norm(a), norm(b));
    if na == 0.0 || nb == 0.0 {
        return Ok(0.0);
    }
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let dot: f64 = small.iter().map(|(k, c)| c as f64 * large.get(k) as f64).sum();
    Ok((dot / (na.sqrt() * nb.sqrt())).clamp(0.0, 1.0))
}

pub fn fragment_similarity(g: &[Molecule], r: &[Molecule], form: SimilarityForm) -> Result<f64, MetricsError> {
    if g.is_empty() || r.is_empty() {
        return Err(MetricsError::Empty("molecule set"));
    }
    Ok(form.apply(profile_cosine(&fragment_profile(g), &fragment_profile(r))?))
}

pub fn scaffold_similarity(g: &[Molecule], r: &[Molecule], form: SimilarityForm) -> Result<f64, MetricsError> {
    if g.is_empty() || r.is_empty() {
        return Err(MetricsError::Empty("molecule set"));
    }
    Ok(form.apply(profile_cosine(&scaffold_profile(g), &scaffold_profile(r))?))
}

/// Fingerprints packed row-major with cached popcounts.
#[derive(Debug, Clone)]
pub struct FingerprintMatrix {
    kind: FingerprintKind,
    stride: usize,
    words: Vec<u64>,
    counts: Vec<u32>,
}

impl FingerprintMatrix {
    pub fn new(fps: &[BitFingerprint]) -> Result<Self, MetricsError> {
        let first = fps.first().ok_or(MetricsError::Empty("fingerprint set"))?;
        let stride = first.words().len();
        let mut words = Vec::with_capacity(stride * fps.len());
        let mut counts = Vec::with_capacity(fps.len());
        for fp in fps {
            if fp.width() != first.width() {
                return Err(FingerprintError::WidthMismatch(first.width(), fp.width()).into());
            }
            if fp.kind() != first.kind() {
                return Err(FingerprintError::KindMismatch(first.kind(), fp.kind()).into());
            }
            words.extend_from_slice(fp.words());
            counts.push(fp.count_ones());
        }
        Ok(FingerprintMatrix {
            kind: first.kind(),
            stride,
            words,
            counts,
        })
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn width(&self) -> usize {
        self.stride * 64
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.words[i * self.stride..(i + 1) * self.stride]
    }

    fn check_compatible(&self, other: &FingerprintMatrix) -> Result<(), MetricsError> {
        if self.stride != other.stride {
            return Err(FingerprintError::WidthMismatch(self.width(), other.width()).into());
        }
        if self.kind != other.kind {
            return Err(FingerprintError::KindMismatch(self.kind, other.kind).into());
        }
        Ok(())
    }
}

#[inline(always)]
fn ratio(inter: u32, union: u32) -> f64 {
    if union == 0 {
        1.0
    } else {
        inter as f64 / union as f64
    }
}

#[inline(always)]
fn intersect(a: &[u64], b: &[u64]) -> u32 {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum()
}

#[inline(always)]
fn max_row_generic(q: &[u64], qc: u32, r: &FingerprintMatrix) -> f64 {
    let mut best = 0.0f64;
    for (j, row) in r.words.chunks_exact(r.stride).enumerate() {
        let inter = intersect(q, row);
        let union = qc + r.counts[j] - inter;
        if inter == union {
            return 1.0;
        }
        let t = ratio(inter, union);
        if t > best {
            best = t;
        }
    }
    best
}

#[inline(always)]
fn sum_row_generic(q: &[u64], qc: u32, g: &FingerprintMatrix, p: i32) -> f64 {
    let mut sum = 0.0f64;
    for (j, row) in g.words.chunks_exact(g.stride).enumerate() {
        let inter = intersect(q, row);
        sum += ratio(inter, qc + g.counts[j] - inter).powi(p);
    }
    sum
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "popcnt")]
unsafe fn max_row_popcnt(q: &[u64], qc: u32, r: &FingerprintMatrix) -> f64 {
    max_row_generic(q, qc, r)
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "popcnt")]
unsafe fn sum_row_popcnt(q: &[u64], qc: u32, g: &FingerprintMatrix, p: i32) -> f64 {
    sum_row_generic(q, qc, g, p)
}

fn has_popcnt() -> bool {
    #[cfg(target_arch = "x86_64")]
    {
        std::arch::is_x86_feature_detected!("popcnt")
    }
    #[cfg(not(target_arch = "x86_64"))]
    {
        false
    }
}

fn max_row(q: &[u64], qc: u32, r: &FingerprintMatrix, popcnt: bool) -> f64 {
    #[cfg(target_arch = "x86_64")]
    if popcnt {
        // SAFETY: the caller detected the popcnt feature at runtime.
        return unsafe { max_row_popcnt(q, qc, r) };
    }
    let _ = popcnt;
    max_row_generic(q, qc, r)
}

fn sum_row(q: &[u64], qc: u32, g: &FingerprintMatrix, p: i32, popcnt: bool) -> f64 {
    #[cfg(target_arch = "x86_64")]
    if popcnt {
        // SAFETY: the caller detected the popcnt feature at runtime.
        return unsafe { sum_row_popcnt(q, qc, g, p) };
    }
    let _ = popcnt;
    sum_row_generic(q, qc, g, p)
}

/// Rows of G handed to one worker at a time.
pub const DEFAULT_BLOCK: usize = 64;

/// Mean over G of the best Tanimoto against R. Each row stops scanning at
/// an exact match. Row maxima are summed in G order, so the result does not
/// depend on the thread count or `block`.
pub fn snn_matrix(g: &FingerprintMatrix, r: &FingerprintMatrix, block: usize) -> Result<f64, MetricsError> {
    g.check_compatible(r)?;
    if g.is_empty() || r.is_empty() {
        return Err(MetricsError::Empty("fingerprint set"));
    }
    let popcnt = has_popcnt();
    let block = block.max(1);
    let maxima: Vec<f64> = (0..g.len())
        .into_par_iter()
        .with_min_len(block)
        .map(|i| max_row(g.row(i), g.counts[i], r, popcnt))
        .collect();
    Ok(maxima.iter().sum::<f64>() / g.len() as f64)
}

pub fn snn(g: &[BitFingerprint], r: &[BitFingerprint]) -> Result<f64, MetricsError> {
    snn_matrix(&FingerprintMatrix::new(g)?, &FingerprintMatrix::new(r)?, DEFAULT_BLOCK)
}

/// `1 - (mean of T^p over all ordered pairs, self-pairs included)^(1/p)`.
/// Row sums are accumulated in G order.
pub fn internal_diversity_matrix(g: &FingerprintMatrix, p: u32, block: usize) -> Result<f64, MetricsError> {
    if !(p == 1 || p == 2) {
        return Err(MetricsError::BadPower(p));
    }
    if g.is_empty() {
        return Err(MetricsError::Empty("fingerprint set"));
    }
    let popcnt = has_popcnt();
    let n = g.len();
    let rows: Vec<f64> = (0..n)
        .into_par_iter()
        .with_min_len(block.max(1))
        .map(|i| sum_row(g.row(i), g.counts[i], g, p as i32, popcnt))
        .collect();
    let mean = rows.iter().sum::<f64>() / (n as f64 * n as f64);
    Ok(1.0 - mean.powf(1.0 / p as f64))
}

pub fn internal_diversity(g: &[BitFingerprint], p: u32) -> Result<f64, MetricsError> {
    internal_diversity_matrix(&FingerprintMatrix::new(g)?, p, DEFAULT_BLOCK)
}
