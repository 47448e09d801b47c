//! Gaussian summaries and the Fréchet distance between them.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;

use crate::chem::Molecule;
use crate::descriptors::{descriptor_value, Descriptor, ScoreTables};

use super::MetricsError;

/// Most negative covariance eigenvalue accepted before clamping to zero.
pub const PSD_TOLERANCE: f64 = 1e-10;

/// Mean and unbiased covariance of a sample.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianSummary {
    pub mean: DVector<f64>,
    pub covariance: DMatrix<f64>,
    pub n: usize,
}

impl GaussianSummary {
    pub fn new(mean: DVector<f64>, covariance: DMatrix<f64>, n: usize) -> Result<Self, MetricsError> {
        if covariance.nrows() != mean.len() || covariance.ncols() != mean.len() {
            return Err(MetricsError::DimensionMismatch {
                left: mean.len(),
                right: covariance.nrows(),
            });
        }
        Ok(GaussianSummary { mean, covariance, n })
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    /// Fits rows of equal length. Needs at least two rows.
    pub fn fit<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self, MetricsError> {
        let n = rows.len();
        if n < 2 {
            return Err(MetricsError::TooFewSamples(n));
        }
        let dim = rows[0].as_ref().len();
        let mut mean = DVector::zeros(dim);
        for r in rows {
            let r = r.as_ref();
            if r.len() != dim {
                return Err(MetricsError::DimensionMismatch { left: dim, right: r.len() });
            }
            if r.iter().any(|x| !x.is_finite()) {
                return Err(MetricsError::NonFinite);
            }
            for (m, x) in mean.iter_mut().zip(r) {
                *m += x;
            }
        }
        mean /= n as f64;
        let mut cov = DMatrix::zeros(dim, dim);
        let mut d = DVector::zeros(dim);
        for r in rows {
            for (k, x) in r.as_ref().iter().enumerate() {
                d[k] = x - mean[k];
            }
            cov.syger(1.0, &d, &d, 1.0);
        }
        cov /= (n - 1) as f64;
        cov.fill_upper_triangle_with_lower_triangle();
        Ok(GaussianSummary { mean, covariance: cov, n })
    }

    pub fn fit_scalar(values: &[f64]) -> Result<Self, MetricsError> {
        let rows: Vec<[f64; 1]> = values.iter().map(|&v| [v]).collect();
        Self::fit(&rows)
    }
}

fn check_psd(eigenvalues: &DVector<f64>) -> Result<(), MetricsError> {
    match eigenvalues.iter().copied().fold(f64::INFINITY, f64::min) {
        m if m < -PSD_TOLERANCE => Err(MetricsError::NotPsd(m)),
        _ => Ok(()),
    }
}

/// Square roots of eigenvalues, with values at rounding level relative to
/// the largest one taken as zero.
fn noise_free_roots(eigenvalues: &DVector<f64>) -> DVector<f64> {
    let top = eigenvalues.iter().fold(0.0f64, |m, l| m.max(l.abs()));
    let floor = top * f64::EPSILON * (4 * eigenvalues.len()) as f64;
    eigenvalues.map(|l| if l > floor { l.sqrt() } else { 0.0 })
}

fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// `|μa − μb|² + Tr(Σa) + Tr(Σb) − 2 Σ √λᵢ`, λ the eigenvalues of
/// `Σa^½ Σb Σa^½`. Negative rounding residue is clamped to zero.
pub fn frechet_distance(a: &GaussianSummary, b: &GaussianSummary) -> Result<f64, MetricsError> {
    if a.dim() != b.dim() {
        return Err(MetricsError::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let sa = symmetrize(&a.covariance);
    let sb = symmetrize(&b.covariance);
    if sa.iter().chain(sb.iter()).chain(a.mean.iter()).chain(b.mean.iter()).any(|x| !x.is_finite()) {
        return Err(MetricsError::NonFinite);
    }
    let ea = SymmetricEigen::new(sa.clone());
    check_psd(&ea.eigenvalues)?;
    check_psd(&SymmetricEigen::new(sb.clone()).eigenvalues)?;
    let roots = noise_free_roots(&ea.eigenvalues);
    let root_a = &ea.eigenvectors * DMatrix::from_diagonal(&roots) * ea.eigenvectors.transpose();
    let m = symmetrize(&(&root_a * &sb * &root_a));
    let cross: f64 = noise_free_roots(&SymmetricEigen::new(m).eigenvalues).sum();
    let mean_term = (&a.mean - &b.mean).norm_squared();
    let d = mean_term + sa.trace() + sb.trace() - 2.0 * cross;
    Ok(d.max(0.0))
}

/// Descriptor values over a set, `None` when a needed table is absent.
pub fn descriptor_values(mols: &[Molecule], d: Descriptor, tables: ScoreTables) -> Option<Vec<f64>> {
    mols.par_iter().map(|m| descriptor_value(m, d, tables)).collect()
}

/// Fréchet distance between 1-D Gaussian fits of one descriptor.
pub fn property_frechet(
    g: &[Molecule],
    r: &[Molecule],
    d: Descriptor,
    tables: ScoreTables,
) -> Result<f64, MetricsError> {
    if g.is_empty() || r.is_empty() {
        return Err(MetricsError::Empty("molecule set"));
    }
    let missing = || MetricsError::MissingTable(d.name());
    let gv = descriptor_values(g, d, tables).ok_or_else(missing)?;
    let rv = descriptor_values(r, d, tables).ok_or_else(missing)?;
    frechet_distance(&GaussianSummary::fit_scalar(&gv)?, &GaussianSummary::fit_scalar(&rv)?)
}
